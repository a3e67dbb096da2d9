#pragma once

#include "fcalab/gf2.hpp"
#include "fcalab/lfsr.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fcalab {

/// Which (check, member) incidences count toward a bit's c_s and c_to.
enum class CountMode
{
    all_positions, // a bit is counted in every check it appears in: t+1 per level
    leading_only,  // only checks where the bit is the lowest index: 1 per level
};

std::string_view to_string(CountMode mode);
CountMode parse_count_mode(std::string_view text);

/// One squaring level of the base recurrence: exponents scaled by 2^d.
struct CheckLevel
{
    unsigned level = 0;
    std::vector<std::size_t> offsets; // ascending, offsets.front() == 0
    std::size_t span = 0;             // k * 2^d, the last offset
    std::size_t shifts = 0;           // valid shifts 0 .. shifts-1
    std::size_t first_check = 0;      // flat id of shift 0
};

/// Parity checks of a length-n sequence: every shift of every squared copy of
/// g(x) that fits inside the sequence. Checks are identified by (level, shift)
/// or by a flat id; index sets are produced on demand so that memory stays
/// independent of n.
class CheckSystem
{
public:
    /// Includes level d iff k * 2^d < n. Throws InsufficientLengthError if n <= k.
    CheckSystem(const ConnectionPolynomial& poly, std::size_t n, CountMode mode = CountMode::all_positions);

    std::size_t length() const { return n_; }
    unsigned taps() const { return taps_; }
    unsigned degree() const { return degree_; }
    CountMode mode() const { return mode_; }
    const std::vector<CheckLevel>& levels() const { return levels_; }
    std::size_t check_count() const { return check_count_; }

    /// Total checks counted for bit j.
    std::size_t c_to(std::size_t j) const;
    std::vector<std::uint32_t> all_c_to() const;
    double mean_c_to() const;

    /// Index sets of the counted checks containing bit j.
    std::vector<std::vector<std::size_t>> checks_of(std::size_t j) const;

    /// True iff check (level, shift) evaluates to 0 on y.
    bool satisfied(const BitSequence& y, std::size_t level, std::size_t shift) const;

    /// Per-check parity, indexed by flat check id; 0 means satisfied.
    std::vector<std::uint8_t> syndrome(const BitSequence& y) const;

    /// c_s for every bit.
    std::vector<std::uint32_t> satisfied_counts(const BitSequence& y) const;

    bool all_satisfied(const BitSequence& y) const;

    /// Whether member slot `slot` of a check counts toward that member's totals.
    bool counts_slot(std::size_t slot) const { return mode_ == CountMode::all_positions || slot == 0; }

private:
    std::size_t n_;
    unsigned taps_;
    unsigned degree_;
    CountMode mode_;
    std::vector<CheckLevel> levels_;
    std::size_t check_count_ = 0;
};

/// Probability that an even number of t independent bits with flip rate p'
/// are in error.
double even_parity_prob(double p_prime, unsigned t);

struct ReliabilityModel
{
    double p_prime = 0.0;
    unsigned t = 0;
    double s = 1.0;

    static ReliabilityModel make(double p_prime, unsigned t) { return {p_prime, t, even_parity_prob(p_prime, t)}; }
};

/// Pr(y_j = a_j | h of m checks hold) with prior Pr(y_j = a_j) = prior_correct.
double posterior_from_prior(double prior_correct, double s, std::size_t h, std::size_t m);

/// Pr(y_j = a_j | h of m checks hold) with prior 1 - p'. Throws RangeError if h > m.
double posterior(double p_prime, double s, std::size_t h, std::size_t m);

double binomial_pmf(std::size_t m, double q, std::size_t h);
/// Pr(X >= h) for X ~ Bin(m, q).
double binomial_upper_tail(std::size_t m, double q, std::size_t h);
/// Pr(X < h) for X ~ Bin(m, q).
double binomial_lower_tail(std::size_t m, double q, std::size_t h);

} // namespace fcalab
