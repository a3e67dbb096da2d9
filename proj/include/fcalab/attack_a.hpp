#pragma once

#include "fcalab/checks.hpp"
#include "fcalab/gf2.hpp"
#include "fcalab/lfsr.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace fcalab {

/// How a candidate key is accepted during the error-pattern search.
enum class Verification
{
    oracle,                // compare against the known true key
    correlation_threshold, // agreement with y above a binomial threshold
};

std::string_view to_string(Verification v);
Verification parse_verification(std::string_view text);

struct AttackAConfig
{
    ConnectionPolynomial poly;
    BitSequence y;
    double p_prime = 0.0;
    Verification verification = Verification::oracle;
    double margin = 3.0; // standard deviations below N(1 - p')
    CountMode count_mode = CountMode::all_positions;
    std::optional<LfsrKey> truth; // required in oracle mode
};

struct Selection
{
    std::vector<std::size_t> positions; // in admission order; row i of matrix belongs to positions[i]
    std::vector<double> reliability;    // p* of each selected position
    Gf2Matrix matrix;
};

/// Greedy selection of the k most reliable positions with independent
/// output rows. Ties in p* go to the lower index.
Selection select_reliable(const CheckSystem& checks, const BitSequence& y, const ReliabilityModel& model,
                          const OutputRowTable& rows);
Selection select_reliable(const CheckSystem& checks, const BitSequence& y, const ReliabilityModel& model,
                          const ConnectionPolynomial& poly);

struct RbarEstimate
{
    double rbar = 0.0;
    std::size_t h_prime = 0;
    std::size_t m_prime = 0;
};

/// Expected number of errors among the k best bits.
RbarEstimate estimate_rbar(unsigned k, std::size_t n, const CheckSystem& checks, const ReliabilityModel& model);

struct TrialBound
{
    std::uint64_t exact = 0; // A(k, r) = sum_{i<=r} C(k, i)
    double bound = 0.0;      // 2^{H(r/k) k}
};

TrialBound bound_trials(unsigned k, unsigned r);

double binary_entropy(double x);

/// 2^{H(r/k) k} for a real-valued r.
double entropy_bound(unsigned k, double r);

struct AttackAReport
{
    bool success = false;
    std::optional<LfsrKey> key;
    std::uint64_t trials = 0;
    std::vector<std::size_t> selected;
    std::optional<std::size_t> selection_errors; // wrong bits among the selected, when truth is known
    RbarEstimate estimate;
    double bound = 0.0;
};

/// Solve, verify, then walk error patterns by increasing weight,
/// lexicographic within a weight over the selected positions ordered least
/// reliable first. The trial count is the canonical index of the accepted
/// pattern, starting at 1 for the unmodified solve.
AttackAReport run_attack_a(const AttackAConfig& cfg);

} // namespace fcalab
