#pragma once

#include "fcalab/gf2.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fcalab {

/// Connection polynomial g(x), stored as the ascending list of exponents with
/// a nonzero coefficient. The first exponent is 0, the last is the degree k,
/// and the number of feedback taps t (= exponent count - 1) is even.
class ConnectionPolynomial
{
public:
    /// Accepts the exponents in any order; duplicates are rejected.
    explicit ConnectionPolynomial(std::vector<unsigned> exponents);

    /// Parses a comma-separated exponent list such as "31,21,12,3,2,1,0".
    static ConnectionPolynomial parse(std::string_view text);

    const std::vector<unsigned>& exponents() const { return exponents_; }
    unsigned degree() const { return exponents_.back(); }
    unsigned taps() const { return static_cast<unsigned>(exponents_.size() - 1); }

    /// Descending exponent list, the inverse of parse().
    std::string to_string() const;

    friend bool operator==(const ConnectionPolynomial&, const ConnectionPolynomial&) = default;

private:
    std::vector<unsigned> exponents_;
};

/// Initial state a_0 .. a_{k-1}.
struct LfsrKey
{
    BitSequence state;

    friend bool operator==(const LfsrKey&, const LfsrKey&) = default;
};

/// Output a_0 .. a_{n-1}. Throws DegenerateKeyError on an all-zero key.
BitSequence generate(const ConnectionPolynomial& poly, const LfsrKey& key, std::size_t n);

/// Row r with a_j = r . key for every key.
BitSequence output_row(const ConnectionPolynomial& poly, std::size_t j);

/// output_row for every j < count, computed once by running the recurrence
/// on symbolic unit vectors.
class OutputRowTable
{
public:
    OutputRowTable(const ConnectionPolynomial& poly, std::size_t count);

    std::size_t size() const { return rows_.size(); }
    const BitSequence& row(std::size_t j) const;

private:
    std::vector<BitSequence> rows_;
};

/// Period of the state sequence started from the unit state; only for k <= 24.
std::optional<std::size_t> state_period(const ConnectionPolynomial& poly);

/// True when the period check confirms maximal length. Polynomials with k > 24
/// are not checked and report true.
bool passes_period_check(const ConnectionPolynomial& poly);

} // namespace fcalab
