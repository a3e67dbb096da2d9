#include "fcalab/lfsr.hpp"

#include "fcalab/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>

namespace fcalab {

ConnectionPolynomial::ConnectionPolynomial(std::vector<unsigned> exponents) : exponents_(std::move(exponents))
{
    std::sort(exponents_.begin(), exponents_.end());
    if (std::adjacent_find(exponents_.begin(), exponents_.end()) != exponents_.end()) {
        throw ParseError("polynomial exponents must be distinct");
    }
    if (exponents_.size() < 2) {
        throw ParseError("polynomial needs at least the exponents 0 and k");
    }
    if (exponents_.front() != 0) {
        throw ParseError("polynomial must have a constant term (exponent 0)");
    }
    if (exponents_.back() > 4096) {
        throw ParseError("polynomial degree above 4096 is not supported");
    }
    if (taps() % 2 != 0) {
        throw ParseError("polynomial must have an odd number of nonzero coefficients (even tap count), got " +
                         std::to_string(exponents_.size()));
    }
}

ConnectionPolynomial ConnectionPolynomial::parse(std::string_view text)
{
    std::vector<unsigned> exps;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto field = text.substr(pos, end - pos);
        while (!field.empty() && field.front() == ' ') {
            field.remove_prefix(1);
        }
        while (!field.empty() && field.back() == ' ') {
            field.remove_suffix(1);
        }
        unsigned value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw ParseError("bad exponent '" + std::string(field) + "' in polynomial '" + std::string(text) + "'");
        }
        exps.push_back(value);
        pos = end + 1;
    }
    return ConnectionPolynomial(std::move(exps));
}

std::string ConnectionPolynomial::to_string() const
{
    std::string s;
    for (auto it = exponents_.rbegin(); it != exponents_.rend(); ++it) {
        if (!s.empty()) {
            s += ',';
        }
        s += std::to_string(*it);
    }
    return s;
}

BitSequence generate(const ConnectionPolynomial& poly, const LfsrKey& key, std::size_t n)
{
    const std::size_t k = poly.degree();
    if (key.state.size() != k) {
        throw DimensionError("key length " + std::to_string(key.state.size()) + " does not match degree " +
                             std::to_string(k));
    }
    if (key.state.none()) {
        throw DegenerateKeyError("all-zero key generates the zero sequence");
    }
    if (n < k) {
        throw InsufficientLengthError("sequence length must be at least the degree");
    }

    const auto& exps = poly.exponents();
    BitSequence a(n);
    for (std::size_t i = 0; i < k; ++i) {
        a.set(i, key.state[i]);
    }
    // a_{j+k} = a_{j+j_0} + ... + a_{j+j_{t-1}}
    for (std::size_t j = 0; j + k < n; ++j) {
        bool v = false;
        for (std::size_t e = 0; e + 1 < exps.size(); ++e) {
            v ^= a[j + exps[e]];
        }
        a.set(j + k, v);
    }
    return a;
}

OutputRowTable::OutputRowTable(const ConnectionPolynomial& poly, std::size_t count)
{
    const std::size_t k = poly.degree();
    const auto& exps = poly.exponents();
    rows_.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        BitSequence r(k);
        if (j < k) {
            r.set(j, true);
        } else {
            const std::size_t base = j - k;
            for (std::size_t e = 0; e + 1 < exps.size(); ++e) {
                r ^= rows_[base + exps[e]];
            }
        }
        rows_.push_back(std::move(r));
    }
}

const BitSequence& OutputRowTable::row(std::size_t j) const
{
    if (j >= rows_.size()) {
        throw DimensionError("output row " + std::to_string(j) + " not in table of " + std::to_string(rows_.size()));
    }
    return rows_[j];
}

BitSequence output_row(const ConnectionPolynomial& poly, std::size_t j)
{
    return OutputRowTable(poly, j + 1).row(j);
}

std::optional<std::size_t> state_period(const ConnectionPolynomial& poly)
{
    const unsigned k = poly.degree();
    if (k > 24) {
        return std::nullopt;
    }
    std::uint32_t tap_mask = 0;
    for (auto e : poly.exponents()) {
        if (e < k) {
            tap_mask |= std::uint32_t{1} << e;
        }
    }
    const std::uint32_t start = 1;
    std::uint32_t state = start;
    const std::size_t limit = std::size_t{1} << k;
    for (std::size_t steps = 1; steps <= limit; ++steps) {
        const std::uint32_t feedback = static_cast<std::uint32_t>(std::popcount(state & tap_mask) & 1);
        state = (state >> 1) | (feedback << (k - 1));
        if (state == start) {
            return steps;
        }
    }
    return std::nullopt;
}

bool passes_period_check(const ConnectionPolynomial& poly)
{
    const unsigned k = poly.degree();
    if (k > 24) {
        return true;
    }
    auto period = state_period(poly);
    return period && *period == (std::size_t{1} << k) - 1;
}

} // namespace fcalab
