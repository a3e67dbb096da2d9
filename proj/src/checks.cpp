#include "fcalab/checks.hpp"

#include "fcalab/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fcalab {

std::string_view to_string(CountMode mode)
{
    return mode == CountMode::all_positions ? "all" : "leading";
}

CountMode parse_count_mode(std::string_view text)
{
    if (text == "all") {
        return CountMode::all_positions;
    }
    if (text == "leading") {
        return CountMode::leading_only;
    }
    throw ParseError("count mode must be 'all' or 'leading', got '" + std::string(text) + "'");
}

CheckSystem::CheckSystem(const ConnectionPolynomial& poly, std::size_t n, CountMode mode)
    : n_(n), taps_(poly.taps()), degree_(poly.degree()), mode_(mode)
{
    if (n <= poly.degree()) {
        throw InsufficientLengthError("sequence length " + std::to_string(n) + " must exceed the degree " +
                                      std::to_string(poly.degree()));
    }
    for (unsigned d = 0;; ++d) {
        const std::size_t span = std::size_t{poly.degree()} << d;
        if (span >= n) {
            break;
        }
        CheckLevel lvl;
        lvl.level = d;
        lvl.span = span;
        lvl.shifts = n - span;
        lvl.first_check = check_count_;
        for (auto e : poly.exponents()) {
            lvl.offsets.push_back(std::size_t{e} << d);
        }
        check_count_ += lvl.shifts;
        levels_.push_back(std::move(lvl));
    }
}

std::size_t CheckSystem::c_to(std::size_t j) const
{
    if (j >= n_) {
        throw DimensionError("bit index out of range");
    }
    std::size_t total = 0;
    for (const auto& lvl : levels_) {
        for (std::size_t slot = 0; slot < lvl.offsets.size(); ++slot) {
            const auto off = lvl.offsets[slot];
            if (counts_slot(slot) && j >= off && j - off < lvl.shifts) {
                ++total;
            }
        }
    }
    return total;
}

std::vector<std::uint32_t> CheckSystem::all_c_to() const
{
    std::vector<std::uint32_t> out(n_, 0);
    for (const auto& lvl : levels_) {
        for (std::size_t slot = 0; slot < lvl.offsets.size(); ++slot) {
            if (!counts_slot(slot)) {
                continue;
            }
            const auto off = lvl.offsets[slot];
            for (std::size_t shift = 0; shift < lvl.shifts; ++shift) {
                ++out[shift + off];
            }
        }
    }
    return out;
}

double CheckSystem::mean_c_to() const
{
    // Every valid shift contributes one incidence per counted slot.
    double incidences = 0.0;
    const std::size_t slots = mode_ == CountMode::all_positions ? std::size_t{taps_} + 1 : 1;
    for (const auto& lvl : levels_) {
        incidences += static_cast<double>(slots) * static_cast<double>(lvl.shifts);
    }
    return incidences / static_cast<double>(n_);
}

std::vector<std::vector<std::size_t>> CheckSystem::checks_of(std::size_t j) const
{
    if (j >= n_) {
        throw DimensionError("bit index out of range");
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& lvl : levels_) {
        for (std::size_t slot = 0; slot < lvl.offsets.size(); ++slot) {
            const auto off = lvl.offsets[slot];
            if (!counts_slot(slot) || j < off || j - off >= lvl.shifts) {
                continue;
            }
            std::vector<std::size_t> idx;
            idx.reserve(lvl.offsets.size());
            for (auto o : lvl.offsets) {
                idx.push_back(j - off + o);
            }
            out.push_back(std::move(idx));
        }
    }
    return out;
}

bool CheckSystem::satisfied(const BitSequence& y, std::size_t level, std::size_t shift) const
{
    if (y.size() != n_) {
        throw DimensionError("sequence length does not match check system");
    }
    const auto& lvl = levels_.at(level);
    if (shift >= lvl.shifts) {
        throw DimensionError("check shift out of range");
    }
    bool parity = false;
    for (auto o : lvl.offsets) {
        parity ^= y[shift + o];
    }
    return !parity;
}

std::vector<std::uint8_t> CheckSystem::syndrome(const BitSequence& y) const
{
    if (y.size() != n_) {
        throw DimensionError("sequence length does not match check system");
    }
    std::vector<std::uint8_t> out(check_count_, 0);
    for (const auto& lvl : levels_) {
        for (std::size_t shift = 0; shift < lvl.shifts; ++shift) {
            bool parity = false;
            for (auto o : lvl.offsets) {
                parity ^= y[shift + o];
            }
            out[lvl.first_check + shift] = parity ? 1 : 0;
        }
    }
    return out;
}

std::vector<std::uint32_t> CheckSystem::satisfied_counts(const BitSequence& y) const
{
    const auto syn = syndrome(y);
    std::vector<std::uint32_t> h(n_, 0);
    for (const auto& lvl : levels_) {
        for (std::size_t shift = 0; shift < lvl.shifts; ++shift) {
            if (syn[lvl.first_check + shift] != 0) {
                continue;
            }
            for (std::size_t slot = 0; slot < lvl.offsets.size(); ++slot) {
                if (counts_slot(slot)) {
                    ++h[shift + lvl.offsets[slot]];
                }
            }
        }
    }
    return h;
}

bool CheckSystem::all_satisfied(const BitSequence& y) const
{
    for (auto v : syndrome(y)) {
        if (v != 0) {
            return false;
        }
    }
    return true;
}

double even_parity_prob(double p_prime, unsigned t)
{
    if (t < 1) {
        throw RangeError("even_parity_prob needs t >= 1");
    }
    double s = 1.0 - p_prime;
    for (unsigned j = 2; j <= t; ++j) {
        s = (1.0 - p_prime) * s + p_prime * (1.0 - s);
    }
    return s;
}

namespace {

// log(x) with log(0) = -inf and no domain error.
double safe_log(double x)
{
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

// h * log(q), with the 0 * log(0) = 0 convention.
double weighted_log(double h, double q)
{
    return h == 0.0 ? 0.0 : h * safe_log(q);
}

} // namespace

double posterior_from_prior(double prior_correct, double s, std::size_t h, std::size_t m)
{
    if (h > m) {
        throw RangeError("satisfied count h = " + std::to_string(h) + " exceeds total m = " + std::to_string(m));
    }
    const double hd = static_cast<double>(h);
    const double fd = static_cast<double>(m - h);
    const double log_correct = safe_log(prior_correct) + weighted_log(hd, s) + weighted_log(fd, 1.0 - s);
    const double log_wrong = safe_log(1.0 - prior_correct) + weighted_log(hd, 1.0 - s) + weighted_log(fd, s);
    if (std::isinf(log_correct) && std::isinf(log_wrong)) {
        // Observation impossible under both hypotheses; keep the prior.
        return prior_correct;
    }
    if (std::isinf(log_wrong)) {
        return 1.0;
    }
    if (std::isinf(log_correct)) {
        return 0.0;
    }
    return 1.0 / (1.0 + std::exp(log_wrong - log_correct));
}

double posterior(double p_prime, double s, std::size_t h, std::size_t m)
{
    return posterior_from_prior(1.0 - p_prime, s, h, m);
}

double binomial_pmf(std::size_t m, double q, std::size_t h)
{
    if (h > m) {
        return 0.0;
    }
    const double md = static_cast<double>(m);
    const double hd = static_cast<double>(h);
    const double log_choose = std::lgamma(md + 1.0) - std::lgamma(hd + 1.0) - std::lgamma(md - hd + 1.0);
    const double lp = log_choose + weighted_log(hd, q) + weighted_log(md - hd, 1.0 - q);
    return std::isinf(lp) ? 0.0 : std::exp(lp);
}

double binomial_upper_tail(std::size_t m, double q, std::size_t h)
{
    double sum = 0.0;
    for (std::size_t i = h; i <= m; ++i) {
        sum += binomial_pmf(m, q, i);
    }
    return sum;
}

double binomial_lower_tail(std::size_t m, double q, std::size_t h)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < h && i <= m; ++i) {
        sum += binomial_pmf(m, q, i);
    }
    return sum;
}

} // namespace fcalab
