#include "fcalab/attack_a.hpp"

#include "fcalab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fcalab {

std::string_view to_string(Verification v)
{
    return v == Verification::oracle ? "oracle" : "threshold";
}

Verification parse_verification(std::string_view text)
{
    if (text == "oracle") {
        return Verification::oracle;
    }
    if (text == "threshold") {
        return Verification::correlation_threshold;
    }
    throw ParseError("verification must be 'oracle' or 'threshold', got '" + std::string(text) + "'");
}

namespace {

std::vector<double> reliabilities(const CheckSystem& checks, const BitSequence& y, const ReliabilityModel& model)
{
    const auto h = checks.satisfied_counts(y);
    const auto m = checks.all_c_to();
    std::vector<double> p(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        p[j] = posterior(model.p_prime, model.s, h[j], m[j]);
    }
    return p;
}

Selection select_from(const std::vector<double>& pstar, const OutputRowTable& rows, unsigned k)
{
    std::vector<std::size_t> order(pstar.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pstar[a] > pstar[b]; });

    Selection sel;
    sel.matrix = Gf2Matrix(0, k);
    RankBasis basis(k);
    for (auto j : order) {
        if (basis.extend(rows.row(j))) {
            sel.positions.push_back(j);
            sel.reliability.push_back(pstar[j]);
            sel.matrix.append_row(rows.row(j));
            if (sel.positions.size() == k) {
                return sel;
            }
        }
    }
    throw SelectionError("only " + std::to_string(basis.rank()) + " independent output rows available, need " +
                         std::to_string(k));
}

// Advances idx (strictly increasing, values < n) to the next combination in
// lexicographic order; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n)
{
    const std::size_t w = idx.size();
    for (std::size_t i = w; i-- > 0;) {
        if (idx[i] < n - w + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < w; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

} // namespace

Selection select_reliable(const CheckSystem& checks, const BitSequence& y, const ReliabilityModel& model,
                          const OutputRowTable& rows)
{
    if (y.size() != checks.length()) {
        throw DimensionError("sequence length does not match check system");
    }
    if (rows.size() < y.size()) {
        throw DimensionError("output row table shorter than the sequence");
    }
    return select_from(reliabilities(checks, y, model), rows, checks.degree());
}

Selection select_reliable(const CheckSystem& checks, const BitSequence& y, const ReliabilityModel& model,
                          const ConnectionPolynomial& poly)
{
    return select_reliable(checks, y, model, OutputRowTable(poly, y.size()));
}

RbarEstimate estimate_rbar(unsigned k, std::size_t n, const CheckSystem& checks, const ReliabilityModel& model)
{
    RbarEstimate est;
    est.m_prime = static_cast<std::size_t>(std::llround(checks.mean_c_to()));
    const double p = model.p_prime;
    const double s = model.s;
    const double nd = static_cast<double>(n);
    for (std::size_t h = 0; h <= est.m_prime; ++h) {
        const double expected = nd * ((1.0 - p) * binomial_upper_tail(est.m_prime, s, h) +
                                      p * binomial_upper_tail(est.m_prime, 1.0 - s, h));
        if (expected >= static_cast<double>(k)) {
            est.h_prime = h;
        }
    }
    est.rbar = static_cast<double>(k) * (1.0 - posterior(p, s, est.h_prime, est.m_prime));
    return est;
}

double binary_entropy(double x)
{
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double entropy_bound(unsigned k, double r)
{
    if (k == 0) {
        return 1.0;
    }
    return std::exp2(binary_entropy(r / static_cast<double>(k)) * static_cast<double>(k));
}

TrialBound bound_trials(unsigned k, unsigned r)
{
    if (r > k) {
        throw RangeError("bound_trials: r = " + std::to_string(r) + " exceeds k = " + std::to_string(k));
    }
    if (k > 63) {
        throw RangeError("bound_trials: k above 63 overflows the exact count");
    }
    TrialBound out;
    std::uint64_t c = 1; // C(k, i)
    for (unsigned i = 0; i <= r; ++i) {
        out.exact += c;
        c = c * (k - i) / (i + 1);
    }
    out.bound = entropy_bound(k, static_cast<double>(r));
    return out;
}

AttackAReport run_attack_a(const AttackAConfig& cfg)
{
    const unsigned k = cfg.poly.degree();
    const std::size_t n = cfg.y.size();
    if (n <= k) {
        throw InsufficientLengthError("observed sequence must be longer than the degree");
    }
    if (!(cfg.p_prime >= 0.0 && cfg.p_prime <= 0.5)) {
        throw RangeError("p' must lie in [0, 0.5]");
    }
    if (cfg.verification == Verification::oracle && !cfg.truth) {
        throw Error("oracle verification needs the true key");
    }
    if (k > 63) {
        throw RangeError("exhaustive pattern search supports k <= 63");
    }

    const CheckSystem checks(cfg.poly, n, cfg.count_mode);
    const auto model = ReliabilityModel::make(cfg.p_prime, cfg.poly.taps());
    const OutputRowTable rows(cfg.poly, n);
    const auto pstar = reliabilities(checks, cfg.y, model);
    const Selection sel = select_from(pstar, rows, k);

    AttackAReport report;
    report.selected = sel.positions;
    report.estimate = estimate_rbar(k, n, checks, model);
    report.bound = entropy_bound(k, report.estimate.rbar);

    if (cfg.truth) {
        const auto a = generate(cfg.poly, *cfg.truth, n);
        std::size_t wrong = 0;
        for (auto j : sel.positions) {
            wrong += a[j] != cfg.y[j] ? 1 : 0;
        }
        report.selection_errors = wrong;
    }

    // Matrix rows ordered least reliable first; ties to the lower index.
    std::vector<std::size_t> flip_order(k);
    std::iota(flip_order.begin(), flip_order.end(), std::size_t{0});
    std::stable_sort(flip_order.begin(), flip_order.end(), [&](std::size_t a, std::size_t b) {
        if (sel.reliability[a] != sel.reliability[b]) {
            return sel.reliability[a] < sel.reliability[b];
        }
        return sel.positions[a] < sel.positions[b];
    });

    const Gf2Inverse inverse(sel.matrix);
    BitSequence rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        rhs.set(i, cfg.y[sel.positions[i]]);
    }
    const BitSequence base_solution = inverse.solve(rhs);

    // Sequences generated by each unit key; any key's output is their XOR.
    std::vector<BitSequence> unit_outputs;
    double min_agreement = 0.0;
    if (cfg.verification == Verification::correlation_threshold) {
        for (unsigned i = 0; i < k; ++i) {
            BitSequence e(k);
            e.set(i, true);
            unit_outputs.push_back(generate(cfg.poly, LfsrKey{e}, n));
        }
        const double nd = static_cast<double>(n);
        min_agreement = nd * (1.0 - cfg.p_prime) - cfg.margin * std::sqrt(nd * cfg.p_prime * (1.0 - cfg.p_prime));
    }

    auto accept = [&](const BitSequence& candidate) {
        if (cfg.verification == Verification::oracle) {
            return candidate == cfg.truth->state;
        }
        BitSequence seq(n);
        for (unsigned i = 0; i < k; ++i) {
            if (candidate[i]) {
                seq ^= unit_outputs[i];
            }
        }
        const double agreement = static_cast<double>(n - hamming_distance(seq, cfg.y));
        return agreement >= min_agreement;
    };

    std::uint64_t trials = 0;
    for (std::size_t w = 0; w <= k; ++w) {
        std::vector<std::size_t> combo(w);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        do {
            ++trials;
            BitSequence candidate = base_solution;
            for (auto c : combo) {
                candidate ^= inverse.column(flip_order[c]);
            }
            if (accept(candidate)) {
                report.success = true;
                report.trials = trials;
                report.key = LfsrKey{std::move(candidate)};
                return report;
            }
        } while (next_combination(combo, k));
    }
    report.trials = trials;
    return report;
}

} // namespace fcalab
