#include "fcalab/attack_b.hpp"

#include "fcalab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcalab {

std::string_view to_string(ThresholdRule r)
{
    return r == ThresholdRule::max_precision ? "precision" : "gain";
}

ThresholdRule parse_threshold_rule(std::string_view text)
{
    if (text == "precision") {
        return ThresholdRule::max_precision;
    }
    if (text == "gain") {
        return ThresholdRule::max_gain;
    }
    throw ParseError("threshold rule must be 'precision' or 'gain', got '" + std::string(text) + "'");
}

std::string_view to_string(Capability c)
{
    return c == Capability::zero_capability ? "zero-capability" : "possibly-correcting";
}

std::string_view to_string(FeedbackMode m)
{
    return m == FeedbackMode::per_check ? "per-check" : "prior-only";
}

FeedbackMode parse_feedback_mode(std::string_view text)
{
    if (text == "per-check") {
        return FeedbackMode::per_check;
    }
    if (text == "prior-only") {
        return FeedbackMode::prior_only;
    }
    throw ParseError("feedback must be 'per-check' or 'prior-only', got '" + std::string(text) + "'");
}

std::string_view to_string(PriorReset r)
{
    return r == PriorReset::channel ? "channel" : "complement";
}

PriorReset parse_prior_reset(std::string_view text)
{
    if (text == "channel") {
        return PriorReset::channel;
    }
    if (text == "complement") {
        return PriorReset::complement;
    }
    throw ParseError("prior reset must be 'channel' or 'complement', got '" + std::string(text) + "'");
}

std::string_view to_string(EndReason e)
{
    switch (e) {
    case EndReason::converged:
        return "converged";
    case EndReason::stagnated:
        return "stagnated";
    case EndReason::round_limit:
        return "round-limit";
    }
    return "?";
}

CorrectionAnalysis derive_threshold(const ReliabilityModel& model, const CheckSystem& checks, std::size_t n,
                                    ThresholdRule rule)
{
    const double p = model.p_prime;
    const double s = model.s;
    const auto m = static_cast<std::size_t>(std::llround(checks.mean_c_to()));
    const double nd = static_cast<double>(n);

    std::optional<CorrectionAnalysis> best;
    double best_precision = -1.0;
    for (std::size_t h = 0; h <= m; ++h) {
        CorrectionAnalysis cand;
        cand.m_prime = m;
        cand.h_thr = h;
        cand.p_thr = posterior(p, s, h, m);
        // A wrong bit satisfies each check with probability 1 - s.
        cand.n_w = nd * p * binomial_lower_tail(m, 1.0 - s, h);
        cand.n_v = nd * (1.0 - p) * binomial_lower_tail(m, s, h);
        const double total = cand.n_w + cand.n_v;
        if (!(total > 0.0)) {
            continue;
        }
        cand.n_i = cand.n_w - cand.n_v;
        cand.c = cand.n_i / total;
        const double precision = cand.n_w / total;

        bool better = !best;
        if (best) {
            if (rule == ThresholdRule::max_precision) {
                better = precision > best_precision || (precision == best_precision && cand.n_i > best->n_i);
            } else {
                better = cand.n_i > best->n_i;
            }
        }
        if (better) {
            best = cand;
            best_precision = precision;
        }
    }
    if (!best) {
        throw UndefinedRatioError("no candidate threshold has any bit below it (N_w + N_v = 0)");
    }
    return *best;
}

Capability predict_capability(const CorrectionAnalysis& analysis)
{
    return analysis.c > 0.0 ? Capability::possibly_correcting : Capability::zero_capability;
}

namespace {

constexpr double kProbFloor = 1e-12;

double clamp_prob(double x)
{
    return std::clamp(x, kProbFloor, 1.0 - kProbFloor);
}

double logit(double x)
{
    x = clamp_prob(x);
    return std::log(x / (1.0 - x));
}

// Flat incidence structure: members[c * width + slot] is the bit at that slot
// of check c.
struct Incidence
{
    std::size_t width = 0;
    std::vector<std::size_t> members;
    std::vector<std::size_t> c_to;
};

Incidence build_incidence(const CheckSystem& checks)
{
    Incidence inc;
    inc.width = std::size_t{checks.taps()} + 1;
    inc.members.resize(checks.check_count() * inc.width);
    for (const auto& lvl : checks.levels()) {
        for (std::size_t shift = 0; shift < lvl.shifts; ++shift) {
            const std::size_t base = (lvl.first_check + shift) * inc.width;
            for (std::size_t slot = 0; slot < inc.width; ++slot) {
                inc.members[base + slot] = shift + lvl.offsets[slot];
            }
        }
    }
    const auto c = checks.all_c_to();
    inc.c_to.assign(c.begin(), c.end());
    return inc;
}

class PosteriorEngine
{
public:
    PosteriorEngine(const CheckSystem& checks, const Incidence& inc, double s_channel, FeedbackMode mode)
        : checks_(checks), inc_(inc), s_channel_(s_channel), mode_(mode), evidence_(checks.length())
    {
    }

    // error_prob[j] is the current prior probability that bit j is wrong.
    void evaluate(const std::vector<std::uint8_t>& syndrome, const std::vector<double>& error_prob,
                  std::vector<double>& out)
    {
        std::fill(evidence_.begin(), evidence_.end(), 0.0);
        const std::size_t w = inc_.width;
        const double fixed_llr = logit(s_channel_);
        prefix_.resize(w + 1);
        suffix_.resize(w + 1);
        for (std::size_t c = 0; c < syndrome.size(); ++c) {
            const std::size_t* mem = &inc_.members[c * w];
            const double sign = syndrome[c] == 0 ? 1.0 : -1.0;
            if (mode_ == FeedbackMode::prior_only) {
                for (std::size_t slot = 0; slot < w; ++slot) {
                    if (checks_.counts_slot(slot)) {
                        evidence_[mem[slot]] += sign * fixed_llr;
                    }
                }
                continue;
            }
            // Leave-one-out products of (1 - 2 q_i) give each member's s.
            prefix_[0] = 1.0;
            for (std::size_t i = 0; i < w; ++i) {
                prefix_[i + 1] = prefix_[i] * (1.0 - 2.0 * error_prob[mem[i]]);
            }
            suffix_[w] = 1.0;
            for (std::size_t i = w; i-- > 0;) {
                suffix_[i] = suffix_[i + 1] * (1.0 - 2.0 * error_prob[mem[i]]);
            }
            for (std::size_t slot = 0; slot < w; ++slot) {
                if (!checks_.counts_slot(slot)) {
                    continue;
                }
                const double s = 0.5 * (1.0 + prefix_[slot] * suffix_[slot + 1]);
                evidence_[mem[slot]] += sign * logit(s);
            }
        }
        out.resize(error_prob.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double lo = logit(1.0 - error_prob[j]) + evidence_[j];
            out[j] = 1.0 / (1.0 + std::exp(-lo));
        }
    }

private:
    const CheckSystem& checks_;
    const Incidence& inc_;
    double s_channel_;
    FeedbackMode mode_;
    std::vector<double> evidence_;
    std::vector<double> prefix_;
    std::vector<double> suffix_;
};

LfsrKey read_key(const ConnectionPolynomial& poly, const BitSequence& y)
{
    const unsigned k = poly.degree();
    const OutputRowTable rows(poly, k);
    Gf2Matrix a(0, k);
    BitSequence b(k);
    for (unsigned j = 0; j < k; ++j) {
        a.append_row(rows.row(j));
        b.set(j, y[j]);
    }
    return LfsrKey{solve_gf2(a, b)};
}

} // namespace

AttackBReport run_attack_b(const AttackBConfig& cfg)
{
    const std::size_t n = cfg.y.size();
    if (n <= cfg.poly.degree()) {
        throw InsufficientLengthError("observed sequence must be longer than the degree");
    }
    if (cfg.alpha < 1) {
        throw RangeError("alpha must be at least 1");
    }
    if (!(cfg.p_prime >= 0.0 && cfg.p_prime <= 0.5)) {
        throw RangeError("p' must lie in [0, 0.5]");
    }
    if (cfg.truth && cfg.truth->size() != n) {
        throw DimensionError("truth sequence length does not match y");
    }

    const CheckSystem checks(cfg.poly, n, cfg.count_mode);
    AttackBReport report;
    report.corrected = cfg.y;

    auto count_correct = [&](const BitSequence& y) -> std::optional<std::size_t> {
        if (!cfg.truth) {
            return std::nullopt;
        }
        return n - hamming_distance(y, *cfg.truth);
    };

    auto syndrome = checks.syndrome(report.corrected);
    auto zero_syndrome = [](const std::vector<std::uint8_t>& syn) {
        return std::none_of(syn.begin(), syn.end(), [](std::uint8_t v) { return v != 0; });
    };

    if (zero_syndrome(syndrome)) {
        report.success = true;
        report.end = EndReason::converged;
        report.key = read_key(cfg.poly, report.corrected);
        return report;
    }

    const auto model = ReliabilityModel::make(cfg.p_prime, cfg.poly.taps());
    const auto analysis = derive_threshold(model, checks, n, cfg.threshold_rule);
    report.analysis = analysis;
    report.n_thr = cfg.n_thr ? *cfg.n_thr
                             : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                            std::ceil((analysis.n_w + analysis.n_v) / 2.0)));

    const Incidence inc = build_incidence(checks);
    PosteriorEngine engine(checks, inc, model.s, cfg.feedback);

    // A bit whose closed-form posterior equals p_thr is not below it; the
    // margin keeps log-domain rounding from deciding such ties.
    const double cut = analysis.p_thr * (1.0 - 1e-9);

    std::vector<double> error_prob(n, cfg.p_prime);
    std::vector<double> pstar;
    std::vector<std::size_t> below;
    std::size_t idle_rounds = 0;

    for (std::size_t round = 1; round <= cfg.max_rounds; ++round) {
        RoundTrace trace;
        trace.round = round;
        for (unsigned it = 1; it <= cfg.alpha; ++it) {
            engine.evaluate(syndrome, error_prob, pstar);
            trace.iterations = it;
            below.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (pstar[j] < cut) {
                    below.push_back(j);
                }
            }
            if (below.size() >= report.n_thr || it == cfg.alpha) {
                break;
            }
            for (std::size_t j = 0; j < n; ++j) {
                error_prob[j] = clamp_prob(1.0 - pstar[j]);
            }
        }

        double sum = 0.0;
        double lo = 1.0;
        for (double v : pstar) {
            sum += v;
            lo = std::min(lo, v);
        }
        trace.min_posterior = lo;
        trace.mean_posterior = sum / static_cast<double>(n);

        std::fill(error_prob.begin(), error_prob.end(), cfg.p_prime);
        for (auto j : below) {
            report.corrected.flip(j);
            if (cfg.prior_reset == PriorReset::complement) {
                error_prob[j] = clamp_prob(pstar[j]);
            }
        }
        trace.bits_flipped = below.size();
        trace.correct_bits = count_correct(report.corrected);
        report.rounds.push_back(trace);
        report.rounds_run = round;

        syndrome = checks.syndrome(report.corrected);
        if (zero_syndrome(syndrome)) {
            report.success = true;
            report.end = EndReason::converged;
            report.key = read_key(cfg.poly, report.corrected);
            return report;
        }

        idle_rounds = below.empty() ? idle_rounds + 1 : 0;
        if (idle_rounds >= cfg.stall_rounds) {
            report.end = EndReason::stagnated;
            return report;
        }
    }
    report.end = EndReason::round_limit;
    return report;
}

} // namespace fcalab
