#pragma once

#include "fcalab/checks.hpp"
#include "fcalab/gf2.hpp"
#include "fcalab/lfsr.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace fcalab {

/// How the flip threshold is picked among the candidate posteriors.
enum class ThresholdRule
{
    max_precision, // maximise Pr(y_j != a_j | p*_j < p_thr)
    max_gain,      // maximise N_i = N_w - N_v
};

std::string_view to_string(ThresholdRule r);
ThresholdRule parse_threshold_rule(std::string_view text);

/// Expected first-round effect of flipping every bit below p_thr.
struct CorrectionAnalysis
{
    double n_w = 0.0; // wrong bits below threshold
    double n_v = 0.0; // correct bits below threshold
    double n_i = 0.0; // n_w - n_v
    double c = 0.0;   // n_i / (n_w + n_v)
    double p_thr = 0.0;
    std::size_t h_thr = 0; // p* < p_thr  <=>  fewer than h_thr of m' checks hold
    std::size_t m_prime = 0;
};

/// Scans the thresholds posterior(p', s, h, m') for h = 0..m' using the
/// binomial mixture at m' = rounded mean c_to. Throws UndefinedRatioError when
/// no candidate has N_w + N_v > 0.
CorrectionAnalysis derive_threshold(const ReliabilityModel& model, const CheckSystem& checks, std::size_t n,
                                    ThresholdRule rule = ThresholdRule::max_precision);

enum class Capability
{
    zero_capability,
    possibly_correcting,
};

std::string_view to_string(Capability c);

/// C <= 0 means zero correction capability. A positive C does not promise
/// convergence.
Capability predict_capability(const CorrectionAnalysis& analysis);

/// Source of the per-check even-parity probability during posterior feedback.
enum class FeedbackMode
{
    per_check,  // from the current posteriors of the other members of each check
    prior_only, // fixed s from p'; only the prior term is fed back
};

std::string_view to_string(FeedbackMode m);
FeedbackMode parse_feedback_mode(std::string_view text);

/// Prior of a bit at the start of the round after it was flipped.
enum class PriorReset
{
    channel,    // p' for every bit
    complement, // 1 - p* for flipped bits, p' for the rest
};

std::string_view to_string(PriorReset r);
PriorReset parse_prior_reset(std::string_view text);

struct AttackBConfig
{
    ConnectionPolynomial poly;
    BitSequence y;
    double p_prime = 0.0;
    unsigned alpha = 3;                // feedback iterations per round before a forced flip
    std::optional<std::size_t> n_thr;  // empty: ceil((N_w + N_v) / 2), at least 1
    std::size_t max_rounds = 200;
    std::size_t stall_rounds = 3;
    CountMode count_mode = CountMode::all_positions;
    ThresholdRule threshold_rule = ThresholdRule::max_precision;
    FeedbackMode feedback = FeedbackMode::per_check;
    PriorReset prior_reset = PriorReset::channel;
    std::optional<BitSequence> truth; // true LFSR sequence, only used for trace columns
};

struct RoundTrace
{
    std::size_t round = 0;
    std::size_t bits_flipped = 0;
    std::optional<std::size_t> correct_bits;
    std::size_t iterations = 0; // posterior evaluations in this round
    double min_posterior = 0.0;
    double mean_posterior = 0.0;
};

enum class EndReason
{
    converged,
    stagnated,
    round_limit,
};

std::string_view to_string(EndReason e);

struct AttackBReport
{
    bool success = false;
    EndReason end = EndReason::round_limit;
    std::optional<LfsrKey> key;
    BitSequence corrected;
    std::vector<RoundTrace> rounds;
    std::size_t rounds_run = 0;
    std::size_t n_thr = 0;
    std::optional<CorrectionAnalysis> analysis; // absent when y already had zero syndrome
};

/// Iterative posterior feedback with thresholded flipping until every check
/// holds (success), stall_rounds consecutive rounds flip nothing, or
/// max_rounds is reached.
AttackBReport run_attack_b(const AttackBConfig& cfg);

} // namespace fcalab
