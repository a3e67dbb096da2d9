#pragma once

#include "fcalab/attack_a.hpp"
#include "fcalab/attack_b.hpp"
#include "fcalab/checks.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fcalab {

enum class ExperimentKind
{
    simulate,
    attack_a,
    attack_b,
    bound_a,
    correction_ratio,
};

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view text);

/// Everything needed to replay an experiment. The file form is flat
/// `key = value` lines with the field names below; p1 and p2 are
/// comma-separated grids.
struct ExperimentConfig
{
    std::string poly = "31,21,12,3,2,1,0";
    std::size_t n = 3100;
    std::vector<double> p1{0.2};
    std::vector<double> p2{0.0};
    ExperimentKind attack = ExperimentKind::attack_b;
    std::uint64_t seed = 1;
    std::size_t runs = 1;
    std::string out; // empty: standard output

    CountMode count_mode = CountMode::all_positions;

    Verification verification = Verification::oracle;
    double margin = 3.0;

    unsigned alpha = 3;
    std::optional<std::size_t> n_thr;
    std::size_t max_rounds = 200;
    std::size_t stall_rounds = 3;
    ThresholdRule threshold_rule = ThresholdRule::max_precision;
    FeedbackMode feedback = FeedbackMode::per_check;
    PriorReset prior_reset = PriorReset::channel;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Sets one field from its textual form. Throws ParseError for an unknown key
/// or a malformed value.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Keys `k` and `t` are accepted and must agree with `poly`.
ExperimentConfig parse_config(std::string_view text);

std::string render_config(const ExperimentConfig& cfg);

/// Throws ValidationError listing every violated field.
void validate(const ExperimentConfig& cfg);

struct ExperimentResult
{
    std::string csv;
    std::string trace_csv; // attack B round traces; header only for other kinds
    std::size_t failures = 0;
    std::vector<std::string> warnings;
};

/// Runs every (p1, p2) grid point, p1 outer, for runs seeds each
/// (run seed = seed + run index). Rows come out in that canonical order
/// whatever the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

/// printf("%.6g") in the C locale.
std::string format_number(double v);

} // namespace fcalab
