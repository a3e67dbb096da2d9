// Command-line front end. Everything goes through the C interface in
// fcalab/fcalab.h so the binary exercises the same surface as other clients.

#include "fcalab/fcalab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAttackFailed = 2;

struct Flags
{
    std::optional<std::string> config;
    std::vector<std::pair<std::string, std::optional<std::string>>> settings;
    std::optional<std::string> trace;
    unsigned jobs = 1;
};

struct ExperimentDeleter
{
    void operator()(fcalab_experiment* e) const { fcalab_experiment_destroy(e); }
};
using ExperimentPtr = std::unique_ptr<fcalab_experiment, ExperimentDeleter>;

void add_setting(CLI::App* cmd, Flags& flags, const std::string& flag, const std::string& key,
                 const std::string& help)
{
    flags.settings.emplace_back(key, std::nullopt);
    // Settings are reserved up front, so this reference stays valid.
    cmd->add_option(flag, flags.settings.back().second, help);
}

void add_common(CLI::App* cmd, Flags& flags)
{
    flags.settings.reserve(32);
    cmd->add_option("--config", flags.config, "Experiment file of 'key = value' lines; flags override it");
    add_setting(cmd, flags, "--poly", "poly", "Connection polynomial exponents, e.g. 31,21,12,3,2,1,0");
    add_setting(cmd, flags, "--n", "n", "Observed sequence length N");
    add_setting(cmd, flags, "--p1", "p1", "Keystream correlation flip rate(s), comma-separated grid");
    add_setting(cmd, flags, "--p2", "p2", "Wiretap residual error rate(s), comma-separated grid");
    add_setting(cmd, flags, "--seed", "seed", "Base seed; run i uses seed + i");
    add_setting(cmd, flags, "--runs", "runs", "Seeds per grid point");
    add_setting(cmd, flags, "--out", "out", "CSV output path (default: standard output)");
    add_setting(cmd, flags, "--count-mode", "count_mode", "Check counting: all | leading");
    add_setting(cmd, flags, "--verification", "verification", "Attack A key test: oracle | threshold");
    add_setting(cmd, flags, "--margin", "margin", "Attack A threshold margin in standard deviations");
    add_setting(cmd, flags, "--alpha", "alpha", "Attack B feedback iterations before a forced flip");
    add_setting(cmd, flags, "--n-thr", "n_thr", "Attack B flip trigger count, or 'auto'");
    add_setting(cmd, flags, "--max-rounds", "max_rounds", "Attack B round limit");
    add_setting(cmd, flags, "--stall-rounds", "stall_rounds", "Attack B zero-flip rounds before giving up");
    add_setting(cmd, flags, "--threshold-rule", "threshold_rule", "Flip threshold choice: precision | gain");
    add_setting(cmd, flags, "--feedback", "feedback", "Attack B feedback: per-check | prior-only");
    add_setting(cmd, flags, "--prior-reset", "prior_reset", "Prior after a flip: channel | complement");
    cmd->add_option("--jobs", flags.jobs, "Worker threads (output is identical for any value)")
        ->check(CLI::PositiveNumber);
}

std::optional<std::string> read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::string& path, const char* data, std::size_t size)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data, static_cast<std::streamsize>(size));
    return static_cast<bool>(out);
}

int report_error(const char* what, fcalab_status status)
{
    std::cerr << "error: " << what << ": " << fcalab_status_string(status) << '\n' << fcalab_last_error() << '\n';
    return kExitInvalid;
}

int run(const Flags& flags, const char* attack)
{
    fcalab_experiment* raw = nullptr;
    if (auto st = fcalab_experiment_create(&raw); st != FCALAB_OK) {
        return report_error("create", st);
    }
    ExperimentPtr exp(raw);

    if (flags.config) {
        auto text = read_file(*flags.config);
        if (!text) {
            std::cerr << "error: cannot read config file " << *flags.config << '\n';
            return kExitInvalid;
        }
        if (auto st = fcalab_experiment_load_config(exp.get(), text->c_str()); st != FCALAB_OK) {
            return report_error("config", st);
        }
    }
    if (attack) {
        fcalab_experiment_set(exp.get(), "attack", attack);
    }
    for (const auto& [key, value] : flags.settings) {
        if (!value) {
            continue;
        }
        if (auto st = fcalab_experiment_set(exp.get(), key.c_str(), value->c_str()); st != FCALAB_OK) {
            return report_error(key.c_str(), st);
        }
    }
    if (auto st = fcalab_experiment_validate(exp.get()); st != FCALAB_OK) {
        return report_error("validation", st);
    }
    if (auto st = fcalab_experiment_run(exp.get(), flags.jobs); st != FCALAB_OK) {
        return report_error("run", st);
    }
    for (std::size_t i = 0; i < fcalab_experiment_warning_count(exp.get()); ++i) {
        std::cerr << "warning: " << fcalab_experiment_warning(exp.get(), i) << '\n';
    }

    const char* csv = nullptr;
    std::size_t size = 0;
    fcalab_experiment_csv(exp.get(), &csv, &size);
    const char* out_path = "";
    fcalab_experiment_output_path(exp.get(), &out_path);
    if (*out_path) {
        if (!write_file(out_path, csv, size)) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return kExitInvalid;
        }
    } else {
        std::fwrite(csv, 1, size, stdout);
    }

    if (flags.trace) {
        const char* trace = nullptr;
        std::size_t trace_size = 0;
        fcalab_experiment_trace_csv(exp.get(), &trace, &trace_size);
        if (!write_file(*flags.trace, trace, trace_size)) {
            std::cerr << "error: cannot write " << *flags.trace << '\n';
            return kExitInvalid;
        }
    }

    std::size_t failures = 0;
    fcalab_experiment_failures(exp.get(), &failures);
    return failures > 0 ? kExitAttackFailed : kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fast correlation attack laboratory for LFSR keystreams seen through a wiretap channel"};
    app.require_subcommand(1);

    struct Command
    {
        const char* name;
        const char* attack;
        const char* help;
        Flags flags;
        CLI::App* app = nullptr;
    };
    std::vector<Command> commands;
    commands.reserve(6);
    commands.push_back({"simulate", "simulate", "Emit the a, z, m, s, y sequences of the pipeline", {}});
    commands.push_back({"attack-a", "A", "Reliability selection, GF(2) solve and error-pattern search", {}});
    commands.push_back({"attack-b", "B", "Iterative posterior feedback and bit flipping", {}});
    commands.push_back({"bound-a", "bound-A", "Expected trial bound for attack A", {}});
    commands.push_back({"correction-ratio", "correction-ratio", "First-round correction ratio C of attack B", {}});
    commands.push_back({"sweep", nullptr, "Run the experiment described by --config", {}});

    for (auto& c : commands) {
        c.app = app.add_subcommand(c.name, c.help);
        add_common(c.app, c.flags);
        if (std::string(c.name) == "attack-b" || std::string(c.name) == "sweep") {
            c.app->add_option("--trace", c.flags.trace, "Write attack B round traces as CSV");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitInvalid;
    }

    for (const auto& c : commands) {
        if (c.app->parsed()) {
            return run(c.flags, c.attack);
        }
    }
    return kExitInvalid;
}
