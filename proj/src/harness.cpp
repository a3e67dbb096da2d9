#include "fcalab/harness.hpp"

#include "fcalab/channel.hpp"
#include "fcalab/errors.hpp"
#include "fcalab/lfsr.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace fcalab {

std::string_view to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::simulate:
        return "simulate";
    case ExperimentKind::attack_a:
        return "A";
    case ExperimentKind::attack_b:
        return "B";
    case ExperimentKind::bound_a:
        return "bound-A";
    case ExperimentKind::correction_ratio:
        return "correction-ratio";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(std::string_view text)
{
    for (auto k : {ExperimentKind::simulate, ExperimentKind::attack_a, ExperimentKind::attack_b,
                   ExperimentKind::bound_a, ExperimentKind::correction_ratio}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw ParseError("attack must be one of simulate, A, B, bound-A, correction-ratio; got '" + std::string(text) +
                     "'");
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    text = trim(text);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

std::vector<double> parse_grid(std::string_view key, std::string_view text)
{
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) {
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        out.push_back(parse_number<double>(key, text.substr(pos, end - pos)));
        pos = end + 1;
    }
    return out;
}

// Shortest representation that parses back to the same double.
std::string exact_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string render_grid(const std::vector<double>& grid)
{
    std::string s;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += exact_number(grid[i]);
    }
    return s;
}

} // namespace

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, ptr);
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "poly") {
        cfg.poly = std::string(value);
    } else if (key == "n") {
        cfg.n = parse_number<std::size_t>(key, value);
    } else if (key == "p1") {
        cfg.p1 = parse_grid(key, value);
    } else if (key == "p2") {
        cfg.p2 = parse_grid(key, value);
    } else if (key == "attack") {
        cfg.attack = parse_experiment_kind(value);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "runs") {
        cfg.runs = parse_number<std::size_t>(key, value);
    } else if (key == "out") {
        cfg.out = std::string(value);
    } else if (key == "count_mode") {
        cfg.count_mode = parse_count_mode(value);
    } else if (key == "verification") {
        cfg.verification = parse_verification(value);
    } else if (key == "margin") {
        cfg.margin = parse_number<double>(key, value);
    } else if (key == "alpha") {
        cfg.alpha = parse_number<unsigned>(key, value);
    } else if (key == "n_thr") {
        if (value == "auto") {
            cfg.n_thr.reset();
        } else {
            cfg.n_thr = parse_number<std::size_t>(key, value);
        }
    } else if (key == "max_rounds") {
        cfg.max_rounds = parse_number<std::size_t>(key, value);
    } else if (key == "stall_rounds") {
        cfg.stall_rounds = parse_number<std::size_t>(key, value);
    } else if (key == "threshold_rule") {
        cfg.threshold_rule = parse_threshold_rule(value);
    } else if (key == "feedback") {
        cfg.feedback = parse_feedback_mode(value);
    } else if (key == "prior_reset") {
        cfg.prior_reset = parse_prior_reset(value);
    } else {
        throw ParseError("unknown configuration key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    std::optional<unsigned> k;
    std::optional<unsigned> t;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "k") {
            k = parse_number<unsigned>(key, value);
        } else if (key == "t") {
            t = parse_number<unsigned>(key, value);
        } else {
            apply_setting(cfg, key, value);
        }
    }
    if (k || t) {
        const auto poly = ConnectionPolynomial::parse(cfg.poly);
        std::vector<std::string> issues;
        if (k && *k != poly.degree()) {
            issues.push_back("k = " + std::to_string(*k) + " does not match the degree of poly (" +
                             std::to_string(poly.degree()) + ")");
        }
        if (t && *t != poly.taps()) {
            issues.push_back("t = " + std::to_string(*t) + " does not match the tap count of poly (" +
                             std::to_string(poly.taps()) + ")");
        }
        if (!issues.empty()) {
            throw ValidationError(std::move(issues));
        }
    }
    return cfg;
}

std::string render_config(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    os << "poly = " << cfg.poly << '\n';
    try {
        const auto poly = ConnectionPolynomial::parse(cfg.poly);
        os << "k = " << poly.degree() << '\n';
        os << "t = " << poly.taps() << '\n';
    } catch (const ParseError&) {
        // Derived fields are omitted for an unparseable polynomial.
    }
    os << "n = " << cfg.n << '\n';
    os << "p1 = " << render_grid(cfg.p1) << '\n';
    os << "p2 = " << render_grid(cfg.p2) << '\n';
    os << "attack = " << to_string(cfg.attack) << '\n';
    os << "seed = " << cfg.seed << '\n';
    os << "runs = " << cfg.runs << '\n';
    os << "out = " << cfg.out << '\n';
    os << "count_mode = " << to_string(cfg.count_mode) << '\n';
    os << "verification = " << to_string(cfg.verification) << '\n';
    os << "margin = " << exact_number(cfg.margin) << '\n';
    os << "alpha = " << cfg.alpha << '\n';
    os << "n_thr = " << (cfg.n_thr ? std::to_string(*cfg.n_thr) : std::string("auto")) << '\n';
    os << "max_rounds = " << cfg.max_rounds << '\n';
    os << "stall_rounds = " << cfg.stall_rounds << '\n';
    os << "threshold_rule = " << to_string(cfg.threshold_rule) << '\n';
    os << "feedback = " << to_string(cfg.feedback) << '\n';
    os << "prior_reset = " << to_string(cfg.prior_reset) << '\n';
    return os.str();
}

void validate(const ExperimentConfig& cfg)
{
    std::vector<std::string> issues;
    std::optional<ConnectionPolynomial> poly;
    try {
        poly = ConnectionPolynomial::parse(cfg.poly);
    } catch (const ParseError& e) {
        issues.push_back(std::string("poly: ") + e.what());
    }
    if (poly && cfg.n <= poly->degree()) {
        issues.push_back("n: must exceed the polynomial degree " + std::to_string(poly->degree()));
    }
    if (cfg.n == 0) {
        issues.push_back("n: must be positive");
    }
    auto check_grid = [&](const std::vector<double>& grid, const char* name) {
        if (grid.empty()) {
            issues.push_back(std::string(name) + ": grid is empty");
        }
        for (double p : grid) {
            if (!(p >= 0.0 && p <= 0.5)) {
                issues.push_back(std::string(name) + ": value " + exact_number(p) + " outside [0, 0.5]");
            }
        }
    };
    check_grid(cfg.p1, "p1");
    check_grid(cfg.p2, "p2");
    if (cfg.runs == 0) {
        issues.push_back("runs: must be at least 1");
    }
    if (!(cfg.margin >= 0.0)) {
        issues.push_back("margin: must be non-negative");
    }
    if (cfg.alpha == 0) {
        issues.push_back("alpha: must be at least 1");
    }
    if (cfg.max_rounds == 0) {
        issues.push_back("max_rounds: must be at least 1");
    }
    if (cfg.stall_rounds == 0) {
        issues.push_back("stall_rounds: must be at least 1");
    }
    if (cfg.n_thr && *cfg.n_thr == 0) {
        issues.push_back("n_thr: must be at least 1 or 'auto'");
    }
    if (poly && cfg.attack == ExperimentKind::attack_a && poly->degree() > 63) {
        issues.push_back("poly: attack A supports degree <= 63");
    }
    if (!issues.empty()) {
        throw ValidationError(std::move(issues));
    }
}

namespace {

struct Task
{
    double p1 = 0.0;
    double p2 = 0.0;
    std::uint64_t seed = 0;
};

struct TaskOutput
{
    std::string rows;
    std::string trace_rows;
    bool failed = false;
    std::exception_ptr error;
};

std::string common_header() { return "attack,poly,k,t,n,p1,p2,p_prime,seed"; }

std::string kind_header(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::simulate:
        return "index,a,z,m,s,y";
    case ExperimentKind::attack_a:
        return "verification,success,key_correct,trials,selection_errors,m_prime,h_prime,rbar,bound,key";
    case ExperimentKind::attack_b:
        return "success,end,rounds,final_correct,C,p_thr,n_thr,key";
    case ExperimentKind::bound_a:
        return "m_prime,h_prime,rbar,bound";
    case ExperimentKind::correction_ratio:
        return "m_prime,h_thr,p_thr,N_w,N_v,N_i,C,verdict";
    }
    return {};
}

class Runner
{
public:
    Runner(const ExperimentConfig& cfg) : cfg_(cfg), poly_(ConnectionPolynomial::parse(cfg.poly)) {}

    TaskOutput run(const Task& task) const
    {
        TaskOutput out;
        const ChannelParams params(task.p1, task.p2);
        const std::string prefix = std::string(to_string(cfg_.attack)) + ",\"" + poly_.to_string() + "\"," +
                                   std::to_string(poly_.degree()) + ',' + std::to_string(poly_.taps()) + ',' +
                                   std::to_string(cfg_.n) + ',' + format_number(task.p1) + ',' +
                                   format_number(task.p2) + ',' + format_number(params.p_prime()) + ',' +
                                   std::to_string(task.seed) + ',';
        switch (cfg_.attack) {
        case ExperimentKind::simulate:
            simulate(task, params, prefix, out);
            break;
        case ExperimentKind::attack_a:
            attack_a(task, params, prefix, out);
            break;
        case ExperimentKind::attack_b:
            attack_b(task, params, prefix, out);
            break;
        case ExperimentKind::bound_a:
            bound_a(params, prefix, out);
            break;
        case ExperimentKind::correction_ratio:
            correction_ratio(params, prefix, out);
            break;
        }
        return out;
    }

private:
    void simulate(const Task& task, const ChannelParams& params, const std::string& prefix, TaskOutput& out) const
    {
        const auto key = random_key(poly_.degree(), task.seed);
        const auto trace = run_pipeline(poly_, key, params, cfg_.n, task.seed);
        std::string rows;
        for (std::size_t i = 0; i < cfg_.n; ++i) {
            rows += prefix;
            rows += std::to_string(i);
            for (const auto* seq : {&trace.a, &trace.z, &trace.m, &trace.s, &trace.y}) {
                rows += (*seq)[i] ? ",1" : ",0";
            }
            rows += '\n';
        }
        out.rows = std::move(rows);
    }

    void attack_a(const Task& task, const ChannelParams& params, const std::string& prefix, TaskOutput& out) const
    {
        const auto key = random_key(poly_.degree(), task.seed);
        const auto trace = run_pipeline(poly_, key, params, cfg_.n, task.seed);
        AttackAConfig ac{poly_, trace.y, params.p_prime(), cfg_.verification, cfg_.margin, cfg_.count_mode, key};
        const auto rep = run_attack_a(ac);
        const bool correct = rep.key && *rep.key == key;
        out.failed = !rep.success;
        out.rows = prefix + std::string(to_string(cfg_.verification)) + ',' + (rep.success ? "1" : "0") + ',' +
                   (correct ? "1" : "0") + ',' + std::to_string(rep.trials) + ',' +
                   std::to_string(rep.selection_errors.value_or(0)) + ',' + std::to_string(rep.estimate.m_prime) +
                   ',' + std::to_string(rep.estimate.h_prime) + ',' + format_number(rep.estimate.rbar) + ',' +
                   format_number(rep.bound) + ',' + (rep.key ? rep.key->state.to_string() : std::string()) + '\n';
    }

    void attack_b(const Task& task, const ChannelParams& params, const std::string& prefix, TaskOutput& out) const
    {
        const auto key = random_key(poly_.degree(), task.seed);
        const auto trace = run_pipeline(poly_, key, params, cfg_.n, task.seed);
        AttackBConfig bc{poly_,
                         trace.y,
                         params.p_prime(),
                         cfg_.alpha,
                         cfg_.n_thr,
                         cfg_.max_rounds,
                         cfg_.stall_rounds,
                         cfg_.count_mode,
                         cfg_.threshold_rule,
                         cfg_.feedback,
                         cfg_.prior_reset,
                         trace.a};
        const auto rep = run_attack_b(bc);
        out.failed = !rep.success;
        const std::size_t final_correct = cfg_.n - hamming_distance(rep.corrected, trace.a);
        out.rows = prefix + (rep.success ? "1" : "0") + ',' + std::string(to_string(rep.end)) + ',' +
                   std::to_string(rep.rounds_run) + ',' + std::to_string(final_correct) + ',' +
                   (rep.analysis ? format_number(rep.analysis->c) : std::string()) + ',' +
                   (rep.analysis ? format_number(rep.analysis->p_thr) : std::string()) + ',' +
                   std::to_string(rep.n_thr) + ',' + (rep.key ? rep.key->state.to_string() : std::string()) + '\n';
        const std::string trace_prefix = format_number(params.p1()) + ',' + format_number(params.p2()) + ',' +
                                         std::to_string(task.seed) + ',';
        for (const auto& r : rep.rounds) {
            out.trace_rows += trace_prefix + std::to_string(r.round) + ',' + std::to_string(r.bits_flipped) + ',' +
                              std::to_string(r.correct_bits.value_or(0)) + ',' + format_number(r.min_posterior) +
                              ',' + format_number(r.mean_posterior) + '\n';
        }
    }

    void bound_a(const ChannelParams& params, const std::string& prefix, TaskOutput& out) const
    {
        const CheckSystem checks(poly_, cfg_.n, cfg_.count_mode);
        const auto model = ReliabilityModel::make(params.p_prime(), poly_.taps());
        const auto est = estimate_rbar(poly_.degree(), cfg_.n, checks, model);
        out.rows = prefix + std::to_string(est.m_prime) + ',' + std::to_string(est.h_prime) + ',' +
                   format_number(est.rbar) + ',' + format_number(entropy_bound(poly_.degree(), est.rbar)) + '\n';
    }

    void correction_ratio(const ChannelParams& params, const std::string& prefix, TaskOutput& out) const
    {
        const CheckSystem checks(poly_, cfg_.n, cfg_.count_mode);
        const auto model = ReliabilityModel::make(params.p_prime(), poly_.taps());
        const auto a = derive_threshold(model, checks, cfg_.n, cfg_.threshold_rule);
        out.rows = prefix + std::to_string(a.m_prime) + ',' + std::to_string(a.h_thr) + ',' +
                   format_number(a.p_thr) + ',' + format_number(a.n_w) + ',' + format_number(a.n_v) + ',' +
                   format_number(a.n_i) + ',' + format_number(a.c) + ',' +
                   std::string(to_string(predict_capability(a))) + '\n';
    }

    const ExperimentConfig& cfg_;
    ConnectionPolynomial poly_;
};

bool is_analytic(ExperimentKind kind)
{
    return kind == ExperimentKind::bound_a || kind == ExperimentKind::correction_ratio;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs)
{
    validate(cfg);
    const Runner runner(cfg);

    std::vector<Task> tasks;
    const std::size_t runs = is_analytic(cfg.attack) ? 1 : cfg.runs;
    for (double p1 : cfg.p1) {
        for (double p2 : cfg.p2) {
            for (std::size_t r = 0; r < runs; ++r) {
                tasks.push_back({p1, p2, cfg.seed + r});
            }
        }
    }

    std::vector<TaskOutput> outputs(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                outputs[i] = runner.run(tasks[i]);
            } catch (...) {
                outputs[i].error = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    ExperimentResult result;
    result.csv = common_header() + ',' + kind_header(cfg.attack) + '\n';
    result.trace_csv = "p1,p2,seed,round,bits_flipped,correct_bits,min_posterior,mean_posterior\n";
    for (auto& o : outputs) {
        if (o.error) {
            std::rethrow_exception(o.error);
        }
        result.csv += o.rows;
        result.trace_csv += o.trace_rows;
        result.failures += o.failed ? 1 : 0;
    }

    const auto poly = ConnectionPolynomial::parse(cfg.poly);
    if (!passes_period_check(poly)) {
        result.warnings.push_back("polynomial " + cfg.poly + " does not generate a maximal-length sequence (period " +
                                  std::to_string(state_period(poly).value_or(0)) + ", expected " +
                                  std::to_string((std::size_t{1} << poly.degree()) - 1) + ")");
    }
    return result;
}

} // namespace fcalab
