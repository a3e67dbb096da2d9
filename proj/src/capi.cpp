#include "fcalab/fcalab.h"

#include "fcalab/attack_b.hpp"
#include "fcalab/channel.hpp"
#include "fcalab/errors.hpp"
#include "fcalab/harness.hpp"

#include <new>
#include <optional>
#include <string>

struct fcalab_experiment
{
    fcalab::ExperimentConfig config;
    std::optional<fcalab::ExperimentResult> result;
    std::string rendered;
};

namespace {

thread_local std::string g_last_error;

fcalab_status fail(fcalab_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Maps the exception in flight to a status code.
fcalab_status translate_exception()
{
    try {
        throw;
    } catch (const fcalab::ValidationError& e) {
        return fail(FCALAB_E_VALIDATION, e.what());
    } catch (const fcalab::ParseError& e) {
        return fail(FCALAB_E_PARSE, e.what());
    } catch (const fcalab::RangeError& e) {
        return fail(FCALAB_E_RANGE, e.what());
    } catch (const fcalab::InsufficientLengthError& e) {
        return fail(FCALAB_E_RANGE, e.what());
    } catch (const fcalab::DimensionError& e) {
        return fail(FCALAB_E_DIMENSION, e.what());
    } catch (const fcalab::SingularMatrixError& e) {
        return fail(FCALAB_E_SINGULAR, e.what());
    } catch (const fcalab::UndefinedRatioError& e) {
        return fail(FCALAB_E_UNDEFINED_RATIO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FCALAB_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FCALAB_E_INTERNAL, e.what());
    } catch (...) {
        return fail(FCALAB_E_INTERNAL, "unknown error");
    }
}

template <typename F>
fcalab_status guarded(F&& f)
{
    g_last_error.clear();
    try {
        f();
        return FCALAB_OK;
    } catch (...) {
        return translate_exception();
    }
}

} // namespace

extern "C" {

const char* fcalab_status_string(fcalab_status status)
{
    switch (status) {
    case FCALAB_OK:
        return "ok";
    case FCALAB_E_NULL_ARGUMENT:
        return "null argument";
    case FCALAB_E_PARSE:
        return "parse error";
    case FCALAB_E_VALIDATION:
        return "validation error";
    case FCALAB_E_RANGE:
        return "range error";
    case FCALAB_E_DIMENSION:
        return "dimension error";
    case FCALAB_E_SINGULAR:
        return "singular matrix";
    case FCALAB_E_UNDEFINED_RATIO:
        return "undefined ratio";
    case FCALAB_E_NOT_RUN:
        return "experiment has not been run";
    case FCALAB_E_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char* fcalab_last_error(void)
{
    return g_last_error.c_str();
}

fcalab_status fcalab_cascade(double p1, double p2, double* out)
{
    if (!out) {
        return fail(FCALAB_E_NULL_ARGUMENT, "out is null");
    }
    return guarded([&] { *out = fcalab::cascade(p1, p2); });
}

fcalab_status fcalab_correction_ratio(const char* poly, size_t n, double p1, double p2, double* out_c)
{
    if (!poly || !out_c) {
        return fail(FCALAB_E_NULL_ARGUMENT, "poly and out_c must not be null");
    }
    return guarded([&] {
        const auto g = fcalab::ConnectionPolynomial::parse(poly);
        const fcalab::ChannelParams params(p1, p2);
        const fcalab::CheckSystem checks(g, n);
        const auto model = fcalab::ReliabilityModel::make(params.p_prime(), g.taps());
        *out_c = fcalab::derive_threshold(model, checks, n).c;
    });
}

fcalab_status fcalab_experiment_create(fcalab_experiment** out)
{
    if (!out) {
        return fail(FCALAB_E_NULL_ARGUMENT, "out is null");
    }
    *out = new (std::nothrow) fcalab_experiment;
    if (!*out) {
        return fail(FCALAB_E_INTERNAL, "out of memory");
    }
    return FCALAB_OK;
}

void fcalab_experiment_destroy(fcalab_experiment* exp)
{
    delete exp;
}

fcalab_status fcalab_experiment_load_config(fcalab_experiment* exp, const char* text)
{
    if (!exp || !text) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and text must not be null");
    }
    return guarded([&] {
        exp->config = fcalab::parse_config(text);
        exp->result.reset();
    });
}

fcalab_status fcalab_experiment_set(fcalab_experiment* exp, const char* key, const char* value)
{
    if (!exp || !key || !value) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment, key and value must not be null");
    }
    return guarded([&] {
        fcalab::apply_setting(exp->config, key, value);
        exp->result.reset();
    });
}

fcalab_status fcalab_experiment_render_config(fcalab_experiment* exp, const char** text)
{
    if (!exp || !text) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and text must not be null");
    }
    return guarded([&] {
        exp->rendered = fcalab::render_config(exp->config);
        *text = exp->rendered.c_str();
    });
}

fcalab_status fcalab_experiment_validate(const fcalab_experiment* exp)
{
    if (!exp) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment is null");
    }
    return guarded([&] { fcalab::validate(exp->config); });
}

fcalab_status fcalab_experiment_run(fcalab_experiment* exp, unsigned jobs)
{
    if (!exp) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment is null");
    }
    exp->result.reset();
    return guarded([&] { exp->result = fcalab::run_experiment(exp->config, jobs); });
}

fcalab_status fcalab_experiment_csv(const fcalab_experiment* exp, const char** csv, size_t* length)
{
    if (!exp || !csv) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and csv must not be null");
    }
    if (!exp->result) {
        return fail(FCALAB_E_NOT_RUN, "experiment has not been run");
    }
    *csv = exp->result->csv.c_str();
    if (length) {
        *length = exp->result->csv.size();
    }
    return FCALAB_OK;
}

fcalab_status fcalab_experiment_trace_csv(const fcalab_experiment* exp, const char** csv, size_t* length)
{
    if (!exp || !csv) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and csv must not be null");
    }
    if (!exp->result) {
        return fail(FCALAB_E_NOT_RUN, "experiment has not been run");
    }
    *csv = exp->result->trace_csv.c_str();
    if (length) {
        *length = exp->result->trace_csv.size();
    }
    return FCALAB_OK;
}

fcalab_status fcalab_experiment_failures(const fcalab_experiment* exp, size_t* count)
{
    if (!exp || !count) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and count must not be null");
    }
    if (!exp->result) {
        return fail(FCALAB_E_NOT_RUN, "experiment has not been run");
    }
    *count = exp->result->failures;
    return FCALAB_OK;
}

size_t fcalab_experiment_warning_count(const fcalab_experiment* exp)
{
    return exp && exp->result ? exp->result->warnings.size() : 0;
}

const char* fcalab_experiment_warning(const fcalab_experiment* exp, size_t index)
{
    if (!exp || !exp->result || index >= exp->result->warnings.size()) {
        return nullptr;
    }
    return exp->result->warnings[index].c_str();
}

fcalab_status fcalab_experiment_output_path(const fcalab_experiment* exp, const char** path)
{
    if (!exp || !path) {
        return fail(FCALAB_E_NULL_ARGUMENT, "experiment and path must not be null");
    }
    *path = exp->config.out.c_str();
    return FCALAB_OK;
}

} // extern "C"
