#include "fcalab/fcalab.h"

#include <doctest.h>

#include <cmath>
#include <string>

namespace {

struct Handle
{
    fcalab_experiment* exp = nullptr;
    Handle() { REQUIRE(fcalab_experiment_create(&exp) == FCALAB_OK); }
    ~Handle() { fcalab_experiment_destroy(exp); }
};

} // namespace

TEST_CASE("cascade through the C interface")
{
    double p = -1.0;
    CHECK(fcalab_cascade(0.2, 0.1, &p) == FCALAB_OK);
    CHECK(p == doctest::Approx(0.26));
    CHECK(fcalab_cascade(1.5, 0.1, &p) == FCALAB_E_RANGE);
    CHECK(std::string(fcalab_last_error()).size() > 0);
    CHECK(fcalab_cascade(0.2, 0.1, nullptr) == FCALAB_E_NULL_ARGUMENT);
    CHECK(fcalab_cascade(0.2, 0.1, &p) == FCALAB_OK);
    CHECK(std::string(fcalab_last_error()).empty());
}

TEST_CASE("correction ratio through the C interface")
{
    double c = 0.0;
    CHECK(fcalab_correction_ratio("31,21,12,3,2,1,0", 3100, 0.2, 0.1, &c) == FCALAB_OK);
    CHECK(std::abs(c - (-0.034)) <= 0.02);
    CHECK(fcalab_correction_ratio("31,21,12,3,2,1,0", 3100, 0.0, 0.0, &c) == FCALAB_E_UNDEFINED_RATIO);
    CHECK(fcalab_correction_ratio("31,21,x", 3100, 0.2, 0.0, &c) == FCALAB_E_PARSE);
    CHECK(fcalab_correction_ratio("31,21,12,3,2,1,0", 20, 0.2, 0.0, &c) == FCALAB_E_RANGE);
    CHECK(fcalab_correction_ratio(nullptr, 3100, 0.2, 0.0, &c) == FCALAB_E_NULL_ARGUMENT);
}

TEST_CASE("experiment lifecycle")
{
    Handle h;
    const char* csv = nullptr;
    std::size_t len = 0;
    CHECK(fcalab_experiment_csv(h.exp, &csv, &len) == FCALAB_E_NOT_RUN);

    CHECK(fcalab_experiment_set(h.exp, "attack", "correction-ratio") == FCALAB_OK);
    CHECK(fcalab_experiment_set(h.exp, "p2", "0,0.1") == FCALAB_OK);
    CHECK(fcalab_experiment_validate(h.exp) == FCALAB_OK);
    CHECK(fcalab_experiment_run(h.exp, 2) == FCALAB_OK);
    REQUIRE(fcalab_experiment_csv(h.exp, &csv, &len) == FCALAB_OK);
    const std::string text(csv, len);
    CHECK(text.rfind("attack,poly,", 0) == 0);
    CHECK(text.find("possibly-correcting") != std::string::npos);
    CHECK(text.find("zero-capability") != std::string::npos);

    std::size_t failures = 99;
    CHECK(fcalab_experiment_failures(h.exp, &failures) == FCALAB_OK);
    CHECK(failures == 0);
    CHECK(fcalab_experiment_warning_count(h.exp) == 0);
    CHECK(fcalab_experiment_warning(h.exp, 0) == nullptr);

    const char* trace = nullptr;
    CHECK(fcalab_experiment_trace_csv(h.exp, &trace, nullptr) == FCALAB_OK);
    CHECK(std::string(trace).rfind("p1,p2,seed,round", 0) == 0);

    // Any change invalidates the previous result.
    CHECK(fcalab_experiment_set(h.exp, "runs", "2") == FCALAB_OK);
    CHECK(fcalab_experiment_csv(h.exp, &csv, &len) == FCALAB_E_NOT_RUN);
}

TEST_CASE("configuration errors map to status codes")
{
    Handle h;
    CHECK(fcalab_experiment_set(h.exp, "colour", "blue") == FCALAB_E_PARSE);
    CHECK(fcalab_experiment_set(h.exp, "n", "lots") == FCALAB_E_PARSE);
    CHECK(fcalab_experiment_set(h.exp, nullptr, "1") == FCALAB_E_NULL_ARGUMENT);
    CHECK(fcalab_experiment_load_config(h.exp, "poly = 15,1,0\nk = 9\n") == FCALAB_E_VALIDATION);

    CHECK(fcalab_experiment_set(h.exp, "p1", "0.9") == FCALAB_OK);
    CHECK(fcalab_experiment_set(h.exp, "runs", "0") == FCALAB_OK);
    CHECK(fcalab_experiment_validate(h.exp) == FCALAB_E_VALIDATION);
    const std::string msg = fcalab_last_error();
    CHECK(msg.find("p1") != std::string::npos);
    CHECK(msg.find("runs") != std::string::npos);
    CHECK(fcalab_experiment_run(h.exp, 1) == FCALAB_E_VALIDATION);

    CHECK(fcalab_experiment_validate(nullptr) == FCALAB_E_NULL_ARGUMENT);
    CHECK(std::string(fcalab_status_string(FCALAB_E_SINGULAR)) == "singular matrix");
}

TEST_CASE("config text round-trips through the handle")
{
    Handle a;
    CHECK(fcalab_experiment_set(a.exp, "poly", "15,9,4,1,0") == FCALAB_OK);
    CHECK(fcalab_experiment_set(a.exp, "p1", "0.1,0.3") == FCALAB_OK);
    const char* text = nullptr;
    REQUIRE(fcalab_experiment_render_config(a.exp, &text) == FCALAB_OK);
    const std::string first = text;

    Handle b;
    CHECK(fcalab_experiment_load_config(b.exp, first.c_str()) == FCALAB_OK);
    REQUIRE(fcalab_experiment_render_config(b.exp, &text) == FCALAB_OK);
    CHECK(std::string(text) == first);

    const char* out = nullptr;
    CHECK(fcalab_experiment_output_path(b.exp, &out) == FCALAB_OK);
    CHECK(std::string(out).empty());
}
