/*
 * C interface to the fcalab experiment engine.
 *
 * All functions return an fcalab_status. On failure a human-readable message
 * is available from fcalab_last_error() until the next call on the same
 * thread. Strings handed out by an experiment handle stay valid until the
 * handle is modified, run again, or destroyed.
 */
#ifndef FCALAB_H
#define FCALAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FCALAB_BUILDING_LIBRARY)
#    define FCALAB_API __declspec(dllexport)
#  else
#    define FCALAB_API __declspec(dllimport)
#  endif
#else
#  define FCALAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcalab_status
{
    FCALAB_OK = 0,
    FCALAB_E_NULL_ARGUMENT = 1,
    FCALAB_E_PARSE = 2,
    FCALAB_E_VALIDATION = 3,
    FCALAB_E_RANGE = 4,
    FCALAB_E_DIMENSION = 5,
    FCALAB_E_SINGULAR = 6,
    FCALAB_E_UNDEFINED_RATIO = 7,
    FCALAB_E_NOT_RUN = 8,
    FCALAB_E_INTERNAL = 9
} fcalab_status;

typedef struct fcalab_experiment fcalab_experiment;

FCALAB_API const char* fcalab_status_string(fcalab_status status);

/* Message for the most recent failing call on this thread; "" if none. */
FCALAB_API const char* fcalab_last_error(void);

/* p' = p1 + p2 - 2 p1 p2. */
FCALAB_API fcalab_status fcalab_cascade(double p1, double p2, double* out);

/* Correction ratio C for a polynomial given as an exponent list. */
FCALAB_API fcalab_status fcalab_correction_ratio(const char* poly, size_t n, double p1, double p2, double* out_c);

FCALAB_API fcalab_status fcalab_experiment_create(fcalab_experiment** out);
FCALAB_API void fcalab_experiment_destroy(fcalab_experiment* exp);

/* Replaces the configuration with the parsed `key = value` text. */
FCALAB_API fcalab_status fcalab_experiment_load_config(fcalab_experiment* exp, const char* text);

/* Sets one configuration field. */
FCALAB_API fcalab_status fcalab_experiment_set(fcalab_experiment* exp, const char* key, const char* value);

FCALAB_API fcalab_status fcalab_experiment_render_config(fcalab_experiment* exp, const char** text);

/* FCALAB_E_VALIDATION lists every violated field in fcalab_last_error(). */
FCALAB_API fcalab_status fcalab_experiment_validate(const fcalab_experiment* exp);

/* Runs with up to `jobs` worker threads; output does not depend on jobs. */
FCALAB_API fcalab_status fcalab_experiment_run(fcalab_experiment* exp, unsigned jobs);

FCALAB_API fcalab_status fcalab_experiment_csv(const fcalab_experiment* exp, const char** csv, size_t* length);
FCALAB_API fcalab_status fcalab_experiment_trace_csv(const fcalab_experiment* exp, const char** csv,
                                                     size_t* length);

/* Rows whose attack did not recover a key. */
FCALAB_API fcalab_status fcalab_experiment_failures(const fcalab_experiment* exp, size_t* count);

FCALAB_API size_t fcalab_experiment_warning_count(const fcalab_experiment* exp);
FCALAB_API const char* fcalab_experiment_warning(const fcalab_experiment* exp, size_t index);

/* Output path from the configuration; "" means standard output. */
FCALAB_API fcalab_status fcalab_experiment_output_path(const fcalab_experiment* exp, const char** path);

#ifdef __cplusplus
}
#endif

#endif /* FCALAB_H */
