/*
 * C interface to the multi-objective Q(lambda) laboratory.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a morl_status; on failure a human-readable
 * message is available from morl_last_error() on the calling thread until the
 * next failing call. Strings returned through char** out-parameters are
 * heap-allocated and must be released with morl_string_free().
 *
 * Configuration crosses the boundary as JSON documents (see README.md for the
 * field names).
 */
#ifndef MORL_MORL_H
#define MORL_MORL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MORL_BUILDING_LIBRARY)
#    define MORL_API __declspec(dllexport)
#  else
#    define MORL_API __declspec(dllimport)
#  endif
#else
#  define MORL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum morl_status {
  MORL_OK = 0,
  MORL_ERR_INVALID_ARGUMENT = 1,
  MORL_ERR_PARSE = 2,
  MORL_ERR_SCHEMA = 3,
  MORL_ERR_IO = 4,
  MORL_ERR_DOMAIN = 5,
  MORL_ERR_INTERNAL = 6
} morl_status;

typedef struct morl_env morl_env;
typedef struct morl_sweep morl_sweep;

MORL_API const char* morl_version(void);
MORL_API const char* morl_last_error(void);
MORL_API const char* morl_status_name(morl_status status);
MORL_API void morl_string_free(char* s);

/* ---- environments ------------------------------------------------------ */

/* Built-in name ("fig1-deterministic", "fig3-bandit") or path to a .json file. */
MORL_API morl_status morl_env_open(const char* name_or_path, morl_env** out);
MORL_API morl_status morl_env_parse(const char* json, morl_env** out);
MORL_API void morl_env_free(morl_env* env);
MORL_API morl_status morl_env_serialize(const morl_env* env, char** out_json);
MORL_API morl_status morl_env_info(const morl_env* env, size_t* n_objectives, size_t* n_states);
/* Structural parse plus invariant check. *out_report holds one diagnostic per
 * line ("invariant<TAB>location<TAB>message"); empty means valid. Syntax and
 * missing-field errors are returned as status codes instead. */
MORL_API morl_status morl_env_check(const char* json, char** out_report);

/* ---- exact oracle ------------------------------------------------------ */

/* Policy table CSV for every enumerated deterministic policy.
 * utility_json: {"kind":"paper-nonlinear"} etc.; NULL selects paper-nonlinear. */
MORL_API morl_status morl_enumerate_csv(const morl_env* env, const char* utility_json, char** out_csv);
MORL_API morl_status morl_segment_utility(double x, double* out);
MORL_API morl_status morl_preference_boundary(double* x_low, double* x_high);

/* ---- configuration ----------------------------------------------------- */

/* Fills defaults and normalises a "trial", "sweep" or "bandit" config. */
MORL_API morl_status morl_config_resolve(const char* kind, const char* json, char** out_json);

/* ---- learning runs ----------------------------------------------------- */

/* One seeded trial. Any out-parameter may be NULL. out_q_table is CSV
 * (state,accrued,action,q1..qn); out_policy is "{A:a1, B:a1}". */
MORL_API morl_status morl_trial_run(const char* trial_config_json, size_t* out_label, char** out_policy,
                                    char** out_q_table);

/* threads == 0 selects the hardware concurrency. */
MORL_API morl_status morl_sweep_run(const char* sweep_config_json, unsigned threads, morl_sweep** out);
MORL_API morl_status morl_sweep_load_csv(const char* path, morl_sweep** out);
MORL_API morl_status morl_sweep_parse_csv(const char* csv, morl_sweep** out);
MORL_API void morl_sweep_free(morl_sweep* sweep);
MORL_API morl_status morl_sweep_shape(const morl_sweep* sweep, size_t* n_alphas, size_t* n_epsilons,
                                      size_t* n_strategies, size_t* n_policies, size_t* trials_per_cell);
MORL_API morl_status morl_sweep_count(const morl_sweep* sweep, const char* strategy, size_t alpha_index,
                                      size_t epsilon_index, size_t label, uint64_t* out);
MORL_API morl_status morl_sweep_total(const morl_sweep* sweep, const char* strategy, size_t label, uint64_t* out);
/* Sum over cells of count_a(label) - count_b(label). */
MORL_API morl_status morl_sweep_diff_total(const morl_sweep* sweep, const char* strategy_a, const char* strategy_b,
                                           size_t label, int64_t* out);
/* format: "csv" or "svg". */
MORL_API morl_status morl_sweep_render(const morl_sweep* sweep, const char* format, char** out);
MORL_API morl_status morl_sweep_write(const morl_sweep* sweep, const char* format, const char* path);

/* Distributional learner on a single-decision environment. out_csv is the
 * per-pull trace; out_greedy_action the final greedy action index. */
MORL_API morl_status morl_bandit_run(const char* bandit_config_json, char** out_csv, size_t* out_greedy_action);

#ifdef __cplusplus
}
#endif

#endif /* MORL_MORL_H */
