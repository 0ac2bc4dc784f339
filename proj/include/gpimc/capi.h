#ifndef GPIMC_CAPI_H
#define GPIMC_CAPI_H

/* C interface to the gpimc library. Exact rationals cross the boundary as
 * "num/den" strings (or "n" for integers); probability vectors as
 * comma-separated rationals, e.g. "1/2,1/4". Strings returned through char**
 * are owned by the library and released with gpimc_string_free. Every entry
 * point is thread-safe as long as each gpimc_ctx is used from one thread at
 * a time. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GPIMC_API __declspec(dllexport)
#else
#define GPIMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gpimc_ctx gpimc_ctx;

/* Nonzero codes match the CLI exit codes where one exists. */
typedef enum gpimc_status {
  GPIMC_OK = 0,
  GPIMC_VERIFY_FAILED = 1,
  GPIMC_INVALID_INPUT = 2,
  GPIMC_BUDGET_EXCEEDED = 3,
  GPIMC_INTERNAL_ERROR = 4
} gpimc_status;

typedef enum gpimc_variant {
  GPIMC_VARIANT_EQUALITY = 0,
  GPIMC_VARIANT_SLACK = 1
} gpimc_variant;

typedef enum gpimc_sampler {
  GPIMC_SAMPLER_UNIFORM = 0,
  GPIMC_SAMPLER_DIRICHLET_RAMP = 1
} gpimc_sampler;

GPIMC_API const char* gpimc_version(void);

GPIMC_API gpimc_ctx* gpimc_ctx_new(void);
GPIMC_API void gpimc_ctx_free(gpimc_ctx* ctx);

/* Message for the most recent failing call on this ctx; empty string if the
 * last call succeeded. The pointer stays valid until the next call. */
GPIMC_API const char* gpimc_last_error(const gpimc_ctx* ctx);

GPIMC_API gpimc_status gpimc_set_term_budget(gpimc_ctx* ctx, uint64_t max_terms);
GPIMC_API gpimc_status gpimc_set_wick_degree_cap(gpimc_ctx* ctx, unsigned cap);

/* Combinatorial condition value for the chosen constraint variant.
 * approx_out may be NULL; *exact_out gets the exact rational. */
GPIMC_API gpimc_status gpimc_theorem_gap(gpimc_ctx* ctx, const char* p_csv,
                                         unsigned m, gpimc_variant variant,
                                         char** exact_out, double* approx_out);

/* Gaussian-limit gap via Wick pairing; use_naive_pairing selects the
 * explicit pairing enumerator instead of the memoized recursion. */
GPIMC_API gpimc_status gpimc_gaussian_gap(gpimc_ctx* ctx, const char* p_csv,
                                          unsigned m, int use_naive_pairing,
                                          char** exact_out, double* approx_out);

/* Scaled finite-trials gap at the given trial count. */
GPIMC_API gpimc_status gpimc_finite_n_gap(gpimc_ctx* ctx, const char* p_csv,
                                          unsigned m, uint64_t trials,
                                          char** exact_out, double* approx_out);

/* Convergence study over n_list (ascending); format is "csv" or "json". */
GPIMC_API gpimc_status gpimc_convergence_table(gpimc_ctx* ctx, const char* p_csv,
                                               unsigned m, const uint64_t* n_list,
                                               size_t n_count, const char* format,
                                               char** out);

/* One reproducible simplex draw from the (seed, m, d, sample_index) stream. */
GPIMC_API gpimc_status gpimc_sample_simplex(gpimc_ctx* ctx, unsigned d,
                                            gpimc_sampler sampler, unsigned grid,
                                            uint64_t seed, unsigned m,
                                            unsigned sample_index,
                                            char** p_csv_out);

/* Full sweep. config_json mirrors the CLI flags:
 *   {"m_max":2,"d_max":2,"samples_per_cell":3,"sampler":"uniform",
 *    "grid":10000,"seed":7,"variants":["equality","slack"],"oracle":true,
 *    "finite_N":[32,64],"fixed_points":["1/2,1/4"],"workers":2,
 *    "timings":false}
 * Unknown keys are rejected. format is "csv" or "json". */
GPIMC_API gpimc_status gpimc_sweep(gpimc_ctx* ctx, const char* config_json,
                                   const char* format, char** out);

/* Invariant battery. options_json: {"seed":N,"survey_samples_per_cell":N,
 * "inject_stirling_fault":bool} or NULL/"" for defaults. Returns
 * GPIMC_VERIFY_FAILED when a hard invariant fails; the report JSON is
 * written either way. */
GPIMC_API gpimc_status gpimc_verify(gpimc_ctx* ctx, const char* options_json,
                                    char** report_json_out);

GPIMC_API void gpimc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GPIMC_CAPI_H */
