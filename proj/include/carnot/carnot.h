/* carnot: heat kernels, sharp reverse Poincare constants and functional
 * inequalities on Carnot groups. Plain C interface over the C++ core.
 *
 * Every function returns a carnot_status; on failure the message is
 * available from carnot_last_error() on the same thread. Strings returned
 * through char** are owned by the caller and released with
 * carnot_free_string(). */
#ifndef CARNOT_CARNOT_H
#define CARNOT_CARNOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(CARNOT_BUILDING_LIBRARY)
#define CARNOT_API __attribute__((visibility("default")))
#else
#define CARNOT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum carnot_status {
  CARNOT_OK = 0,
  CARNOT_ERR_INVALID_ARGUMENT = 1,
  CARNOT_ERR_INVALID_SPEC = 2,
  CARNOT_ERR_UNSUPPORTED_STEP = 3,
  CARNOT_ERR_UNSUPPORTED_GROUP = 4,
  CARNOT_ERR_DIMENSION_MISMATCH = 5,
  CARNOT_ERR_QUADRATURE_NOT_CONVERGED = 6,
  CARNOT_ERR_NUMERICAL_UNDERFLOW = 7,
  CARNOT_ERR_SCHEME_UNSUPPORTED = 8,
  CARNOT_ERR_EXCESSIVE_REJECTION = 9,
  CARNOT_ERR_DIMENSION_TOO_LARGE = 10,
  CARNOT_ERR_MINIMIZATION_FAILED = 11,
  CARNOT_ERR_IO = 12,
  CARNOT_ERR_INTERNAL = 99
} carnot_status;

/* Outcome of a check run. */
typedef enum carnot_verdict {
  CARNOT_VERDICT_PASS = 0,
  CARNOT_VERDICT_FAIL = 1,
  CARNOT_VERDICT_WARN = 2
} carnot_verdict;

typedef struct carnot_group carnot_group;
typedef struct carnot_kernel carnot_kernel;
typedef struct carnot_batch carnot_batch;

CARNOT_API const char* carnot_version(void);
CARNOT_API const char* carnot_status_name(carnot_status status);
/* Message of the last failure on this thread; "" if none. */
CARNOT_API const char* carnot_last_error(void);
CARNOT_API void carnot_free_string(char* s);

/* Preset names as a JSON array. */
CARNOT_API carnot_status carnot_preset_names(char** json_out);

/* Preset name (e.g. "heisenberg-1", "engel") or path to a JSON spec file. */
CARNOT_API carnot_status carnot_group_create(const char* name_or_path, carnot_group** out);
CARNOT_API carnot_status carnot_group_from_json(const char* json_text, carnot_group** out);
CARNOT_API void carnot_group_free(carnot_group* group);
CARNOT_API const char* carnot_group_name(const carnot_group* group);
CARNOT_API int carnot_group_dim(const carnot_group* group);
CARNOT_API int carnot_group_horizontal_dim(const carnot_group* group);
CARNOT_API int carnot_group_step(const carnot_group* group);
CARNOT_API int carnot_group_homogeneous_dim(const carnot_group* group);
/* out = a . b; all arrays hold carnot_group_dim() doubles. */
CARNOT_API carnot_status carnot_group_product(const carnot_group* group, const double* a, const double* b,
                                              double* out);

CARNOT_API carnot_status carnot_kernel_create(const carnot_group* group, carnot_kernel** out);
CARNOT_API void carnot_kernel_free(carnot_kernel* kernel);
CARNOT_API carnot_status carnot_kernel_value(const carnot_kernel* kernel, double t, const double* g,
                                             double* value_out);
/* Right-invariant horizontal log-gradient, horizontal_dim doubles. */
CARNOT_API carnot_status carnot_kernel_log_gradient(const carnot_kernel* kernel, double t, const double* g,
                                                    double* out);
CARNOT_API carnot_status carnot_kernel_pde_residual(const carnot_kernel* kernel, double t, const double* g,
                                                    double* residual_out);

typedef struct carnot_mc_options {
  uint64_t seed;
  uint64_t samples;
  int substeps;  /* per unit time */
  int scheme;    /* 0 stratonovich-heun, 1 exact-step2 */
  int threads;   /* 0: CARNOT_THREADS or 1 */
} carnot_mc_options;

CARNOT_API void carnot_mc_options_default(carnot_mc_options* opt);
CARNOT_API carnot_status carnot_simulate(const carnot_group* group, double t, const carnot_mc_options* opt,
                                         carnot_batch** out);
CARNOT_API void carnot_batch_free(carnot_batch* batch);
CARNOT_API size_t carnot_batch_size(const carnot_batch* batch);
CARNOT_API int carnot_batch_dim(const carnot_batch* batch);
/* Row-major samples x dim endpoints, valid until the batch is freed. */
CARNOT_API const double* carnot_batch_data(const carnot_batch* batch);

/* Runs a check. command is one of lambda, trace-check, rp-check, pp-check,
 * iso-check, identities, bias; config_json is a JSON object of options
 * (NULL for defaults). The report JSON echoes the resolved config first. */
CARNOT_API carnot_status carnot_run(const char* command, const char* config_json, char** report_json,
                                    carnot_verdict* verdict);

#ifdef __cplusplus
}
#endif

#endif
