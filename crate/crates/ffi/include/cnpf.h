#ifndef CNPF_H
#define CNPF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CnpfStatus {
  CNPF_STATUS_OK = 0,
  CNPF_STATUS_NULL_POINTER = 1,
  CNPF_STATUS_INVALID_UTF8 = 2,
  CNPF_STATUS_CONFIG = 3,
  CNPF_STATUS_INVALID_ARGUMENT = 4,
  CNPF_STATUS_OUTSIDE_DOMAIN = 5,
  CNPF_STATUS_NOT_CNP = 6,
  CNPF_STATUS_NUMERIC = 7,
  CNPF_STATUS_IO = 8,
  CNPF_STATUS_PANIC = 9,
} CnpfStatus;

// A kernel specification.
typedef struct CnpfKernel CnpfKernel;

// The outcome of a command run.
typedef struct CnpfRun CnpfRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *cnpf_version(void);

// Message of the last failure on this thread, or null. Valid until the next call into the library.
const char *cnpf_last_error(void);

// Parses a kernel from JSON, e.g. `{"family": "dirichlet_alpha", "params": {"alpha": 0.5}}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum CnpfStatus cnpf_kernel_from_json(const char *json, struct CnpfKernel **out);

// Number of variables, 0 for a null handle.
//
// # Safety
// `kernel` must be null or a live handle.
size_t cnpf_kernel_dimension(const struct CnpfKernel *kernel);

// Evaluates `k(z, w)`. Points are `dim` interleaved `(re, im)` pairs; `out` receives `(re, im)`.
//
// # Safety
// `z` and `w` must hold `2 * dim` doubles and `out` two.
enum CnpfStatus cnpf_kernel_eval(const struct CnpfKernel *kernel,
                                 const double *z,
                                 const double *w,
                                 size_t dim,
                                 double *out);

// Tests the CNP property up to `order`. A kernel that is not CNP is reported
// through `is_cnp`, not as a failure; the offending index goes to the error message.
//
// # Safety
// `kernel` must be a live handle and `is_cnp` a valid pointer.
enum CnpfStatus cnpf_kernel_is_cnp(const struct CnpfKernel *kernel,
                                   size_t order,
                                   double tol,
                                   bool *is_cnp);

// # Safety
// `kernel` must be null or a handle not yet freed.
void cnpf_kernel_free(struct CnpfKernel *kernel);

// Runs `kernel`, `factorize`, `sarason`, `dirichlet` or `carleson` on a JSON
// config. Either `config_json` or `preset` may be null.
//
// # Safety
// Non-null strings must be NUL-terminated and `out` a valid pointer.
enum CnpfStatus cnpf_run(const char *command,
                         const char *config_json,
                         const char *preset,
                         struct CnpfRun **out);

// Whether every check of the run passed; false for a null handle.
//
// # Safety
// `run` must be null or a live handle.
bool cnpf_run_passed(const struct CnpfRun *run);

// Process exit code the CLI would return: 0 all passed, 1 a check failed.
//
// # Safety
// `run` must be null or a live handle.
int32_t cnpf_run_exit_code(const struct CnpfRun *run);

// Number of checks in the run.
//
// # Safety
// `run` must be null or a live handle.
size_t cnpf_run_check_count(const struct CnpfRun *run);

// The JSON report, owned by the handle.
//
// # Safety
// `run` must be null or a live handle.
const char *cnpf_run_report(const struct CnpfRun *run);

// # Safety
// `run` must be null or a handle not yet freed.
void cnpf_run_free(struct CnpfRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CNPF_H */
