#ifndef FATPOINTS_H
#define FATPOINTS_H

#include <stdint.h>

#if defined(_WIN32)
#define FP_API __declspec(dllexport)
#else
#define FP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fp_context fp_context;
typedef struct fp_report fp_report;

typedef enum fp_status {
  FP_OK = 0,
  FP_ERR_INVALID_ARGUMENT = 1,
  FP_ERR_PRECONDITION = 2,
  FP_ERR_RETRIES_EXHAUSTED = 3,
  FP_ERR_BUDGET_EXCEEDED = 4,
  FP_ERR_SINGULAR_CHART = 5,
  FP_ERR_INTERNAL = 6,
  FP_ERR_UNKNOWN_COMMAND = 7,
  FP_ERR_BAD_REQUEST = 8
} fp_status;

/* Matches the CLI exit codes. */
typedef enum fp_verdict {
  FP_VERIFIED = 0,
  FP_VIOLATED = 1,
  FP_INCONCLUSIVE = 2
} fp_verdict;

FP_API const char* fp_version(void);
FP_API const char* fp_status_string(fp_status status);

FP_API fp_status fp_context_create(fp_context** out);
FP_API void fp_context_destroy(fp_context* ctx);

/* Defaults for requests that leave these fields out. */
FP_API fp_status fp_context_set_prime(fp_context* ctx, uint32_t p);
FP_API fp_status fp_context_set_prime2(fp_context* ctx, uint32_t p);
FP_API fp_status fp_context_set_seed(fp_context* ctx, uint64_t seed);
FP_API fp_status fp_context_set_threads(fp_context* ctx, int threads);
/* When 0, reports carry no wall-clock field and are byte-reproducible. */
FP_API fp_status fp_context_set_timing(fp_context* ctx, int enabled);

/* Message of the last failed call on ctx, or "" after a success. */
FP_API const char* fp_last_error(const fp_context* ctx);

FP_API fp_status fp_h0_surface(fp_context* ctx, int d, int e, int64_t* out);
FP_API fp_status fp_h0_curve(fp_context* ctx, int s, int t, int k, int64_t* out);
/* mults uses the m^k notation, e.g. "4^2,3,2^3". */
FP_API fp_status fp_vdim(fp_context* ctx, int d, int e, const char* mults, int64_t* out);

/* Runs a command ("dims.h0-surface", "classify", "enumerate-special",
   "oracle", "degen.verify-theorem-b", "degen.ledger", "check.inequalities", ...)
   on a JSON request object. On FP_OK *out owns a report. */
FP_API fp_status fp_run(fp_context* ctx, const char* command, const char* request_json,
                        fp_report** out);
FP_API const char* fp_report_json(const fp_report* report);
FP_API fp_verdict fp_report_verdict(const fp_report* report);
FP_API void fp_report_destroy(fp_report* report);

#ifdef __cplusplus
}
#endif

#endif
