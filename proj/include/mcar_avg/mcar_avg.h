/*
 * Copyright 2026 The mcar_avg Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to mcar_avg: model averaging for generalized linear models
 * with covariates missing completely at random.
 *
 * Objects are opaque handles created by *_create / *_load / *_run calls and
 * released with the matching *_free. Every fallible call returns an
 * mcar_status; on failure mcar_last_error() describes the problem for the
 * calling thread. Strings returned through char** out-parameters are
 * allocated by the library and released with mcar_string_free.
 */
#ifndef MCAR_AVG_H
#define MCAR_AVG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MCAR_AVG_BUILDING)
#    define MCAR_API __declspec(dllexport)
#  else
#    define MCAR_API __declspec(dllimport)
#  endif
#else
#  define MCAR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcar_status {
  MCAR_OK = 0,
  MCAR_E_INVALID_ARGUMENT = 1,
  MCAR_E_PARSE = 2,
  MCAR_E_DATA = 3,
  MCAR_E_RANK_DEFICIENT = 4,
  MCAR_E_NO_COMPLETE_CASES = 5,
  MCAR_E_INFEASIBLE = 6,
  MCAR_E_NUMERIC = 7,
  MCAR_E_IO = 8,
  MCAR_E_INTERNAL = 9
} mcar_status;

typedef struct mcar_dataset mcar_dataset;
typedef struct mcar_fit mcar_fit;
typedef struct mcar_study mcar_study;

MCAR_API const char* mcar_version(void);
MCAR_API const char* mcar_status_string(mcar_status status);
/* Message of the last failed call on this thread; "" if none. */
MCAR_API const char* mcar_last_error(void);
MCAR_API void mcar_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* na_token and response_column may be NULL for "NA" and "y". */
MCAR_API mcar_status mcar_dataset_load_csv(const char* path, const char* na_token,
                                           const char* response_column, mcar_dataset** out);

/* x is row-major n*k; observed is row-major n*k with nonzero = observed.
 * Values of x at unobserved cells are ignored. */
MCAR_API mcar_status mcar_dataset_create(size_t n, size_t k, const double* y, const double* x,
                                         const unsigned char* observed, mcar_dataset** out);
MCAR_API void mcar_dataset_free(mcar_dataset* d);
MCAR_API size_t mcar_dataset_rows(const mcar_dataset* d);
MCAR_API size_t mcar_dataset_cols(const mcar_dataset* d);

/* Row-major n*k zero-filled covariates. Fails if they are rank deficient. */
MCAR_API mcar_status mcar_dataset_zero_fill(const mcar_dataset* d, double* out, size_t len);

/* {"groups": [...], "candidates": [...]} with 1-based indices. */
MCAR_API mcar_status mcar_patterns_json(const mcar_dataset* d, char** json_out);

/* ---- model averaging fit ----------------------------------------------- */

/* family: "bernoulli", "poisson", "gaussian" or the canonical
 * "bernoulli-logit", "poisson-log", "gaussian-identity". */
MCAR_API mcar_status mcar_fit_run(const mcar_dataset* d, const char* family, double lambda,
                                  mcar_fit** out);
MCAR_API void mcar_fit_free(mcar_fit* fit);
MCAR_API size_t mcar_fit_num_candidates(const mcar_fit* fit);
MCAR_API size_t mcar_fit_num_coefficients(const mcar_fit* fit);
MCAR_API mcar_status mcar_fit_weights(const mcar_fit* fit, double* out, size_t len);
MCAR_API mcar_status mcar_fit_beta(const mcar_fit* fit, double* out, size_t len);
/* Mean prediction for every row of the dataset (length n). */
MCAR_API mcar_status mcar_fit_predict(const mcar_fit* fit, double* out, size_t len);
MCAR_API double mcar_fit_criterion(const mcar_fit* fit);
MCAR_API mcar_status mcar_fit_json(const mcar_fit* fit, char** json_out);

/* ---- simulation study -------------------------------------------------- */

typedef struct mcar_sim_options {
  const char* family;      /* NULL = "bernoulli" */
  const int64_t* n_values; /* sample sizes; cells are all (a, n) pairs */
  size_t n_count;
  const double* a_values;  /* missingness thresholds */
  size_t a_count;
  int32_t replications;
  uint64_t seed;
  double lambda;
  int32_t threads;         /* 0 = hardware concurrency */
  int32_t keep_last_covariate; /* nonzero: estimators also see the last covariate */
} mcar_sim_options;

/* Defaults: bernoulli, n in {100, 200}, a in {-0.3, 0, 0.5}, 1000
 * replications, lambda 2, one thread. The returned arrays are static. */
MCAR_API mcar_sim_options mcar_sim_options_default(void);

typedef enum mcar_method { MCAR_MOPT = 0, MCAR_CC = 1, MCAR_MIM = 2, MCAR_MIMA = 3 } mcar_method;

MCAR_API mcar_status mcar_study_run(const mcar_sim_options* opts, mcar_study** out);
MCAR_API void mcar_study_free(mcar_study* s);
MCAR_API size_t mcar_study_num_cells(const mcar_study* s);
/* Raw KL/n summaries (not scaled). */
MCAR_API mcar_status mcar_study_summary(const mcar_study* s, size_t cell, mcar_method method, double* mean,
                                        double* median, double* sd, int32_t* failures);
/* Per-replication KL/n; NaN marks a failed replication. */
MCAR_API mcar_status mcar_study_values(const mcar_study* s, size_t cell, mcar_method method, double* out,
                                       size_t len);
MCAR_API mcar_status mcar_study_json(const mcar_study* s, int include_values, char** json_out);
MCAR_API mcar_status mcar_study_csv(const mcar_study* s, char** csv_out);
MCAR_API mcar_status mcar_study_table(const mcar_study* s, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* MCAR_AVG_H */
