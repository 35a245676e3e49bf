// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/mcar_avg.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "mcar_avg/error.hpp"
#include "mcar_avg/report.hpp"

struct mcar_dataset {
  mcar::ObservedDataset data;
};

struct mcar_fit {
  mcar::GlmFamily family;
  mcar::ObservedDataset data;
  mcar::FitReport report;
};

struct mcar_study {
  std::vector<mcar::SimResult> cells;
};

namespace {

thread_local std::string g_last_error;

mcar_status to_status(mcar::Errc code) {
  switch (code) {
    case mcar::Errc::invalid_argument:
      return MCAR_E_INVALID_ARGUMENT;
    case mcar::Errc::parse:
      return MCAR_E_PARSE;
    case mcar::Errc::data:
      return MCAR_E_DATA;
    case mcar::Errc::rank_deficient:
      return MCAR_E_RANK_DEFICIENT;
    case mcar::Errc::no_complete_cases:
      return MCAR_E_NO_COMPLETE_CASES;
    case mcar::Errc::infeasible:
      return MCAR_E_INFEASIBLE;
    case mcar::Errc::numeric:
      return MCAR_E_NUMERIC;
    case mcar::Errc::io:
      return MCAR_E_IO;
    case mcar::Errc::internal:
      return MCAR_E_INTERNAL;
  }
  return MCAR_E_INTERNAL;
}

template <class Body>
mcar_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return MCAR_OK;
  } catch (const mcar::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MCAR_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return MCAR_E_INTERNAL;
  } catch (...) {
    g_last_error = "internal error";
    return MCAR_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mcar::Error(mcar::Errc::invalid_argument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_vector(const mcar::Vector& v, double* out, size_t len) {
  require(out != nullptr, "output buffer is null");
  require(len == static_cast<size_t>(v.size()),
          ("output buffer holds " + std::to_string(len) + " values, need " + std::to_string(v.size())).c_str());
  for (mcar::Index i = 0; i < v.size(); ++i) out[i] = v(i);
}

const mcar::SimResult& cell_of(const mcar_study* s, size_t cell) {
  require(s != nullptr, "study is null");
  require(cell < s->cells.size(), "cell index out of range");
  return s->cells[cell];
}

mcar::Method method_of(mcar_method m) {
  require(m >= MCAR_MOPT && m <= MCAR_MIMA, "unknown method");
  return static_cast<mcar::Method>(m);
}

const int64_t kDefaultN[] = {100, 200};
const double kDefaultA[] = {-0.3, 0.0, 0.5};

}  // namespace

extern "C" {

const char* mcar_version(void) { return "1.0.0"; }

const char* mcar_status_string(mcar_status status) {
  switch (status) {
    case MCAR_OK:
      return "ok";
    case MCAR_E_INVALID_ARGUMENT:
      return "invalid argument";
    case MCAR_E_PARSE:
      return "parse error";
    case MCAR_E_DATA:
      return "data error";
    case MCAR_E_RANK_DEFICIENT:
      return "rank deficient";
    case MCAR_E_NO_COMPLETE_CASES:
      return "no complete cases";
    case MCAR_E_INFEASIBLE:
      return "infeasible candidate";
    case MCAR_E_NUMERIC:
      return "numerical error";
    case MCAR_E_IO:
      return "i/o error";
    case MCAR_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* mcar_last_error(void) { return g_last_error.c_str(); }

void mcar_string_free(char* s) { std::free(s); }

mcar_status mcar_dataset_load_csv(const char* path, const char* na_token, const char* response_column,
                                  mcar_dataset** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must be non-null");
    mcar::CsvOptions opts;
    if (na_token != nullptr) opts.na_token = na_token;
    if (response_column != nullptr) opts.response_column = response_column;
    *out = new mcar_dataset{mcar::load_csv(path, opts)};
  });
}

mcar_status mcar_dataset_create(size_t n, size_t k, const double* y, const double* x,
                                const unsigned char* observed, mcar_dataset** out) {
  return guarded([&] {
    require(y != nullptr && x != nullptr && observed != nullptr && out != nullptr, "null argument");
    const auto rows = static_cast<mcar::Index>(n);
    const auto cols = static_cast<mcar::Index>(k);
    mcar::Vector yv = Eigen::Map<const mcar::Vector>(y, rows);
    mcar::Matrix xm(rows, cols);
    mcar::Mask mask(rows, cols);
    for (mcar::Index i = 0; i < rows; ++i) {
      for (mcar::Index j = 0; j < cols; ++j) {
        const auto at = static_cast<size_t>(i) * k + static_cast<size_t>(j);
        mask(i, j) = observed[at] != 0;
        xm(i, j) = mask(i, j) ? x[at] : std::numeric_limits<double>::quiet_NaN();
      }
    }
    *out = new mcar_dataset{mcar::ObservedDataset(std::move(yv), std::move(xm), std::move(mask))};
  });
}

void mcar_dataset_free(mcar_dataset* d) { delete d; }

size_t mcar_dataset_rows(const mcar_dataset* d) { return d ? static_cast<size_t>(d->data.rows()) : 0; }

size_t mcar_dataset_cols(const mcar_dataset* d) { return d ? static_cast<size_t>(d->data.cols()) : 0; }

mcar_status mcar_dataset_zero_fill(const mcar_dataset* d, double* out, size_t len) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    const auto xt = mcar::zero_fill(d->data);
    require(len == static_cast<size_t>(xt.xt().size()), "output buffer must hold n*k values");
    for (mcar::Index i = 0; i < xt.xt().rows(); ++i) {
      for (mcar::Index j = 0; j < xt.xt().cols(); ++j) {
        out[static_cast<size_t>(i * xt.xt().cols() + j)] = xt.xt()(i, j);
      }
    }
  });
}

mcar_status mcar_patterns_json(const mcar_dataset* d, char** json_out) {
  return guarded([&] {
    require(d != nullptr && json_out != nullptr, "null argument");
    *json_out = copy_string(mcar::patterns_json(d->data).dump(2));
  });
}

mcar_status mcar_fit_run(const mcar_dataset* d, const char* family, double lambda, mcar_fit** out) {
  return guarded([&] {
    require(d != nullptr && family != nullptr && out != nullptr, "null argument");
    const auto f = mcar::GlmFamily::from_name(family);
    *out = new mcar_fit{f, d->data, mcar::run_fit(f, d->data, lambda)};
  });
}

void mcar_fit_free(mcar_fit* fit) { delete fit; }

size_t mcar_fit_num_candidates(const mcar_fit* fit) {
  return fit ? static_cast<size_t>(fit->report.average.estimate.weights.size()) : 0;
}

size_t mcar_fit_num_coefficients(const mcar_fit* fit) {
  return fit ? static_cast<size_t>(fit->report.average.estimate.beta.size()) : 0;
}

mcar_status mcar_fit_weights(const mcar_fit* fit, double* out, size_t len) {
  return guarded([&] {
    require(fit != nullptr, "fit is null");
    copy_vector(fit->report.average.estimate.weights.values(), out, len);
  });
}

mcar_status mcar_fit_beta(const mcar_fit* fit, double* out, size_t len) {
  return guarded([&] {
    require(fit != nullptr, "fit is null");
    copy_vector(fit->report.average.estimate.beta, out, len);
  });
}

mcar_status mcar_fit_predict(const mcar_fit* fit, double* out, size_t len) {
  return guarded([&] {
    require(fit != nullptr, "fit is null");
    copy_vector(mcar::predict(fit->report.average.estimate, fit->family), out, len);
  });
}

double mcar_fit_criterion(const mcar_fit* fit) {
  return fit ? fit->report.average.estimate.criterion_value : std::numeric_limits<double>::quiet_NaN();
}

mcar_status mcar_fit_json(const mcar_fit* fit, char** json_out) {
  return guarded([&] {
    require(fit != nullptr && json_out != nullptr, "null argument");
    *json_out = copy_string(mcar::fit_json(fit->family, fit->data, fit->report).dump(2));
  });
}

mcar_sim_options mcar_sim_options_default(void) {
  mcar_sim_options o{};
  o.family = "bernoulli";
  o.n_values = kDefaultN;
  o.n_count = 2;
  o.a_values = kDefaultA;
  o.a_count = 3;
  o.replications = 1000;
  o.seed = mcar::SimConfig{}.seed;
  o.lambda = mcar::kDefaultLambda;
  o.threads = 1;
  o.keep_last_covariate = 0;
  return o;
}

mcar_status mcar_study_run(const mcar_sim_options* opts, mcar_study** out) {
  return guarded([&] {
    require(opts != nullptr && out != nullptr, "null argument");
    require(opts->n_values != nullptr && opts->n_count > 0, "at least one sample size is required");
    require(opts->a_values != nullptr && opts->a_count > 0, "at least one threshold is required");
    mcar::SimConfig base;
    base.family = mcar::GlmFamily::from_name(opts->family ? opts->family : "bernoulli").kind();
    base.replications = opts->replications;
    base.seed = opts->seed;
    base.lambda_n = opts->lambda;
    base.threads = opts->threads;
    base.drop_last_covariate = opts->keep_last_covariate == 0;
    auto study = std::make_unique<mcar_study>();
    for (size_t ia = 0; ia < opts->a_count; ++ia) {
      for (size_t in = 0; in < opts->n_count; ++in) {
        mcar::SimConfig cfg = base;
        cfg.a = opts->a_values[ia];
        cfg.n = static_cast<mcar::Index>(opts->n_values[in]);
        study->cells.push_back(mcar::run_study(cfg));
      }
    }
    *out = study.release();
  });
}

void mcar_study_free(mcar_study* s) { delete s; }

size_t mcar_study_num_cells(const mcar_study* s) { return s ? s->cells.size() : 0; }

mcar_status mcar_study_summary(const mcar_study* s, size_t cell, mcar_method method, double* mean,
                               double* median, double* sd, int32_t* failures) {
  return guarded([&] {
    const auto& summary = cell_of(s, cell).summary_of(method_of(method));
    if (mean) *mean = summary.mean;
    if (median) *median = summary.median;
    if (sd) *sd = summary.sd;
    if (failures) *failures = summary.failures;
  });
}

mcar_status mcar_study_values(const mcar_study* s, size_t cell, mcar_method method, double* out, size_t len) {
  return guarded([&] {
    const auto& values = cell_of(s, cell).values_of(method_of(method));
    require(out != nullptr && len == values.size(), "output buffer must hold one value per replication");
    std::copy(values.begin(), values.end(), out);
  });
}

mcar_status mcar_study_json(const mcar_study* s, int include_values, char** json_out) {
  return guarded([&] {
    require(s != nullptr && json_out != nullptr, "null argument");
    *json_out = copy_string(mcar::studies_json(s->cells, include_values != 0).dump(2));
  });
}

mcar_status mcar_study_csv(const mcar_study* s, char** csv_out) {
  return guarded([&] {
    require(s != nullptr && csv_out != nullptr, "null argument");
    *csv_out = copy_string(mcar::studies_csv(s->cells));
  });
}

mcar_status mcar_study_table(const mcar_study* s, char** text_out) {
  return guarded([&] {
    require(s != nullptr && text_out != nullptr, "null argument");
    *text_out = copy_string(mcar::studies_table(s->cells));
  });
}

}  // extern "C"
