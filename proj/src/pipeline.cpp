// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/pipeline.hpp"

namespace mcar {

ModelAverage fit_model_average(const GlmFamily& f, const ObservedDataset& d, double lambda_n,
                               const FitOptions& fit_opts, const OptimizerOptions& opt_opts) {
  auto groups = detect_column_groups(d);
  const auto candidates = build_candidates(d);
  ZeroFilledMatrix xt = zero_fill(d);
  auto fits = fit_candidates(f, candidates, d, fit_opts);
  AveragedEstimate est = minimize_weights(f, fits, xt, d.y(), lambda_n, opt_opts);
  return ModelAverage{std::move(groups), std::move(fits), std::move(xt), std::move(est)};
}

}  // namespace mcar
