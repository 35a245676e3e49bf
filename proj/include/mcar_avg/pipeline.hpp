// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_PIPELINE_HPP
#define MCAR_AVG_PIPELINE_HPP

#include <vector>

#include "mcar_avg/averaging.hpp"
#include "mcar_avg/patterns.hpp"

namespace mcar {

/// Everything produced by one model-averaging fit of a dataset.
struct ModelAverage {
  std::vector<ColumnGroup> groups;
  std::vector<FittedCandidate> fits;
  ZeroFilledMatrix xt;
  AveragedEstimate estimate;
};

/// Groups -> candidates -> per-candidate MLE -> weight choice.
ModelAverage fit_model_average(const GlmFamily& f, const ObservedDataset& d, double lambda_n = kDefaultLambda,
                               const FitOptions& fit_opts = {}, const OptimizerOptions& opt_opts = {});

}  // namespace mcar

#endif  // MCAR_AVG_PIPELINE_HPP
