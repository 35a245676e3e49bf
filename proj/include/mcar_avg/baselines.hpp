// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_BASELINES_HPP
#define MCAR_AVG_BASELINES_HPP

#include <vector>

#include "mcar_avg/averaging.hpp"

namespace mcar {

struct ImputedDataset {
  Matrix x_imputed;
  Mask provenance_mask;
};

/// Replaces every unobserved cell by its column's observed mean.
ImputedDataset mean_impute(const ObservedDataset& d);

/// Complete-case fit: candidate 1 of build_candidates.
FittedCandidate fit_cc(const GlmFamily& f, const ObservedDataset& d, const FitOptions& opts = {});

/// Full-model fit on the mean-imputed design over all rows.
MleFit fit_mim(const GlmFamily& f, const ObservedDataset& d, const FitOptions& opts = {});

inline constexpr Index kMaxSubsetCandidates = Index{1} << 20;

/// Nonempty column subsets in binary-counting order: subset m (1-based)
/// holds column j iff bit j of m is set.
std::vector<IndexSet> enumerate_column_subsets(Index k);

struct SubsetAverage {
  std::vector<IndexSet> subsets;
  std::vector<MleFit> fits;  // beta zero-padded to all K columns
  Matrix design;  // the mean-imputed covariates
  AveragedEstimate estimate;
};

/// Model averaging over all nonempty column subsets of the mean-imputed
/// design, each fitted on all rows, weighted by the same criterion.
SubsetAverage fit_mima(const GlmFamily& f, const ObservedDataset& d, double lambda_n = kDefaultLambda,
                       const FitOptions& fit_opts = {}, const OptimizerOptions& opt_opts = {});

}  // namespace mcar

#endif  // MCAR_AVG_BASELINES_HPP
