// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/baselines.hpp"

#include <string>

#include "mcar_avg/error.hpp"
#include "mcar_avg/patterns.hpp"

namespace mcar {

ImputedDataset mean_impute(const ObservedDataset& d) {
  ImputedDataset out{d.x(), d.mask()};
  for (Index k = 0; k < d.cols(); ++k) {
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < d.rows(); ++i) {
      if (d.observed(i, k)) {
        sum += d.x()(i, k);
        ++count;
      }
    }
    if (count == 0) {
      throw Error(Errc::data, "column '" + d.column_names()[static_cast<std::size_t>(k)] +
                                  "' has no observed entries to impute from");
    }
    const double mean = sum / static_cast<double>(count);
    for (Index i = 0; i < d.rows(); ++i) {
      if (!d.observed(i, k)) out.x_imputed(i, k) = mean;
    }
  }
  return out;
}

FittedCandidate fit_cc(const GlmFamily& f, const ObservedDataset& d, const FitOptions& opts) {
  return fit_mle(f, complete_case_candidate(d), d, opts);
}

MleFit fit_mim(const GlmFamily& f, const ObservedDataset& d, const FitOptions& opts) {
  const ImputedDataset imp = mean_impute(d);
  if (numerical_rank(imp.x_imputed) < d.cols()) {
    throw Error(Errc::rank_deficient, "mean-imputed design is not of full column rank");
  }
  return fit_glm(f, imp.x_imputed, d.y(), opts);
}

std::vector<IndexSet> enumerate_column_subsets(Index k) {
  if (k < 1) throw Error(Errc::invalid_argument, "need at least one column");
  if (k > 20) {
    throw Error(Errc::invalid_argument, "2^" + std::to_string(k) + " - 1 subsets exceed the cap of 2^20 "
                                        "candidates; supply an explicit candidate list instead");
  }
  const Index count = (Index{1} << k) - 1;
  std::vector<IndexSet> subsets;
  subsets.reserve(static_cast<std::size_t>(count));
  for (Index m = 1; m <= count; ++m) {
    IndexSet cols;
    for (Index j = 0; j < k; ++j) {
      if ((m >> j) & 1) cols.push_back(j);
    }
    subsets.push_back(std::move(cols));
  }
  return subsets;
}

SubsetAverage fit_mima(const GlmFamily& f, const ObservedDataset& d, double lambda_n,
                       const FitOptions& fit_opts, const OptimizerOptions& opt_opts) {
  SubsetAverage out;
  out.subsets = enumerate_column_subsets(d.cols());
  out.design = mean_impute(d).x_imputed;

  IndexSet all_rows(static_cast<std::size_t>(d.rows()));
  for (Index i = 0; i < d.rows(); ++i) all_rows[static_cast<std::size_t>(i)] = i;

  std::vector<Vector> betas;
  std::vector<int> penalties;
  for (const auto& cols : out.subsets) {
    MleFit fit = fit_glm(f, submatrix(out.design, all_rows, cols), d.y(), fit_opts);
    fit.beta = Projection(cols, d.cols()).expand(fit.beta);
    betas.push_back(fit.beta);
    penalties.push_back(static_cast<int>(cols.size()));
    out.fits.push_back(std::move(fit));
  }
  const WeightCriterion crit(f, out.design, d.y(), std::move(betas), std::move(penalties), lambda_n);
  out.estimate = minimize_weights(crit, opt_opts);
  return out;
}

}  // namespace mcar
