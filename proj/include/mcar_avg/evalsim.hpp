// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_EVALSIM_HPP
#define MCAR_AVG_EVALSIM_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "mcar_avg/averaging.hpp"
#include "mcar_avg/data.hpp"
#include "mcar_avg/glm.hpp"

namespace mcar {

/// Covariates the KL loss is evaluated on. Every method yields a
/// K-vector of coefficients; the loss compares design * beta against the
/// true canonical parameters.
enum class LossDesign {
  /// The estimators' covariates as generated, before masking.
  complete_covariates,
  /// Each method's own design: zero-filled for MOPT and CC, mean-imputed
  /// for MIM and MIMA.
  estimator_design,
};

std::string_view to_string(LossDesign d);

struct SimConfig {
  FamilyKind family = FamilyKind::bernoulli_logit;
  Index n = 100;
  double a = 0.0;  // a covariate is unobserved when its N(0,1) draw falls below a
  int replications = 1000;
  std::uint64_t seed = 20260101;
  Vector beta_true = (Vector(5) << 1.0, 0.2, -1.2, -1.0, 0.1).finished();
  double rho = 0.75;
  bool drop_last_covariate = true;
  /// 0-based columns subject to missingness, one independent draw each.
  IndexSet missing_columns = {2, 3};
  double lambda_n = kDefaultLambda;
  LossDesign loss_design = LossDesign::complete_covariates;
  /// 0 = hardware concurrency.
  int threads = 1;

  /// Throws Errc::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// True canonical parameters and means of the full (undropped) design.
struct Truth {
  Vector mu;
  Vector theta0;
};

struct Replication {
  ObservedDataset data;
  Truth truth;
  /// The estimators' covariates before masking; simulation diagnostics only.
  Matrix x_unmasked;
};

/// Generator for replication `rep`; depends only on (seed, rep).
std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t rep);

Replication generate_replication(const SimConfig& cfg, std::uint64_t rep);

/// 2/phi [B(theta_hat) - B(theta0)] - 2/phi mu'(theta_hat - theta0).
double kl_loss(const GlmFamily& f, const Vector& theta_hat, const Truth& truth);

enum class Method { mopt = 0, cc, mim, mima };
inline constexpr std::array<Method, 4> kAllMethods = {Method::mopt, Method::cc, Method::mim, Method::mima};
std::string_view to_string(Method m);

struct MethodSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  int count = 0;     // replications entering the summary
  int failures = 0;  // replications where the method could not be fitted
};

/// Mean, median and sample standard deviation of the finite entries.
MethodSummary summarize(const std::vector<double>& values);

struct SimResult {
  SimConfig config;
  /// Per method, KL/n for every replication; NaN marks a failed replication.
  std::array<std::vector<double>, 4> values;
  std::array<MethodSummary, 4> summaries;

  const std::vector<double>& values_of(Method m) const { return values[static_cast<std::size_t>(m)]; }
  const MethodSummary& summary_of(Method m) const { return summaries[static_cast<std::size_t>(m)]; }
};

/// KL/n of each method on one replication; NaN where a method fails.
std::array<double, 4> evaluate_replication(const SimConfig& cfg, const Replication& rep);

/// Runs every replication (in parallel when cfg.threads != 1) and
/// aggregates. Results do not depend on the thread count.
SimResult run_study(const SimConfig& cfg);

/// KL(w_hat) / min over a simplex grid of KL(w), for one criterion. KL(w)
/// is evaluated on the criterion's own design.
double optimality_ratio(const WeightCriterion& crit, const Truth& truth, double grid_resolution);

struct RatioExperiment {
  std::vector<double> ratios;  // successful replications, in replication order
  std::vector<int> candidate_counts;
  int failures = 0;
};

RatioExperiment optimality_ratio_experiment(const SimConfig& cfg, double grid_resolution);

/// Calls visit(w) for every simplex point with coordinates in multiples
/// of 1/steps.
template <class Visitor>
void for_each_simplex_grid_point(Index size, int steps, Visitor&& visit) {
  Vector w(size);
  std::vector<int> counts(static_cast<std::size_t>(size), 0);
  auto recurse = [&](auto&& self, Index pos, int remaining) -> void {
    if (pos == size - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      for (Index s = 0; s < size; ++s) w(s) = counts[static_cast<std::size_t>(s)] / static_cast<double>(steps);
      visit(static_cast<const Vector&>(w));
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, steps);
}

}  // namespace mcar

#endif  // MCAR_AVG_EVALSIM_HPP
