// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_GLM_HPP
#define MCAR_AVG_GLM_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mcar_avg/data.hpp"
#include "mcar_avg/patterns.hpp"

namespace mcar {

enum class FamilyKind { bernoulli_logit, poisson_log, gaussian_identity };

// Canonical-link exponential family with cumulant function b and known
// dispersion phi. b' is the mean map and b'' the variance function.
class GlmFamily {
 public:
  static GlmFamily bernoulli() { return GlmFamily(FamilyKind::bernoulli_logit, 1.0); }
  static GlmFamily poisson() { return GlmFamily(FamilyKind::poisson_log, 1.0); }
  static GlmFamily gaussian(double phi = 1.0);

  /// Accepts the canonical names ("bernoulli-logit", ...) and the short
  /// forms "bernoulli", "binomial", "logistic", "poisson", "gaussian".
  static GlmFamily from_name(std::string_view name);

  FamilyKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  double phi() const noexcept { return phi_; }

  // All three throw Errc::numeric on non-finite theta.
  double b(double theta) const;
  double b_prime(double theta) const;
  double b_double_prime(double theta) const;

  /// Sum of b over a linear predictor.
  double cumulant_sum(const Vector& theta) const;

 private:
  GlmFamily(FamilyKind kind, double phi) : kind_(kind), phi_(phi) {}

  FamilyKind kind_;
  double phi_;
};

/// phi^-1 * sum_i [y_i theta_i - b(theta_i)]; the terms of the
/// log-likelihood that depend on the coefficients.
double log_likelihood_kernel(const GlmFamily& f, const Vector& y, const Vector& theta);

/// sum_i [y_i - b'(x_i' beta)] x_i
Vector glm_score(const GlmFamily& f, const Matrix& x, const Vector& y, const Vector& beta);
/// sum_i b''(x_i' beta) x_i x_i', the negative derivative of the score.
Matrix glm_information(const GlmFamily& f, const Matrix& x, const Vector& beta);

struct FitOptions {
  double score_tolerance = 1e-8;
  double relative_tolerance = 1e-12;
  int max_iterations = 100;
  double coefficient_cap = 1e4;
  double ridge_factor = 1e-10;
  int max_halvings = 60;
};

struct MleFit {
  Vector beta;
  bool converged = false;
  int iterations = 0;
  double max_abs_score = 0.0;
};

/// Newton-Raphson from zero with step halving on the likelihood kernel.
/// Never throws on non-convergence; the last iterate is returned with
/// `converged == false`.
MleFit fit_glm(const GlmFamily& f, const Matrix& x, const Vector& y, const FitOptions& opts = {});

struct FittedCandidate {
  CandidateModel candidate;
  Vector beta_sub;   // length k_s
  Vector beta_full;  // length K, zero outside the candidate's columns
  bool converged = false;
  int iterations = 0;
  double max_abs_score = 0.0;
};

FittedCandidate fit_mle(const GlmFamily& f, const CandidateModel& c, const ObservedDataset& d,
                        const FitOptions& opts = {});

std::vector<FittedCandidate> fit_candidates(const GlmFamily& f, const std::vector<CandidateModel>& cs,
                                            const ObservedDataset& d, const FitOptions& opts = {});

}  // namespace mcar

#endif  // MCAR_AVG_GLM_HPP
