// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_AVERAGING_HPP
#define MCAR_AVG_AVERAGING_HPP

#include <span>
#include <vector>

#include "mcar_avg/data.hpp"
#include "mcar_avg/glm.hpp"

namespace mcar {

inline constexpr double kDefaultLambda = 2.0;

/// A point of the probability simplex: entries in [0, 1] summing to one.
class WeightVector {
 public:
  /// Throws Errc::invalid_argument unless every entry is in [0, 1] and
  /// the entries sum to one within 1e-12.
  explicit WeightVector(Vector w);

  static WeightVector uniform(Index size);
  static WeightVector unit(Index size, Index position);

  const Vector& values() const noexcept { return w_; }
  Index size() const noexcept { return w_.size(); }
  double operator[](Index s) const { return w_(s); }

 private:
  Vector w_;
};

/// Euclidean projection onto the probability simplex (sort-based).
Vector project_to_simplex(const Vector& v);

// Penalized likelihood weight-choice criterion
//   G(w) = 2/phi * sum_i b(theta_i(w)) - 2/phi * y' theta(w) + lambda * w'k,
// with theta(w) = design * sum_s w_s beta_s. The design is the zero-filled
// covariate matrix for model averaging over missingness patterns and the
// mean-imputed matrix for the all-subsets baseline.
class WeightCriterion {
 public:
  WeightCriterion(GlmFamily family, Matrix design, Vector y, std::vector<Vector> betas,
                  std::vector<int> penalties, double lambda);

  Index size() const noexcept { return static_cast<Index>(betas_.size()); }
  const GlmFamily& family() const noexcept { return family_; }
  const Matrix& design() const noexcept { return design_; }
  const std::vector<int>& penalties() const noexcept { return penalties_; }
  double lambda() const noexcept { return lambda_; }

  /// sum_s w_s beta_s
  Vector beta(const Vector& w) const;
  /// design * beta(w)
  Vector theta(const Vector& w) const;

  double value(const Vector& w) const;
  Vector gradient(const Vector& w) const;
  /// The value at w together with its gradient, sharing theta(w).
  double value_and_gradient(const Vector& w, Vector& grad) const;

 private:
  void check_weights(const Vector& w) const;
  double value_at(const Vector& w, const Vector& theta) const;

  GlmFamily family_;
  Matrix design_;
  Vector y_;
  std::vector<Vector> betas_;
  std::vector<int> penalties_;
  double lambda_;
  Matrix fitted_;  // column s is design * beta_s
};

struct OptimizerOptions {
  double tolerance = 1e-8;      // projected-gradient norm at termination
  double warn_tolerance = 1e-6; // above this after the loop, flag a warning
  int max_iterations = 10000;
  double armijo = 1e-4;
};

struct AveragedEstimate {
  WeightVector weights = WeightVector::uniform(1);
  Vector beta;
  Vector theta;
  double criterion_value = 0.0;
  std::vector<int> penalty_vector;
  double lambda_n = kDefaultLambda;
  int iterations = 0;
  double projected_gradient_norm = 0.0;
  /// Set when the optimizer stopped with projected-gradient norm above
  /// OptimizerOptions::warn_tolerance.
  bool warning = false;
};

/// Projected gradient descent over the simplex from uniform weights, with
/// Barzilai-Borwein trial steps and Armijo backtracking along the feasible
/// direction.
AveragedEstimate minimize_weights(const WeightCriterion& crit, const OptimizerOptions& opts = {});

/// min over simplex vertices e_j of the directional derivative toward e_j;
/// nonnegative (up to rounding) exactly at a minimizer of a convex criterion.
double min_directional_derivative(const WeightCriterion& crit, const Vector& w);

WeightCriterion make_criterion(const GlmFamily& f, std::span<const FittedCandidate> fits,
                               const ZeroFilledMatrix& xt, const Vector& y, double lambda_n = kDefaultLambda);

double criterion(const GlmFamily& f, std::span<const FittedCandidate> fits, const ZeroFilledMatrix& xt,
                 const Vector& y, const WeightVector& w, double lambda_n = kDefaultLambda);

Vector criterion_gradient(const GlmFamily& f, std::span<const FittedCandidate> fits,
                          const ZeroFilledMatrix& xt, const Vector& y, const WeightVector& w,
                          double lambda_n = kDefaultLambda);

AveragedEstimate minimize_weights(const GlmFamily& f, std::span<const FittedCandidate> fits,
                                  const ZeroFilledMatrix& xt, const Vector& y,
                                  double lambda_n = kDefaultLambda, const OptimizerOptions& opts = {});

/// Elementwise b' of the averaged linear predictor.
Vector predict(const AveragedEstimate& est, const GlmFamily& f);

}  // namespace mcar

#endif  // MCAR_AVG_AVERAGING_HPP
