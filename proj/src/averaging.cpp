// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mcar_avg/error.hpp"

namespace mcar {

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
  if (w_.size() < 1) throw Error(Errc::invalid_argument, "weight vector is empty");
  for (Index s = 0; s < w_.size(); ++s) {
    if (!(w_(s) >= 0.0 && w_(s) <= 1.0)) {
      throw Error(Errc::invalid_argument, "weight " + std::to_string(s + 1) + " outside [0, 1]");
    }
  }
  if (std::abs(w_.sum() - 1.0) > 1e-12) throw Error(Errc::invalid_argument, "weights do not sum to one");
}

WeightVector WeightVector::uniform(Index size) {
  if (size < 1) throw Error(Errc::invalid_argument, "weight vector is empty");
  return WeightVector(Vector::Constant(size, 1.0 / static_cast<double>(size)));
}

WeightVector WeightVector::unit(Index size, Index position) {
  if (position < 0 || position >= size) throw Error(Errc::invalid_argument, "unit weight position out of range");
  return WeightVector(Vector::Unit(size, position));
}

Vector project_to_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) shift = t;
  }
  return (v.array() - shift).cwiseMax(0.0).matrix();
}

WeightCriterion::WeightCriterion(GlmFamily family, Matrix design, Vector y, std::vector<Vector> betas,
                                 std::vector<int> penalties, double lambda)
    : family_(family),
      design_(std::move(design)),
      y_(std::move(y)),
      betas_(std::move(betas)),
      penalties_(std::move(penalties)),
      lambda_(lambda) {
  if (betas_.empty()) throw Error(Errc::invalid_argument, "criterion needs at least one candidate");
  if (penalties_.size() != betas_.size()) {
    throw Error(Errc::invalid_argument, "penalty vector length differs from candidate count");
  }
  if (y_.size() != design_.rows()) throw Error(Errc::invalid_argument, "y length differs from design rows");
  if (!std::isfinite(lambda_)) throw Error(Errc::invalid_argument, "lambda must be finite");
  fitted_.resize(design_.rows(), size());
  for (Index s = 0; s < size(); ++s) {
    const auto& b = betas_[static_cast<std::size_t>(s)];
    if (b.size() != design_.cols()) {
      throw Error(Errc::invalid_argument, "candidate " + std::to_string(s + 1) + " coefficient length is not K");
    }
    fitted_.col(s) = design_ * b;
  }
}

void WeightCriterion::check_weights(const Vector& w) const {
  if (w.size() != size()) {
    throw Error(Errc::invalid_argument, "weight vector has " + std::to_string(w.size()) + " entries for " +
                                            std::to_string(size()) + " candidates");
  }
}

Vector WeightCriterion::beta(const Vector& w) const {
  check_weights(w);
  Vector out = Vector::Zero(design_.cols());
  bool first = true;
  for (Index s = 0; s < size(); ++s) {
    if (w(s) == 0.0) continue;
    const auto& b = betas_[static_cast<std::size_t>(s)];
    if (first) {
      out = w(s) * b;
      first = false;
    } else {
      out += w(s) * b;
    }
  }
  return out;
}

Vector WeightCriterion::theta(const Vector& w) const { return design_ * beta(w); }

double WeightCriterion::value_at(const Vector& w, const Vector& theta) const {
  double b_sum = 0.0;
  for (Index i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta(i))) {
      throw Error(Errc::numeric, "non-finite linear predictor at row " + std::to_string(i + 1));
    }
    b_sum += family_.b(theta(i));
  }
  double penalty = 0.0;
  for (Index s = 0; s < size(); ++s) penalty += w(s) * penalties_[static_cast<std::size_t>(s)];
  return 2.0 / family_.phi() * b_sum - 2.0 / family_.phi() * y_.dot(theta) + lambda_ * penalty;
}

double WeightCriterion::value(const Vector& w) const { return value_at(w, theta(w)); }

double WeightCriterion::value_and_gradient(const Vector& w, Vector& grad) const {
  const Vector th = theta(w);
  const double v = value_at(w, th);
  Vector resid(th.size());
  for (Index i = 0; i < th.size(); ++i) resid(i) = family_.b_prime(th(i)) - y_(i);
  grad = (2.0 / family_.phi()) * (fitted_.transpose() * resid);
  for (Index s = 0; s < size(); ++s) grad(s) += lambda_ * penalties_[static_cast<std::size_t>(s)];
  return v;
}

Vector WeightCriterion::gradient(const Vector& w) const {
  Vector g;
  value_and_gradient(w, g);
  return g;
}

double min_directional_derivative(const WeightCriterion& crit, const Vector& w) {
  const Vector g = crit.gradient(w);
  return g.minCoeff() - g.dot(w);
}

namespace {

Vector clean_simplex_point(const Vector& w) {
  Vector out = w.cwiseMax(0.0);
  return out / out.sum();
}

}  // namespace

AveragedEstimate minimize_weights(const WeightCriterion& crit, const OptimizerOptions& opts) {
  const Index size = crit.size();
  Vector w = Vector::Constant(size, 1.0 / static_cast<double>(size));
  Vector g;
  double value = crit.value_and_gradient(w, g);

  // Reference values for the nonmonotone (max of recent values) Armijo test.
  constexpr std::size_t kMemory = 10;
  std::vector<double> recent{value};

  double step = 1.0 / std::max(1.0, g.cwiseAbs().maxCoeff());
  double pg_norm = (w - project_to_simplex(w - g)).norm();
  int iter = 0;
  for (; iter < opts.max_iterations && pg_norm > opts.tolerance; ++iter) {
    Vector direction = project_to_simplex(w - step * g) - w;
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      direction = project_to_simplex(w - g) - w;
      slope = g.dot(direction);
      if (!(slope < 0.0)) break;
    }

    const double reference = *std::max_element(recent.begin(), recent.end());
    // Below this change in value, differences are rounding noise and the
    // directional derivative decides acceptance instead.
    const double noise = 1e-12 * (1.0 + std::abs(value));
    double t = 1.0;
    Vector trial;
    Vector trial_grad;
    double trial_value = value;
    bool accepted = false;
    for (int h = 0; h < 60; ++h, t *= 0.5) {
      trial = w + t * direction;
      trial_value = crit.value_and_gradient(trial, trial_grad);
      if (trial_value <= reference + opts.armijo * t * slope) {
        accepted = true;
        break;
      }
      if (trial_value <= value + noise && trial_grad.dot(direction) <= -0.8 * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const Vector s = trial - w;
    if (s.lpNorm<Eigen::Infinity>() == 0.0) break;
    const Vector yk = trial_grad - g;
    const double sy = s.dot(yk);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-15, 1e15) : 1e15;

    w = std::move(trial);
    g = std::move(trial_grad);
    value = trial_value;
    if (recent.size() == kMemory) recent.erase(recent.begin());
    recent.push_back(value);
    pg_norm = (w - project_to_simplex(w - g)).norm();
  }

  AveragedEstimate est;
  const Vector clean = clean_simplex_point(w);
  est.weights = WeightVector(clean);
  est.beta = crit.beta(clean);
  est.theta = crit.design() * est.beta;
  Vector final_grad;
  est.criterion_value = crit.value_and_gradient(clean, final_grad);
  est.projected_gradient_norm = (clean - project_to_simplex(clean - final_grad)).norm();
  est.penalty_vector = crit.penalties();
  est.lambda_n = crit.lambda();
  est.iterations = iter;
  est.warning = est.projected_gradient_norm > opts.warn_tolerance;
  return est;
}

WeightCriterion make_criterion(const GlmFamily& f, std::span<const FittedCandidate> fits,
                               const ZeroFilledMatrix& xt, const Vector& y, double lambda_n) {
  std::vector<Vector> betas;
  std::vector<int> penalties;
  for (const auto& fit : fits) {
    betas.push_back(fit.beta_full);
    penalties.push_back(static_cast<int>(fit.candidate.k()));
  }
  return WeightCriterion(f, xt.xt(), y, std::move(betas), std::move(penalties), lambda_n);
}

double criterion(const GlmFamily& f, std::span<const FittedCandidate> fits, const ZeroFilledMatrix& xt,
                 const Vector& y, const WeightVector& w, double lambda_n) {
  return make_criterion(f, fits, xt, y, lambda_n).value(w.values());
}

Vector criterion_gradient(const GlmFamily& f, std::span<const FittedCandidate> fits,
                          const ZeroFilledMatrix& xt, const Vector& y, const WeightVector& w,
                          double lambda_n) {
  return make_criterion(f, fits, xt, y, lambda_n).gradient(w.values());
}

AveragedEstimate minimize_weights(const GlmFamily& f, std::span<const FittedCandidate> fits,
                                  const ZeroFilledMatrix& xt, const Vector& y, double lambda_n,
                                  const OptimizerOptions& opts) {
  return minimize_weights(make_criterion(f, fits, xt, y, lambda_n), opts);
}

Vector predict(const AveragedEstimate& est, const GlmFamily& f) {
  Vector mean(est.theta.size());
  for (Index i = 0; i < est.theta.size(); ++i) mean(i) = f.b_prime(est.theta(i));
  return mean;
}

}  // namespace mcar
