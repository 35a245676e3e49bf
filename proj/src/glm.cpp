// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcar_avg/error.hpp"

namespace mcar {

namespace {

void require_finite(double theta) {
  if (!std::isfinite(theta)) throw Error(Errc::numeric, "non-finite linear predictor");
}

}  // namespace

GlmFamily GlmFamily::gaussian(double phi) {
  if (!(phi > 0.0) || !std::isfinite(phi)) throw Error(Errc::invalid_argument, "dispersion must be positive");
  return GlmFamily(FamilyKind::gaussian_identity, phi);
}

GlmFamily GlmFamily::from_name(std::string_view name) {
  if (name == "bernoulli-logit" || name == "bernoulli" || name == "binomial" || name == "logistic") {
    return bernoulli();
  }
  if (name == "poisson-log" || name == "poisson") return poisson();
  if (name == "gaussian-identity" || name == "gaussian") return gaussian();
  throw Error(Errc::invalid_argument, "unknown family '" + std::string(name) + "'");
}

std::string_view GlmFamily::name() const noexcept {
  switch (kind_) {
    case FamilyKind::bernoulli_logit:
      return "bernoulli-logit";
    case FamilyKind::poisson_log:
      return "poisson-log";
    case FamilyKind::gaussian_identity:
      return "gaussian-identity";
  }
  return "?";
}

double GlmFamily::b(double theta) const {
  require_finite(theta);
  switch (kind_) {
    case FamilyKind::bernoulli_logit:
      return std::max(theta, 0.0) + std::log1p(std::exp(-std::abs(theta)));
    case FamilyKind::poisson_log:
      return std::exp(theta);
    case FamilyKind::gaussian_identity:
      return 0.5 * theta * theta;
  }
  return 0.0;
}

double GlmFamily::b_prime(double theta) const {
  require_finite(theta);
  switch (kind_) {
    case FamilyKind::bernoulli_logit:
      if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
      return std::exp(theta) / (1.0 + std::exp(theta));
    case FamilyKind::poisson_log:
      return std::exp(theta);
    case FamilyKind::gaussian_identity:
      return theta;
  }
  return 0.0;
}

double GlmFamily::b_double_prime(double theta) const {
  require_finite(theta);
  switch (kind_) {
    case FamilyKind::bernoulli_logit: {
      const double e = std::exp(-std::abs(theta));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case FamilyKind::poisson_log:
      return std::exp(theta);
    case FamilyKind::gaussian_identity:
      return 1.0;
  }
  return 0.0;
}

double GlmFamily::cumulant_sum(const Vector& theta) const {
  double s = 0.0;
  for (Index i = 0; i < theta.size(); ++i) s += b(theta(i));
  return s;
}

double log_likelihood_kernel(const GlmFamily& f, const Vector& y, const Vector& theta) {
  if (y.size() != theta.size()) throw Error(Errc::invalid_argument, "kernel: y and theta differ in length");
  double s = 0.0;
  for (Index i = 0; i < y.size(); ++i) s += y(i) * theta(i) - f.b(theta(i));
  return s / f.phi();
}

Vector glm_score(const GlmFamily& f, const Matrix& x, const Vector& y, const Vector& beta) {
  const Vector theta = x * beta;
  Vector resid(theta.size());
  for (Index i = 0; i < theta.size(); ++i) resid(i) = y(i) - f.b_prime(theta(i));
  return x.transpose() * resid;
}

Matrix glm_information(const GlmFamily& f, const Matrix& x, const Vector& beta) {
  const Vector theta = x * beta;
  Vector v(theta.size());
  for (Index i = 0; i < theta.size(); ++i) v(i) = f.b_double_prime(theta(i));
  return x.transpose() * v.asDiagonal() * x;
}

MleFit fit_glm(const GlmFamily& f, const Matrix& x, const Vector& y, const FitOptions& opts) {
  constexpr double kernel_noise = 1e-13;
  const Index k = x.cols();
  MleFit fit;
  fit.beta = Vector::Zero(k);

  double kernel = log_likelihood_kernel(f, y, x * fit.beta);
  Vector score = glm_score(f, x, y, fit.beta);
  fit.max_abs_score = score.cwiseAbs().maxCoeff();

  bool polished = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // One extra Newton step once the tolerance is met; quadratic
    // convergence takes the coefficients to rounding level.
    if (fit.max_abs_score <= opts.score_tolerance) {
      if (polished || fit.max_abs_score == 0.0) break;
      polished = true;
    }

    Matrix info = glm_information(f, x, fit.beta);
    Eigen::LLT<Matrix> llt(info);
    if (llt.info() != Eigen::Success || llt.rcond() < std::numeric_limits<double>::epsilon()) {
      const double ridge = opts.ridge_factor * info.trace() / static_cast<double>(k);
      info.diagonal().array() += ridge;
      llt.compute(info);
      if (llt.info() != Eigen::Success) break;
    }
    const Vector step = llt.solve(score);

    // Halve until the kernel does not decrease.
    double t = 1.0;
    Vector candidate;
    double candidate_kernel = kernel;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      candidate = fit.beta + t * step;
      const Vector theta = x * candidate;
      if (!theta.allFinite()) continue;
      candidate_kernel = log_likelihood_kernel(f, y, theta);
      if (!std::isfinite(candidate_kernel)) continue;
      // differences below kernel_noise are rounding, not a decrease
      if (candidate_kernel >= kernel - kernel_noise * std::max(1.0, std::abs(kernel))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    fit.iterations = iter + 1;
    const bool capped = candidate.cwiseAbs().maxCoeff() > opts.coefficient_cap;
    if (capped) {
      fit.beta = candidate.cwiseMax(-opts.coefficient_cap).cwiseMin(opts.coefficient_cap);
      fit.max_abs_score = glm_score(f, x, y, fit.beta).cwiseAbs().maxCoeff();
      fit.converged = false;
      return fit;
    }

    const double change = std::abs(candidate_kernel - kernel);
    const double previous_score = fit.max_abs_score;
    fit.beta = candidate;
    kernel = candidate_kernel;
    score = glm_score(f, x, y, fit.beta);
    fit.max_abs_score = score.cwiseAbs().maxCoeff();
    // kernel stalled and the score no longer improves
    if (change <= opts.relative_tolerance * std::max(1.0, std::abs(kernel)) && fit.max_abs_score >= previous_score) {
      break;
    }
  }

  fit.converged = fit.max_abs_score <= opts.score_tolerance;
  return fit;
}

FittedCandidate fit_mle(const GlmFamily& f, const CandidateModel& c, const ObservedDataset& d,
                        const FitOptions& opts) {
  const Matrix xs = submatrix(d.x(), c.rows, c.columns);
  const Vector ys = subvector(d.y(), c.rows);
  MleFit mle = fit_glm(f, xs, ys, opts);

  FittedCandidate out;
  out.candidate = c;
  out.beta_full = Projection(c.columns, d.cols()).expand(mle.beta);
  out.beta_sub = std::move(mle.beta);
  out.converged = mle.converged;
  out.iterations = mle.iterations;
  out.max_abs_score = mle.max_abs_score;
  return out;
}

std::vector<FittedCandidate> fit_candidates(const GlmFamily& f, const std::vector<CandidateModel>& cs,
                                            const ObservedDataset& d, const FitOptions& opts) {
  std::vector<FittedCandidate> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(fit_mle(f, c, d, opts));
  return out;
}

}  // namespace mcar
