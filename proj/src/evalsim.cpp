// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/evalsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "mcar_avg/baselines.hpp"
#include "mcar_avg/error.hpp"
#include "mcar_avg/pipeline.hpp"

namespace mcar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Index kept_columns(const SimConfig& cfg) {
  return cfg.beta_true.size() - (cfg.drop_last_covariate ? 1 : 0);
}

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown after all workers join.
template <class Body>
void parallel_for(int threads, std::size_t count, Body&& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

GlmFamily family_of(const SimConfig& cfg) {
  switch (cfg.family) {
    case FamilyKind::bernoulli_logit:
      return GlmFamily::bernoulli();
    case FamilyKind::poisson_log:
      return GlmFamily::poisson();
    case FamilyKind::gaussian_identity:
      return GlmFamily::gaussian();
  }
  throw Error(Errc::internal, "unknown family");
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw Error(Errc::invalid_argument, "n must be positive");
  if (replications < 1) throw Error(Errc::invalid_argument, "replications must be at least 1");
  if (!(rho > -1.0 && rho < 1.0)) throw Error(Errc::invalid_argument, "correlation must lie in (-1, 1)");
  if (beta_true.size() < 1 || !beta_true.allFinite()) {
    throw Error(Errc::invalid_argument, "true coefficients must be finite and nonempty");
  }
  if (kept_columns(*this) < 1) throw Error(Errc::invalid_argument, "no covariates left after dropping the last");
  for (const Index c : missing_columns) {
    if (c < 0 || c >= kept_columns(*this)) {
      throw Error(Errc::invalid_argument, "missing column index " + std::to_string(c) + " out of range");
    }
  }
  if (!std::isfinite(lambda_n)) throw Error(Errc::invalid_argument, "lambda must be finite");
  if (threads < 0) throw Error(Errc::invalid_argument, "threads must be nonnegative");
}

std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  return std::mt19937_64(seq);
}

Replication generate_replication(const SimConfig& cfg, std::uint64_t rep) {
  const GlmFamily f = family_of(cfg);
  const Index n = cfg.n;
  const Index p = cfg.beta_true.size();
  auto engine = replication_engine(cfg.seed, rep);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix corr = Matrix::Constant(p, p, cfg.rho);
  corr.diagonal().setOnes();
  const Matrix chol = corr.llt().matrixL();

  Matrix x_full(n, p);
  Vector z(p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z(j) = normal(engine);
    x_full.row(i) = (chol * z).transpose();
  }

  Truth truth;
  truth.theta0 = x_full * cfg.beta_true;
  truth.mu.resize(n);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double mu = f.b_prime(truth.theta0(i));
    truth.mu(i) = mu;
    switch (cfg.family) {
      case FamilyKind::bernoulli_logit:
        y(i) = std::bernoulli_distribution(mu)(engine) ? 1.0 : 0.0;
        break;
      case FamilyKind::poisson_log:
        y(i) = static_cast<double>(std::poisson_distribution<long>(mu)(engine));
        break;
      case FamilyKind::gaussian_identity:
        y(i) = mu + std::sqrt(f.phi()) * normal(engine);
        break;
    }
  }

  const Index k = kept_columns(cfg);
  Matrix x = x_full.leftCols(k);
  Mask mask = Mask::Constant(n, k, true);
  for (Index i = 0; i < n; ++i) {
    for (const Index c : cfg.missing_columns) {
      if (normal(engine) < cfg.a) mask(i, c) = false;
    }
  }
  Matrix masked = mask.select(x.array(), kNaN).matrix();
  return Replication{ObservedDataset(std::move(y), std::move(masked), std::move(mask)), std::move(truth),
                     std::move(x)};
}

double kl_loss(const GlmFamily& f, const Vector& theta_hat, const Truth& truth) {
  if (theta_hat.size() != truth.theta0.size() || truth.mu.size() != truth.theta0.size()) {
    throw Error(Errc::invalid_argument, "kl_loss: length mismatch");
  }
  const double b_hat = f.cumulant_sum(theta_hat);
  const double b_true = f.cumulant_sum(truth.theta0);
  return 2.0 / f.phi() * (b_hat - b_true) - 2.0 / f.phi() * truth.mu.dot(theta_hat - truth.theta0);
}

std::string_view to_string(LossDesign d) {
  return d == LossDesign::complete_covariates ? "complete-covariates" : "estimator-design";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::mopt:
      return "MOPT";
    case Method::cc:
      return "CC";
    case Method::mim:
      return "MIM";
    case Method::mima:
      return "MIMA";
  }
  return "?";
}

MethodSummary summarize(const std::vector<double>& values) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (const double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  MethodSummary s;
  s.count = static_cast<int>(finite.size());
  s.failures = static_cast<int>(values.size() - finite.size());
  if (finite.empty()) {
    s.mean = s.median = s.sd = kNaN;
    return s;
  }
  double sum = 0.0;
  for (const double v : finite) sum += v;
  s.mean = sum / static_cast<double>(finite.size());
  double ss = 0.0;
  for (const double v : finite) ss += (v - s.mean) * (v - s.mean);
  s.sd = finite.size() > 1 ? std::sqrt(ss / static_cast<double>(finite.size() - 1)) : 0.0;
  std::sort(finite.begin(), finite.end());
  const std::size_t mid = finite.size() / 2;
  s.median = finite.size() % 2 == 1 ? finite[mid] : 0.5 * (finite[mid - 1] + finite[mid]);
  return s;
}

std::array<double, 4> evaluate_replication(const SimConfig& cfg, const Replication& rep) {
  const GlmFamily f = family_of(cfg);
  const ObservedDataset& d = rep.data;
  const double n = static_cast<double>(d.rows());
  const bool complete = cfg.loss_design == LossDesign::complete_covariates;
  std::array<double, 4> out{kNaN, kNaN, kNaN, kNaN};

  auto attempt = [&](Method m, auto&& theta_of) {
    try {
      const Vector theta = theta_of();
      out[static_cast<std::size_t>(m)] = kl_loss(f, theta, rep.truth) / n;
    } catch (const Error&) {
      // recorded as a failure (NaN)
    }
  };

  attempt(Method::mopt, [&] {
    const AveragedEstimate est = fit_model_average(f, d, cfg.lambda_n).estimate;
    return complete ? Vector(rep.x_unmasked * est.beta) : est.theta;
  });
  attempt(Method::cc, [&] {
    const FittedCandidate cc = fit_cc(f, d);
    return Vector((complete ? rep.x_unmasked : zero_fill(d).xt()) * cc.beta_full);
  });
  attempt(Method::mim, [&] {
    const MleFit mim = fit_mim(f, d);
    return Vector((complete ? rep.x_unmasked : mean_impute(d).x_imputed) * mim.beta);
  });
  attempt(Method::mima, [&] {
    const AveragedEstimate est = fit_mima(f, d, cfg.lambda_n).estimate;
    return complete ? Vector(rep.x_unmasked * est.beta) : est.theta;
  });
  return out;
}

SimResult run_study(const SimConfig& cfg) {
  cfg.validate();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  SimResult result;
  result.config = cfg;
  for (auto& v : result.values) v.assign(reps, kNaN);

  parallel_for(cfg.threads, reps, [&](std::size_t r) {
    const Replication rep = generate_replication(cfg, r);
    const auto kl = evaluate_replication(cfg, rep);
    for (std::size_t m = 0; m < kl.size(); ++m) result.values[m][r] = kl[m];
  });

  for (std::size_t m = 0; m < result.values.size(); ++m) result.summaries[m] = summarize(result.values[m]);
  return result;
}

double optimality_ratio(const WeightCriterion& crit, const Truth& truth, double grid_resolution) {
  if (!(grid_resolution > 0.0 && grid_resolution <= 1.0)) {
    throw Error(Errc::invalid_argument, "grid resolution must lie in (0, 1]");
  }
  const GlmFamily& f = crit.family();
  const AveragedEstimate est = minimize_weights(crit);
  const double at_optimizer = kl_loss(f, est.theta, truth);
  if (crit.size() == 1) return 1.0;

  const int steps = static_cast<int>(std::lround(1.0 / grid_resolution));
  // Number of grid points is C(steps + S - 1, S - 1).
  double points = 1.0;
  for (Index j = 1; j < crit.size(); ++j) points = points * static_cast<double>(steps + j) / static_cast<double>(j);
  if (points > 2e7) {
    throw Error(Errc::invalid_argument, "simplex grid too large for " + std::to_string(crit.size()) + " candidates");
  }
  double best = std::numeric_limits<double>::infinity();
  for_each_simplex_grid_point(crit.size(), steps, [&](const Vector& w) {
    best = std::min(best, kl_loss(f, crit.theta(w), truth));
  });
  return at_optimizer / best;
}

RatioExperiment optimality_ratio_experiment(const SimConfig& cfg, double grid_resolution) {
  cfg.validate();
  const GlmFamily f = family_of(cfg);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<double> ratios(reps, kNaN);
  std::vector<int> sizes(reps, 0);

  parallel_for(cfg.threads, reps, [&](std::size_t r) {
    const Replication rep = generate_replication(cfg, r);
    try {
      const auto candidates = build_candidates(rep.data);
      const auto fits = fit_candidates(f, candidates, rep.data);
      const WeightCriterion crit = make_criterion(f, fits, zero_fill(rep.data), rep.data.y(), cfg.lambda_n);
      sizes[r] = static_cast<int>(crit.size());
      ratios[r] = optimality_ratio(crit, rep.truth, grid_resolution);
    } catch (const Error& e) {
      if (e.code() == Errc::invalid_argument) throw;
    }
  });

  RatioExperiment out;
  for (std::size_t r = 0; r < reps; ++r) {
    if (std::isfinite(ratios[r])) {
      out.ratios.push_back(ratios[r]);
      out.candidate_counts.push_back(sizes[r]);
    } else {
      ++out.failures;
    }
  }
  return out;
}

}  // namespace mcar
