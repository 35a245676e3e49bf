// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <random>

#include "fixtures.hpp"
#include "mcar_avg/averaging.hpp"
#include "mcar_avg/baselines.hpp"
#include "mcar_avg/error.hpp"
#include "mcar_avg/pipeline.hpp"
#include "oracles.hpp"

using namespace mcar;

namespace {

// Random criterion with S candidates whose coefficients are perturbations
// of a common vector, so theta(w) stays moderate.
WeightCriterion random_criterion(std::mt19937_64& rng, const GlmFamily& f, Index n, Index k, Index s) {
  const Matrix x = oracle::random_normal(n, k, rng);
  const Vector truth = oracle::random_normal(k, 1, rng).col(0) * 0.5;
  Vector y(n);
  std::uniform_real_distribution<double> u(0, 1);
  for (Index i = 0; i < n; ++i) {
    const double mu = f.b_prime(x.row(i).dot(truth));
    if (f.kind() == FamilyKind::bernoulli_logit) {
      y(i) = u(rng) < mu ? 1 : 0;
    } else if (f.kind() == FamilyKind::poisson_log) {
      y(i) = std::poisson_distribution<int>(mu)(rng);
    } else {
      y(i) = mu + std::normal_distribution<double>()(rng);
    }
  }
  std::vector<Vector> betas;
  std::vector<int> pen;
  for (Index c = 0; c < s; ++c) {
    Vector b = truth + oracle::random_normal(k, 1, rng).col(0) * 0.4;
    const int keep = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    for (Index j = keep; j < k; ++j) b(j) = 0.0;
    betas.push_back(b);
    pen.push_back(keep);
  }
  return WeightCriterion(f, x, y, betas, pen, 2.0);
}

Vector random_simplex_point(std::mt19937_64& rng, Index s) {
  std::exponential_distribution<double> e(1.0);
  Vector w(s);
  for (Index j = 0; j < s; ++j) w(j) = e(rng);
  return w / w.sum();
}

}  // namespace

TEST_CASE("simplex projection is feasible and satisfies the variational inequality") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Index s = 1 + static_cast<Index>(rng() % 7);
    const Vector v = oracle::random_normal(s, 1, rng).col(0) * 3.0;
    const Vector p = project_to_simplex(v);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    for (int q = 0; q < 20; ++q) {
      const Vector z = random_simplex_point(rng, s);
      CHECK((v - p).dot(z - p) <= 1e-12);
    }
  }
  Vector inside(3);
  inside << 0.2, 0.3, 0.5;
  CHECK((project_to_simplex(inside) - inside).norm() < 1e-15);
}

TEST_CASE("weight vectors must lie on the simplex") {
  Vector bad(2);
  bad << 0.7, 0.4;
  CHECK_THROWS_AS(WeightVector{bad}, Error);
  bad << 1.2, -0.2;
  CHECK_THROWS_AS(WeightVector{bad}, Error);
  CHECK(WeightVector::uniform(4)[2] == 0.25);
  CHECK(WeightVector::unit(3, 1)[1] == 1.0);
}

TEST_CASE("criterion at a unit weight collapses to the single-candidate value") {
  const auto d = fixtures::block_example();
  const auto f = GlmFamily::bernoulli();
  const auto fits = fit_candidates(f, build_candidates(d), d);
  const auto xt = zero_fill(d);
  for (std::size_t s = 0; s < fits.size(); ++s) {
    const auto w = WeightVector::unit(static_cast<Index>(fits.size()), static_cast<Index>(s));
    const Vector theta = xt.xt() * fits[s].beta_full;
    const double expected = -2.0 * log_likelihood_kernel(f, d.y(), theta) + 2.0 * fits[s].candidate.k();
    CHECK(criterion(f, fits, xt, d.y(), w) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("criterion on a fixed 6x2 bernoulli instance matches direct evaluation") {
  Matrix x(6, 2);
  x << 1.0, 0.3, 1.0, -1.2, 1.0, 0.8, 1.0, 2.0, 1.0, -0.4, 1.0, 0.1;
  Vector y(6);
  y << 1, 0, 1, 1, 0, 0;
  std::vector<Vector> betas = {(Vector(2) << 0.2, 0.0).finished(), (Vector(2) << -0.1, 0.9).finished()};
  const std::vector<int> k = {1, 2};
  const WeightCriterion crit(GlmFamily::bernoulli(), x, y, betas, k, 2.0);
  const Vector w = Vector::Constant(2, 0.5);
  const long double ref = oracle::criterion(GlmFamily::bernoulli(), x, y, betas, k, w, 2.0);
  CHECK(crit.value(w) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
}

TEST_CASE("gaussian family with zero coefficients leaves only the penalty") {
  std::mt19937_64 rng(3);
  const Matrix x = oracle::random_normal(10, 3, rng);
  const Vector y = oracle::random_normal(10, 1, rng).col(0);
  const std::vector<int> k = {1, 3, 2};
  const WeightCriterion crit(GlmFamily::gaussian(), x, y, {Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)}, k, 2.0);
  const Vector w = random_simplex_point(rng, 3);
  CHECK(crit.value(w) == doctest::Approx(2.0 * (w(0) * 1 + w(1) * 3 + w(2) * 2)));
  const Vector g = crit.gradient(w);
  CHECK(g(0) == doctest::Approx(2.0));
  CHECK(g(1) == doctest::Approx(6.0));
  CHECK(g(2) == doctest::Approx(4.0));
}

TEST_CASE("criterion values agree with the long-double oracle on random instances") {
  std::mt19937_64 rng(5);
  for (const auto& f : {GlmFamily::bernoulli(), GlmFamily::poisson(), GlmFamily::gaussian(0.7)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 15 + static_cast<Index>(rng() % 20);
      const Index k = 1 + static_cast<Index>(rng() % 4);
      const Index s = 1 + static_cast<Index>(rng() % 5);
      const Matrix x = oracle::random_normal(n, k, rng);
      Vector y(n);
      for (Index i = 0; i < n; ++i) y(i) = static_cast<double>(rng() % 2);
      std::vector<Vector> betas;
      std::vector<int> pen;
      for (Index c = 0; c < s; ++c) {
        betas.push_back(oracle::random_normal(k, 1, rng).col(0) * 0.5);
        pen.push_back(static_cast<int>(c) + 1);
      }
      const WeightCriterion crit(f, x, y, betas, pen, 2.0);
      const Vector w = random_simplex_point(rng, s);
      const long double ref = oracle::criterion(f, x, y, betas, pen, w, 2.0);
      CHECK(crit.value(w) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-11));
    }
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(8);
  for (const auto& f : {GlmFamily::bernoulli(), GlmFamily::poisson()}) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto crit = random_criterion(rng, f, 40, 3, 3);
      const Vector w = random_simplex_point(rng, 3);
      const Vector g = crit.gradient(w);
      Vector fd(3);
      for (Index s = 0; s < 3; ++s) {
        fd(s) = oracle::central_difference([&](const Vector& v) { return crit.value(v); }, w, s, 1e-6);
      }
      CHECK((g - fd).norm() / g.norm() <= 1e-6);
    }
  }
}

TEST_CASE("identical candidates with equal penalties have equal gradient components") {
  std::mt19937_64 rng(9);
  const Matrix x = oracle::random_normal(20, 2, rng);
  Vector y(20);
  for (Index i = 0; i < 20; ++i) y(i) = static_cast<double>(i % 2);
  const Vector b = (Vector(2) << 0.3, -0.2).finished();
  const WeightCriterion crit(GlmFamily::bernoulli(), x, y, {b, b, b}, {2, 2, 2}, 2.0);
  const Vector g = crit.gradient(random_simplex_point(rng, 3));
  CHECK(g(0) == g(1));
  CHECK(g(1) == g(2));

  const auto single = WeightCriterion(GlmFamily::bernoulli(), x, y, {b}, {2}, 2.0);
  const auto est = minimize_weights(crit);
  CHECK(est.weights.values().isApprox(Vector::Constant(3, 1.0 / 3.0)));
  CHECK(est.criterion_value == doctest::Approx(single.value(Vector::Ones(1))).epsilon(1e-13));
}

TEST_CASE("single candidate returns w = (1)") {
  std::mt19937_64 rng(10);
  const auto crit = random_criterion(rng, GlmFamily::bernoulli(), 25, 2, 1);
  const auto est = minimize_weights(crit);
  REQUIRE(est.weights.size() == 1);
  CHECK(est.weights[0] == 1.0);
  CHECK(est.criterion_value == crit.value(Vector::Ones(1)));
}

TEST_CASE("optimizer reaches the simplex-grid minimum with a KKT certificate (S=3)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = trial % 2 ? GlmFamily::poisson() : GlmFamily::bernoulli();
    const auto crit = random_criterion(rng, f, 50, 3, 3);
    const auto est = minimize_weights(crit);
    const auto [grid_min, arg] = oracle::simplex_grid_min(3, 50, [&](const Vector& w) { return crit.value(w); });
    CHECK(est.criterion_value <= grid_min + 1e-4 * std::abs(grid_min));
    CHECK(min_directional_derivative(crit, est.weights.values()) >= -1e-6);
    CHECK(est.weights.values().minCoeff() >= 0.0);
    CHECK(std::abs(est.weights.values().sum() - 1.0) <= 1e-12);
    CHECK_FALSE(est.warning);
    for (Index s = 0; s < 3; ++s) CHECK(est.criterion_value <= crit.value(Vector::Unit(3, s)) + 1e-9);
  }
}

TEST_CASE("criterion is midpoint convex on the simplex (property)") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = trial % 3 == 0 ? GlmFamily::poisson() : GlmFamily::bernoulli();
    const auto crit = random_criterion(rng, f, 30, 3, 4);
    const Vector w1 = random_simplex_point(rng, 4);
    const Vector w2 = random_simplex_point(rng, 4);
    CHECK(crit.value(0.5 * (w1 + w2)) <= 0.5 * (crit.value(w1) + crit.value(w2)) + 1e-9);
  }
}

TEST_CASE("unit weight on the CC model reproduces the CC coefficients bit for bit") {
  const auto d = fixtures::block_example();
  const auto f = GlmFamily::bernoulli();
  const auto fits = fit_candidates(f, build_candidates(d), d);
  const auto crit = make_criterion(f, fits, zero_fill(d), d.y());
  const Vector b = crit.beta(Vector::Unit(static_cast<Index>(fits.size()), 0));
  const auto cc = fit_cc(f, d);
  REQUIRE(b.size() == cc.beta_full.size());
  CHECK(std::memcmp(b.data(), cc.beta_full.data(), sizeof(double) * static_cast<std::size_t>(b.size())) == 0);
}

TEST_CASE("averaged estimate invariants on the block example") {
  const auto d = fixtures::block_example(false, 99);
  const auto f = GlmFamily::bernoulli();
  const auto ma = fit_model_average(f, d);
  const auto& est = ma.estimate;
  Vector beta = Vector::Zero(d.cols());
  for (std::size_t s = 0; s < ma.fits.size(); ++s) beta += est.weights[static_cast<Index>(s)] * ma.fits[s].beta_full;
  CHECK((beta - est.beta).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((ma.xt.xt() * est.beta - est.theta).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t s = 0; s < ma.fits.size(); ++s) CHECK(est.penalty_vector[s] == ma.fits[s].candidate.k());
  CHECK(est.lambda_n == 2.0);
}

TEST_CASE("predict applies the mean map") {
  AveragedEstimate est;
  est.theta = Vector::Zero(3);
  CHECK(predict(est, GlmFamily::bernoulli()) == Vector::Constant(3, 0.5));
  est.theta << 1.5, -2.0, 0.25;
  CHECK(predict(est, GlmFamily::gaussian()) == est.theta);
  est.theta = Vector::Constant(2, std::log(3.0));
  CHECK(predict(est, GlmFamily::poisson()).isApprox(Vector::Constant(2, 3.0), 1e-14));
}

TEST_CASE("non-finite linear predictor is reported with its row") {
  Matrix x = Matrix::Ones(3, 1);
  x(1, 0) = std::numeric_limits<double>::infinity();
  const WeightCriterion crit(GlmFamily::poisson(), x, Vector::Ones(3), {Vector::Ones(1)}, {1}, 2.0);
  try {
    crit.value(Vector::Ones(1));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::numeric);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}
