// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "mcar_avg/error.hpp"
#include "mcar_avg/evalsim.hpp"
#include "mcar_avg/patterns.hpp"
#include "oracles.hpp"

using namespace mcar;

namespace {

double missing_fraction(const Mask& m, Index col) {
  return 1.0 - static_cast<double>(m.col(col).count()) / static_cast<double>(m.rows());
}

}  // namespace

TEST_CASE("threshold a = -10 gives fully observed data") {
  SimConfig cfg;
  cfg.a = -10.0;
  const auto rep = generate_replication(cfg, 0);
  CHECK(rep.data.mask().all());
  CHECK(rep.data.cols() == 4);
  CHECK(rep.x_unmasked == rep.data.x());
}

TEST_CASE("threshold a = 0 masks about half of each missing column") {
  SimConfig cfg;
  cfg.n = 10000;
  const auto rep = generate_replication(cfg, 3);
  CHECK(missing_fraction(rep.data.mask(), 2) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(missing_fraction(rep.data.mask(), 3) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(missing_fraction(rep.data.mask(), 0) == 0.0);
  CHECK(missing_fraction(rep.data.mask(), 1) == 0.0);
  for (Index i = 0; i < rep.data.rows(); ++i)
    for (Index j = 0; j < rep.data.cols(); ++j)
      if (rep.data.observed(i, j)) CHECK(rep.data.x()(i, j) == rep.x_unmasked(i, j));
}

TEST_CASE("covariates are equicorrelated with unit variance") {
  SimConfig cfg;
  cfg.n = 10000;
  cfg.a = -10.0;
  const auto rep = generate_replication(cfg, 1);
  const Matrix& x = rep.x_unmasked;
  const Matrix c = x.rowwise() - x.colwise().mean();
  const Matrix cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
  for (Index i = 0; i < 4; ++i) {
    CHECK(cov(i, i) == doctest::Approx(1.0).epsilon(0.05));
    for (Index j = 0; j < i; ++j) {
      CHECK(std::abs(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j)) - 0.75) <= 0.05);
    }
  }
}

TEST_CASE("missingness is independent of covariates and response (MCAR)") {
  SimConfig cfg;
  cfg.n = 20000;
  const auto rep = generate_replication(cfg, 11);
  const auto& m = rep.data.mask();
  for (Index c : {Index{2}, Index{3}}) {
    double sum_obs = 0, sum_mis = 0, y_obs = 0, y_mis = 0;
    Index n_obs = 0, n_mis = 0;
    for (Index i = 0; i < cfg.n; ++i) {
      if (m(i, c)) {
        sum_obs += rep.x_unmasked(i, c);
        y_obs += rep.data.y()(i);
        ++n_obs;
      } else {
        sum_mis += rep.x_unmasked(i, c);
        y_mis += rep.data.y()(i);
        ++n_mis;
      }
    }
    // difference of means; standard error about sqrt(2/5000) for x
    CHECK(std::abs(sum_obs / n_obs - sum_mis / n_mis) < 0.06);
    CHECK(std::abs(y_obs / n_obs - y_mis / n_mis) < 0.04);
  }
  // the two masks are independent of each other
  const double both = static_cast<double>((!m.col(2) && !m.col(3)).count()) / cfg.n;
  CHECK(both == doctest::Approx(missing_fraction(m, 2) * missing_fraction(m, 3)).epsilon(0.08));
}

TEST_CASE("truth uses all five covariates while estimators see four") {
  SimConfig cfg;
  cfg.a = -10.0;
  cfg.n = 50;
  const auto rep = generate_replication(cfg, 2);
  CHECK(rep.truth.theta0.size() == 50);
  cfg.drop_last_covariate = false;
  const auto full = generate_replication(cfg, 2);
  CHECK(full.data.cols() == 5);
  CHECK((full.x_unmasked * cfg.beta_true - rep.truth.theta0).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(full.x_unmasked.leftCols(4) == rep.x_unmasked);
  for (Index i = 0; i < 50; ++i) CHECK(rep.truth.mu(i) == doctest::Approx(1.0 / (1.0 + std::exp(-rep.truth.theta0(i)))));
}

TEST_CASE("KL loss is zero at the truth and nonnegative elsewhere") {
  std::mt19937_64 rng(4);
  for (const auto& f : {GlmFamily::bernoulli(), GlmFamily::poisson(), GlmFamily::gaussian(1.5)}) {
    const Vector theta0 = oracle::random_normal(30, 1, rng).col(0);
    Vector mu(30);
    for (Index i = 0; i < 30; ++i) mu(i) = f.b_prime(theta0(i));
    const Truth t{mu, theta0};
    CHECK(kl_loss(f, theta0, t) == 0.0);
    for (int q = 0; q < 50; ++q) {
      const Vector th = theta0 + oracle::random_normal(30, 1, rng).col(0) * 0.3;
      const double v = kl_loss(f, th, t);
      CHECK(v >= -1e-10);
      CHECK(v == doctest::Approx(static_cast<double>(oracle::kl(f, th, theta0, mu))).epsilon(1e-9));
    }
  }
}

TEST_CASE("KL loss on a gaussian instance is the scaled squared error") {
  const auto f = GlmFamily::gaussian(2.0);
  Vector theta0(3), th(3);
  theta0 << 0.0, 1.0, -1.0;
  th << 0.5, 1.0, 0.0;
  const Truth t{theta0, theta0};
  CHECK(kl_loss(f, th, t) == doctest::Approx((0.25 + 1.0) / 2.0));
}

TEST_CASE("KL loss rejects length mismatches") {
  const Truth t{Vector::Zero(3), Vector::Zero(3)};
  CHECK_THROWS_AS(kl_loss(GlmFamily::bernoulli(), Vector::Zero(2), t), Error);
}

TEST_CASE("summaries use the sample standard deviation and skip failures") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto s = summarize({1.0, 2.0, nan, 4.0, 3.0});
  CHECK(s.count == 4);
  CHECK(s.failures == 1);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const auto odd = summarize({5.0, 1.0, 3.0});
  CHECK(odd.median == 3.0);
}

TEST_CASE("studies are deterministic and independent of the thread count") {
  SimConfig cfg;
  cfg.replications = 24;
  cfg.n = 100;
  const auto r1 = run_study(cfg);
  const auto r2 = run_study(cfg);
  cfg.threads = 4;
  const auto r4 = run_study(cfg);
  for (auto m : kAllMethods) {
    const auto& a = r1.values_of(m);
    REQUIRE(a.size() == 24);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::memcmp(&a[i], &r2.values_of(m)[i], sizeof(double)) == 0);
      CHECK(std::memcmp(&a[i], &r4.values_of(m)[i], sizeof(double)) == 0);
    }
  }
  cfg.seed += 1;
  CHECK(run_study(cfg).values_of(Method::mopt)[0] != r1.values_of(Method::mopt)[0]);
}

TEST_CASE("replications without complete cases count as MOPT and CC failures") {
  SimConfig cfg;
  cfg.n = 10;
  cfg.a = 2.5;  // almost every row misses something
  cfg.replications = 20;
  const auto r = run_study(cfg);
  CHECK(r.summary_of(Method::cc).failures > 0);
  CHECK(r.summary_of(Method::mopt).failures == r.summary_of(Method::cc).failures);
  CHECK(r.summary_of(Method::cc).count + r.summary_of(Method::cc).failures == 20);
}

TEST_CASE("invalid configurations are rejected") {
  SimConfig cfg;
  cfg.missing_columns = {4};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SimConfig{};
  cfg.rho = 1.0;
  CHECK_THROWS_AS(run_study(cfg), Error);
  cfg = SimConfig{};
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("optimality ratio is 1 for a single candidate and at least 1 otherwise") {
  SimConfig cfg;
  cfg.a = -10.0;
  const auto rep = generate_replication(cfg, 0);
  const auto f = GlmFamily::bernoulli();
  auto crit_of = [&](const Replication& r) {
    const auto fits = fit_candidates(f, build_candidates(r.data), r.data);
    return make_criterion(f, fits, zero_fill(r.data), r.data.y());
  };
  const auto one = crit_of(rep);
  REQUIRE(one.size() == 2);  // CC plus the single observed group

  cfg.a = 0.0;
  cfg.missing_columns = {2};
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto r = generate_replication(cfg, k);
    const auto crit = crit_of(r);
    const double ratio = optimality_ratio(crit, r.truth, 0.05);
    // grid points are coarser than the optimizer's exact minimizer, so only
    // a small slack below 1 is possible
    CHECK(ratio >= 1.0 - 0.05);
  }
  const WeightCriterion single(f, one.design(), rep.data.y(), {Vector::Zero(4)}, {4}, 2.0);
  CHECK(optimality_ratio(single, rep.truth, 0.1) == 1.0);
  CHECK_THROWS_AS(optimality_ratio(one, rep.truth, 0.0), Error);
}

TEST_CASE("poisson studies run end to end") {
  SimConfig cfg;
  cfg.family = FamilyKind::poisson_log;
  cfg.beta_true = (Vector(5) << 0.3, 0.2, -0.4, -0.3, 0.1).finished();
  cfg.replications = 5;
  const auto r = run_study(cfg);
  for (auto m : kAllMethods) {
    CHECK(r.summary_of(m).count == 5);
    CHECK(r.summary_of(m).mean > 0.0);
  }
}
