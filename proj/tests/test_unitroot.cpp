#include <doctest.h>

#include <cmath>

#include "fraclimit/stats.hpp"
#include "fraclimit/unitroot.hpp"
#include "support.hpp"

using namespace fraclimit;
using fraclimit::testing::thrown_kind;

TEST_CASE("AR(1) simulation") {
  unitroot::Ar1Config cfg;
  cfg.n = 100;
  cfg.gamma = 5.0;
  CHECK(cfg.beta() == doctest::Approx(0.95));

  cfg.sigma2 = 0.0;
  const auto zero = unitroot::simulate_ar1(cfg);
  CHECK(zero.size() == 101);
  for (double x : zero) CHECK(x == 0.0);

  cfg.n = 10000;
  cfg.gamma = 0.0;
  cfg.sigma2 = 1.0;
  std::vector<double> last(2000);
  for (std::size_t i = 0; i < last.size(); ++i) {
    cfg.seed = i;
    last[i] = unitroot::simulate_ar1(cfg).back();
  }
  const auto s = stats::empirical_summary(last);
  CHECK(s.variance / 10000.0 > 0.9);
  CHECK(s.variance / 10000.0 < 1.1);
}

TEST_CASE("fgn innovations are reproducible") {
  unitroot::Ar1Config cfg;
  cfg.n = 500;
  cfg.innovation = unitroot::Innovation::fgn;
  cfg.H = 0.7;
  cfg.seed = 9;
  CHECK(unitroot::simulate_ar1(cfg) == unitroot::simulate_ar1(cfg));
}

TEST_CASE("least squares estimator") {
  const std::vector<double> a{0, 1, 1};
  const std::vector<double> b{0, 1, 2};
  const std::vector<double> z{0, 0, 0};
  CHECK(unitroot::lse(a) == doctest::Approx(1.0));
  CHECK(unitroot::lse(b) == doctest::Approx(2.0));
  CHECK(thrown_kind([&] { unitroot::lse(z); }) == ErrorKind::DegenerateSeries);
  CHECK(unitroot::tau_hat(a, 1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(unitroot::tau_hat(b, 1.0) == doctest::Approx(1.0));
  CHECK(thrown_kind([&] { unitroot::tau_hat(z, 1.0); }) == ErrorKind::DegenerateSeries);
}

TEST_CASE("tau vector on degenerate paths") {
  const double gamma = 0.7;
  const fracproc::TimeGrid grid(1.0, 100);
  const fracproc::GaussPath ones{grid, std::vector<double>(101, 1.0), fracproc::PathKind::foup};
  const auto t1 = unitroot::tau_vector(gamma, ones);
  CHECK(t1.tau[0] == doctest::Approx(1.0));
  CHECK(t1.tau[1] == doctest::Approx(1.0));
  CHECK(t1.tau[2] == doctest::Approx(0.5 + gamma));
  CHECK(t1.tau[3] == doctest::Approx(0.5 + gamma));
  CHECK(unitroot::tau_bar(gamma, ones) == doctest::Approx(gamma));

  const double c = -2.5;
  const fracproc::GaussPath cs{grid, std::vector<double>(101, c), fracproc::PathKind::foup};
  const auto tc = unitroot::tau_vector(gamma, cs);
  CHECK(tc.tau[0] == doctest::Approx(1.0 / std::abs(c)));
  CHECK(tc.tau[1] == doctest::Approx(1.0 / (c * c)));
  CHECK(tc.tau[2] == doctest::Approx(c * c * (0.5 + gamma) / std::abs(c)));
  CHECK(tc.tau[3] == doctest::Approx(0.5 + gamma));

  const fracproc::GaussPath zeros{grid, std::vector<double>(101, 0.0), fracproc::PathKind::foup};
  CHECK(thrown_kind([&] { unitroot::tau_vector(gamma, zeros); }) == ErrorKind::DegeneratePath);
  const fracproc::GaussPath longer{fracproc::TimeGrid(2.0, 100), std::vector<double>(101, 1.0),
                                   fracproc::PathKind::foup};
  CHECK(thrown_kind([&] { unitroot::tau_vector(gamma, longer); }) == ErrorKind::Precondition);
}

TEST_CASE("tau identities hold pathwise") {
  const fracproc::TimeGrid grid(1.0, 2000);
  for (double gamma : {-6.0, 0.0, 3.0, 40.0}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto path = fracproc::foup_from_fbm(gamma, fracproc::fbm_sample(fracproc::HurstIndex(0.6), grid, seed));
      const auto t = unitroot::tau_vector(gamma, path);
      CHECK(std::abs(t.tau[1] - t.tau[0] * t.tau[0]) <= 1e-10 * std::max(1.0, t.tau[1]));
      CHECK(std::abs(t.tau[3] - t.A * t.tau[1]) <= 1e-10 * std::max(1.0, std::abs(t.tau[3])));
      CHECK(std::abs(t.tau[2] - t.A * t.tau[0]) <= 1e-10 * std::max(1.0, std::abs(t.tau[2])));
    }
  }
}

TEST_CASE("tau_bar at gamma = 0 equals the direct Brownian functional") {
  const fracproc::TimeGrid grid(1.0, 10000);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto w = fracproc::fbm_sample(fracproc::HurstIndex(0.5), grid, seed);
    CHECK(std::abs(unitroot::tau_bar(0.0, w) - unitroot::tau_bar_direct_gamma0(w.values, grid.step())) < 1e-10);
  }
}

TEST_CASE("sample shapes and determinism") {
  const auto a = unitroot::tau_sample(0.5, 3.0, 11, 1e-3, 5);
  const auto b = unitroot::tau_sample(0.5, 3.0, 11, 1e-3, 5);
  CHECK(a.rows() == 11);
  CHECK(a.cols() == 4);
  CHECK(a == b);
  CHECK(thrown_kind([] { unitroot::thm31_sample(0.5, 0.5, 10, 1e-3, 1); }) == ErrorKind::DomainError);
  CHECK(thrown_kind([] { unitroot::thm32_sample(0.5, 2.0, 10, 1e-3, 1); }) == ErrorKind::DomainError);
  CHECK(thrown_kind([] { unitroot::thm32_sample(0.5, -400.0, 10, 1e-3, 1); }) == ErrorKind::Overflow);
}

TEST_CASE("explosive limit scale at H = 1/2") {
  const auto s = unitroot::thm32_limit_scale(0.5);
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(4.0));
  CHECK(s[2] == doctest::Approx(1.0));
  CHECK(s[3] == doctest::Approx(2.0));
}

TEST_CASE("Rosenblatt-driven first component is heavy tailed") {
  const auto m = unitroot::thm31_sample(0.85, 50.0, 1000, 1e-4, 3);
  std::vector<double> c1(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) c1[i] = m(i, 0);
  CHECK(stats::empirical_summary(c1).excess_kurtosis > 0.0);
}

TEST_CASE("discrete and continuous sides agree at moderate gamma") {
  const auto r = unitroot::discrete_check(5.0, 1000, 1000, 1e-3, 17);
  CHECK(r.ks_two_sample < r.ks_critical_1pct);
}
