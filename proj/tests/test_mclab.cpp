#include <doctest.h>

#include <cmath>

#include "fraclimit/hermite.hpp"
#include "fraclimit/mclab.hpp"
#include "support.hpp"

using namespace fraclimit;
using fraclimit::testing::thrown_kind;

namespace {

fracproc::GaussPath constant_path(double c, double horizon, std::int64_t steps) {
  return {fracproc::TimeGrid(horizon, steps), std::vector<double>(steps + 1, c), fracproc::PathKind::fbm};
}

hermite::HermiteExpansion hermite_functional(int q) {
  return hermite::expand(hermite::Functional([q](double x) { return hermite::eval(q, x); }));
}

mclab::McConfig small_mc(std::int64_t reps) {
  mclab::McConfig mc;
  mc.reps = reps;
  return mc;
}

}  // namespace

TEST_CASE("integrate_functional") {
  const auto c = constant_path(1.7, 3.0, 30);
  CHECK(mclab::integrate_functional(c, [](double x) { return x; }, 1.0) == doctest::Approx(1.7 * 3.0));
  const auto z = constant_path(0.0, 5.0, 50);
  CHECK(mclab::integrate_functional(z, [](double x) { return x * x - 1; }, 1.0) == doctest::Approx(-5.0));
  CHECK(mclab::integrate_functional(z, [](double x) { return x * x - 1; }, 0.0) == 0.0);
  CHECK(mclab::integrate_functional(c, [](double x) { return x; }, 0.55) == doctest::Approx(1.7 * 1.65));
  CHECK(thrown_kind([&] { mclab::integrate_functional(c, [](double x) { return x; }, 1.5); }) ==
        ErrorKind::GridTooShort);
}

TEST_CASE("integrate_hermite matches the functional form") {
  std::vector<double> v{0.1, -0.4, 1.2, 0.7};
  const fracproc::GaussPath p{fracproc::TimeGrid(0.3, 3), v, fracproc::PathKind::fbm};
  CHECK(mclab::integrate_hermite(v, 3, 0.1) ==
        doctest::Approx(mclab::integrate_functional(p, [](double x) { return hermite::eval(3, x); }, 1.0)));
}

TEST_CASE("L at H = 1/2") {
  const double gamma = 1.3;
  for (double t : {0.5, 10.0}) {
    CHECK(std::abs(mclab::L_eval(0.5, gamma, 1, t) - (1 - std::exp(-gamma * t)) / gamma) < 1e-8);
    CHECK(std::abs(mclab::L_eval(0.5, gamma, 2, t) - (1 - std::exp(-2 * gamma * t)) / (2 * gamma)) < 1e-8);
  }
  CHECK(mclab::L_eval(0.5, gamma, 2, 0.0) == 0.0);
  CHECK(mclab::L_eval(0.7, gamma, 2, 0.0) == 0.0);
}

TEST_CASE("L off H = 1/2 agrees with direct integration of the covariance") {
  // boundary case: L(t) grows like log t
  const double l100 = mclab::L_eval(0.75, 1.0, 2, 100.0);
  const double l1600 = mclab::L_eval(0.75, 1.0, 2, 1600.0);
  const double slope = 0.25 / std::tgamma(1.5) / std::tgamma(1.5);  // ((2H-1)/Gamma(2H))^2
  CHECK((l1600 - l100) / std::log(16.0) == doctest::Approx(slope).epsilon(0.05));
  CHECK(mclab::L_abs_eval(0.3, 1.0, 1, 20.0) >= std::abs(mclab::L_eval(0.3, 1.0, 1, 20.0)));
}

TEST_CASE("exact integral variance at H = 1/2, q = 1") {
  const double g = 0.8;
  const double t = 7.0;
  const double expect = 2.0 * (t / g - (1.0 - std::exp(-g * t)) / (g * g));
  CHECK(mclab::exact_integral_variance(0.5, g, 1, t) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("variance_scaling preconditions") {
  const std::vector<double> ladder{100, 400};
  CHECK(thrown_kind([&] { mclab::variance_scaling(2, 0.5, 1.0, ladder, small_mc(0)); }) ==
        ErrorKind::Precondition);
  const std::vector<double> down{400, 100};
  CHECK(thrown_kind([&] { mclab::variance_scaling(2, 0.5, 1.0, down, small_mc(1000)); }) ==
        ErrorKind::Precondition);
}

TEST_CASE("variance_scaling tracks the exact variance") {
  const std::vector<double> ladder{20, 80};
  const auto study = mclab::variance_scaling(2, 0.5, 1.0, ladder, small_mc(600));
  REQUIRE(study.rows.size() == 2);
  for (const auto& row : study.rows) {
    CHECK(row.target == doctest::Approx(4.0 * row.t * row.L));
    CHECK(std::abs(row.exact_ratio - 1.0) < 4 * row.ratio_se * row.ratio / row.exact_ratio + 0.05);
  }
}

TEST_CASE("regime guards") {
  CHECK(thrown_kind([] { mclab::clt_experiment(hermite_functional(2), 0.9, 1.0, 10.0, small_mc(10)); }) ==
        ErrorKind::WrongRegime);
  CHECK(thrown_kind([] { mclab::boundary_experiment(1, 1.0, 10.0, small_mc(10)); }) == ErrorKind::WrongRegime);
  CHECK(thrown_kind([] { mclab::nclt_experiment(2, 0.5, 1.0, 10.0, small_mc(10)); }) == ErrorKind::WrongRegime);
}

TEST_CASE("clt experiment is reproducible and roughly standard") {
  const auto a = mclab::clt_experiment(hermite_functional(2), 0.5, 1.0, 50.0, small_mc(400));
  const auto b = mclab::clt_experiment(hermite_functional(2), 0.5, 1.0, 50.0, small_mc(400));
  CHECK(a.sample == b.sample);
  CHECK(a.rank == 2);
  CHECK(a.weak.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a.closed_form == doctest::Approx(a.weak.value).epsilon(1e-6));
  CHECK(std::abs(a.summary.variance - 1.0) < 0.25);
}

TEST_CASE("rank-1 functional below H = 1/2 has a degenerate limit") {
  const auto r = mclab::clt_experiment(hermite_functional(1), 0.3, 1.0, 100.0, small_mc(200));
  CHECK(r.degenerate_limit);
  CHECK(r.closed_form == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  // t^{-1/2} norming sends the statistic to zero like t^{2H-1}
  const double exact = mclab::exact_integral_variance(0.3, 1.0, 1, 100.0) / 100.0;
  CHECK(std::abs(r.summary.variance - exact) < 4 * r.summary.variance_se);
  CHECK(mclab::exact_integral_variance(0.3, 1.0, 1, 1000.0) / 1000.0 < 0.5 * exact);
}

TEST_CASE("deterministic smoothing") {
  const std::vector<double> ladder{10.0, 100.0};
  const auto zero = mclab::smoothing_deterministic([](double) { return 0.0; }, 2.0, ladder);
  for (const auto& row : zero.rows) CHECK(row.sup_error == 0.0);
  const auto id = mclab::smoothing_deterministic([](double s) { return s; }, 2.0, ladder);
  for (const auto& row : id.rows) {
    CHECK(row.sup_error < row.bound);
    // for psi(s) = s the error is (1 - e^{-gamma t v}) / (gamma^2 t), largest at v = 1
    CHECK(row.sup_error == doctest::Approx((1 - std::exp(-2.0 * row.t)) / (4.0 * row.t)).epsilon(1e-6));
  }
}

TEST_CASE("stochastic smoothing ratio is near one") {
  const auto r = mclab::smoothing_stochastic(0.6, 1.0, 100.0, small_mc(600));
  CHECK(std::abs(r.ratio - 1.0) < 0.2);
}
