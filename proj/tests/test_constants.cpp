#include <doctest.h>

#include <cmath>

#include "fraclimit/constants.hpp"
#include "support.hpp"

using namespace fraclimit;
using fraclimit::testing::thrown_kind;

namespace {

// Independent Beta-function form of the xi integral.
double xi_beta_oracle(double H) {
  return 0.5 * std::tgamma((3.0 - 4.0 * H) / 2.0) * std::tgamma((1.0 + 4.0 * H) / 2.0);
}

}  // namespace

TEST_CASE("mu") {
  CHECK(constants::mu(0.5) == doctest::Approx(2.0));
  CHECK(constants::mu(0.75) == doctest::Approx(8.0 / (3.0 * std::sqrt(M_PI))).epsilon(1e-12));
  for (double H : {0.1, 0.3, 0.6, 0.95}) CHECK(constants::mu(H) * std::tgamma(2 * H + 1) == doctest::Approx(2.0));
}

TEST_CASE("g norming") {
  CHECK(constants::g(0.5, 100) == doctest::Approx(0.1));
  CHECK(constants::g(0.75, M_E) == doctest::Approx(std::exp(-0.5)));
  CHECK(constants::g(0.9, 10) == doctest::Approx(std::pow(10.0, -0.8)));
}

TEST_CASE("h scaling") {
  CHECK(constants::h(0.5, 4) == doctest::Approx(0.125));
  CHECK(constants::h(0.8, 2) == doctest::Approx(0.25));
  for (double H : {0.2, 0.5, 0.75, 0.9}) CHECK(constants::h(H, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("xi integral against the Beta identity") {
  CHECK(std::abs(constants::xi_integral(0.5) - M_PI / 4) < 1e-9);
  CHECK(std::abs(constants::xi_integral(0.25) - 0.5) < 1e-9);
  CHECK(std::abs(constants::xi_integral(0.74) - xi_beta_oracle(0.74)) < 1e-9);
  for (int i = 1; i <= 14; ++i) {
    const double H = 0.05 * i;
    CHECK(std::abs(constants::xi_integral(H) - xi_beta_oracle(H)) < 1e-9);
  }
  CHECK(thrown_kind([] { constants::xi_integral(0.75); }) == ErrorKind::DivergentIntegral);
}

TEST_CASE("sigma and kappa") {
  CHECK(constants::sigma(0.75) == 0.75);
  CHECK(constants::sigma(0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(constants::sigma(0.9) == doctest::Approx(0.9 * std::sqrt(1.6 / 0.6)).epsilon(1e-10));
  CHECK(constants::kappa(0.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(constants::kappa(0.75) == doctest::Approx(std::sqrt(3.0 / 8.0) * std::pow(M_PI, -0.25)).epsilon(1e-10));
  CHECK(constants::kappa(0.9) ==
        doctest::Approx(std::sqrt(0.5 * 0.9 / 0.6 / std::tgamma(0.8))).epsilon(1e-10));
}

TEST_CASE("stable-rate limit matrices") {
  const auto d = constants::scaling_matrix_31(0.5, 4.0).diagonal();
  CHECK(d(0) == doctest::Approx(1.0));
  CHECK(d(1) == doctest::Approx(0.5));
  CHECK(d(2) == doctest::Approx(1.0));
  CHECK(d(3) == doctest::Approx(1.0));
  const auto e = constants::scaling_matrix_31(0.75, M_E).diagonal();
  CHECK(e(0) == doctest::Approx(std::exp(-0.25)));
  CHECK(e(1) == doctest::Approx(std::exp(-1.0)));
  CHECK(e(2) == doctest::Approx(std::exp(0.25)));
  const auto f = constants::scaling_matrix_31(0.8, 10.0).diagonal();
  CHECK(f(0) == doctest::Approx(std::pow(10.0, -0.4)));
  CHECK(f(1) == doctest::Approx(std::pow(10.0, -1.2)));
  CHECK(f(2) == doctest::Approx(std::pow(10.0, 0.2)));
  CHECK(f(3) == doctest::Approx(1.0));

  const auto s = constants::sigma_matrix_31(0.5);
  CHECK(s(0, 0) == doctest::Approx(-1.0));
  CHECK(s(1, 0) == doctest::Approx(-std::pow(2.0, 1.5)));
  CHECK(s(2, 0) == doctest::Approx(0.5));
  CHECK(s(3, 0) == 0.0);
  for (double H : {0.3, 0.5, 0.75, 0.9}) {
    const auto m = constants::sigma_matrix_31(H);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 1) == 0.0);
    CHECK(m(2, 1) == 0.0);
    CHECK(m(3, 1) == 0.5);
  }

  const auto b = constants::b_vec_31(0.5, 1.0);
  CHECK(b(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(b(1) == doctest::Approx(2.0));
  CHECK(b(2) == doctest::Approx(std::sqrt(0.5)));
  CHECK(b(3) == doctest::Approx(1.0));
}

TEST_CASE("I_qH") {
  for (int q = 1; q <= 4; ++q) CHECK(std::abs(constants::I_qH(q, 0.5) - std::pow(2.0, q) / q) < 1e-8);
  for (double H : {0.1, 0.2, 0.3, 0.4}) CHECK(std::abs(constants::I_qH(1, H)) < 1e-6);
}

TEST_CASE("noncentral and boundary coefficients") {
  // second-moment normalization: [(a+1)(a+2)]^{-1/2} with a = (2H-2)q
  const double a = -0.5;
  const double expect = std::sqrt(2.0 / ((a + 1) * (a + 2))) * std::sqrt(0.5 / std::tgamma(1.5));
  CHECK(constants::nclt_coeff(1, 0.75, 1.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(constants::nclt_coeff(2, 0.85, 2.0) / constants::nclt_coeff(2, 0.85, 1.0) ==
        doctest::Approx(std::pow(2.0, 2 * (0.85 - 1))).epsilon(1e-14));
  CHECK(constants::boundary_coeff(2, 0.75, 1.0) == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(thrown_kind([] { constants::nclt_coeff(2, 0.7, 1.0); }) == ErrorKind::DomainError);
  CHECK(thrown_kind([] { constants::boundary_coeff(2, 0.7, 1.0); }) == ErrorKind::DomainError);
}

TEST_CASE("regime classification") {
  CHECK(constants::regime(2, 0.5).tag == constants::RegimeTag::Weak);
  CHECK(constants::regime(2, 0.75).tag == constants::RegimeTag::Boundary);
  CHECK(constants::regime(2, 0.9).tag == constants::RegimeTag::Strong);
  CHECK(constants::regime(1, 0.6).tag == constants::RegimeTag::Strong);
  CHECK(constants::regime(3, 0.8).tag == constants::RegimeTag::Weak);
}

TEST_CASE("weak limit variance at H = 1/2") {
  // He_q on e^{-gamma|u|}: q! int_R e^{-q gamma |u|} = 2 q! / (q gamma)
  for (int q = 1; q <= 4; ++q) {
    CHECK(constants::weak_limit_variance(q, 0.5, 1.3) ==
          doctest::Approx(2.0 * std::tgamma(q + 1.0) / (q * 1.3)).epsilon(1e-8));
  }
}

TEST_CASE("bundle") {
  const auto b = constants::bundle(0.75, 2, 1.0);
  CHECK(b.sigma == 0.75);
  CHECK(b.regime.tag == constants::RegimeTag::Boundary);
  CHECK(*b.limit_coeff == doctest::Approx(constants::boundary_coeff(2, 0.75, 1.0)));
  CHECK_FALSE(b.xi_integral);
  const auto w = constants::bundle(0.5, 2, std::nullopt);
  CHECK(*w.xi_integral == doctest::Approx(M_PI / 4));
  CHECK(*w.I_qH == doctest::Approx(2.0));
  CHECK_FALSE(w.h);
}
