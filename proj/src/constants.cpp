#include "fraclimit/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclimit/error.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit::constants {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesSwitch = 40.0;

void check_hurst(double H) {
  require(H > 0.0 && H < 1.0, ErrorKind::Precondition, "Hurst index must lie in (0, 1)");
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// e^s int_s^inf e^{-u} u^{a-1} du - e^{-s} int_0^s e^u u^{a-1} du for s > 40,
// from Watson's lemma on both integrals: the even terms cancel, leaving
// 2 sum_{j odd} (a-1)(a-2)...(a-j) s^{a-1-j}. Exponentially small terms dropped.
double bracket_difference_series(double a, double s) {
  double pochhammer = 1.0;
  double sum = 0.0;
  double prev_mag = std::numeric_limits<double>::infinity();
  for (int j = 1; j < 200; ++j) {
    pochhammer *= (a - j);
    if (j % 2 == 0) continue;
    const double term = pochhammer * std::pow(s, a - 1.0 - j);
    const double mag = std::abs(term);
    if (mag > prev_mag) break;  // asymptotic series: stop at the smallest term
    sum += term;
    prev_mag = mag;
    if (mag <= 1e-18 * std::abs(sum)) break;
  }
  return 2.0 * sum;
}

}  // namespace

std::string_view to_string(RegimeTag tag) noexcept {
  switch (tag) {
    case RegimeTag::Weak: return "weak";
    case RegimeTag::Boundary: return "boundary";
    case RegimeTag::Strong: return "strong";
  }
  return "unknown";
}

Regime regime(int q, double H) {
  require(q >= 1, ErrorKind::Precondition, "Hermite rank must be at least 1");
  check_hurst(H);
  const double edge = 1.0 - 1.0 / (2.0 * q);
  if (q == 1) return {H <= 0.5 ? RegimeTag::Weak : RegimeTag::Strong, q, H};
  if (H < edge) return {RegimeTag::Weak, q, H};
  if (H == edge) return {RegimeTag::Boundary, q, H};
  return {RegimeTag::Strong, q, H};
}

double mu(double H) {
  check_hurst(H);
  return 2.0 / std::tgamma(2.0 * H + 1.0);
}

double g(double H, double t) {
  check_hurst(H);
  require(t > 1.0, ErrorKind::DomainError, "g_H(t) is defined for t > 1");
  if (H < 0.75) return 1.0 / std::sqrt(t);
  if (H == 0.75) return 1.0 / std::sqrt(t * std::log(t));
  return std::pow(t, 1.0 - 2.0 * H);
}

double h(double H, double gamma) {
  check_hurst(H);
  require(gamma > 0.0, ErrorKind::DomainError, "h_H(gamma) needs gamma > 0");
  if (H < 0.75) return std::pow(gamma, -0.5 - 2.0 * H);
  return std::pow(gamma, -2.0);
}

double xi_integral(double H) {
  check_hurst(H);
  if (H >= 0.75) {
    throw Error(ErrorKind::DivergentIntegral, "int xi^{2-4H}/(1+xi^2)^2 diverges at 0 for H >= 3/4");
  }
  // xi -> 1/xi folds [1, inf) onto [0, 1]:
  //   J = int_0^1 (xi^{2-4H} + xi^{4H}) / (1 + xi^2)^2 dxi.
  // For H > 1/2 the first term is singular at 0; xi = y^k with k = 1/(3-4H)
  // turns it into k int_0^1 dy / (1 + y^{2k})^2.
  auto kernel = [](double xi) {
    const double d = 1.0 + xi * xi;
    return 1.0 / (d * d);
  };
  double first = 0.0;
  if (H > 0.5) {
    const double k = 1.0 / (3.0 - 4.0 * H);
    first = quad::tanh_sinh([&](double y) { return k * kernel(std::pow(y, k)); }, 0.0, 1.0).value;
  } else {
    first = quad::tanh_sinh([&](double x) { return std::pow(x, 2.0 - 4.0 * H) * kernel(x); }, 0.0,
                            1.0)
                .value;
  }
  const double second =
      quad::tanh_sinh([&](double x) { return std::pow(x, 4.0 * H) * kernel(x); }, 0.0, 1.0).value;
  return first + second;
}

double sigma(double H) {
  check_hurst(H);
  if (H < 0.75) {
    return std::sqrt(2.0 / kPi) * std::tgamma(2.0 * H + 1.0) * std::sin(kPi * H) *
           std::sqrt(xi_integral(H));
  }
  if (H == 0.75) return 0.75;
  return H * std::sqrt((4.0 * H - 2.0) / (4.0 * H - 3.0));
}

double kappa(double H) {
  check_hurst(H);
  if (H < 0.75) {
    return std::sin(kPi * H) * std::sqrt(std::tgamma(2.0 * H + 1.0) * xi_integral(H) / kPi);
  }
  if (H == 0.75) return std::sqrt(3.0 / 8.0) * std::pow(kPi, -0.25);
  return std::sqrt(0.5 * H / (4.0 * H - 3.0)) / std::sqrt(std::tgamma(2.0 * H - 1.0));
}

Eigen::Matrix4d scaling_matrix_31(double H, double gamma) {
  check_hurst(H);
  require(gamma > 1.0, ErrorKind::DomainError, "D_H(gamma) needs gamma > 1");
  Eigen::Vector4d d;
  if (H < 0.75) {
    d << std::pow(gamma, 0.5 - H), std::pow(gamma, 0.5 - 2.0 * H), std::pow(gamma, H - 0.5), 1.0;
  } else if (H == 0.75) {
    const double l = 1.0 / std::sqrt(std::log(gamma));
    d << std::pow(gamma, -0.25) * l, l / gamma, std::pow(gamma, 0.25) * l, 1.0;
  } else {
    d << std::pow(gamma, 2.0 - 3.0 * H), std::pow(gamma, 2.0 - 4.0 * H), std::pow(gamma, 1.0 - H),
        1.0;
  }
  return d.asDiagonal();
}

Eigen::Matrix<double, 4, 2> sigma_matrix_31(double H) {
  const double m = mu(H);
  const double k = kappa(H);
  Eigen::Matrix<double, 4, 2> s;
  s << -k * m, 0.0,
       -2.0 * k * std::pow(m, 1.5), 0.0,
       k, 0.0,
       0.0, 0.5;
  return s;
}

Eigen::Vector4d b_vec_31(double H, double gamma) {
  require(gamma > 0.0, ErrorKind::DomainError, "b_H(gamma) needs gamma > 0");
  const double m = mu(H);
  Eigen::Vector4d b;
  b << std::sqrt(m) * std::pow(gamma, H), m * std::pow(gamma, 2.0 * H),
      std::pow(gamma, 1.0 - H) / std::sqrt(m), gamma;
  return b;
}

double fou_bracket(double H, double s) {
  check_hurst(H);
  s = std::abs(s);
  const double g2h1 = std::tgamma(2.0 * H + 1.0);
  const double a = 2.0 * H;
  if (s > kSeriesSwitch) {
    // at H = 1/2 every series term vanishes and the dropped exponentially small
    // remainder e^{-s} is the whole difference
    if (H == 0.5) return 2.0 * std::exp(-s);
    return g2h1 * std::exp(-s) + a * bracket_difference_series(a, s);
  }
  // w = u^{2H} removes the u^{2H-1} factor:
  //   2H e^s int_s^inf e^{-u} u^{2H-1} du = int_{s^{2H}}^inf exp(s - w^{1/(2H)}) dw
  //   2H e^{-s} int_0^s e^u u^{2H-1} du   = int_0^{s^{2H}} exp(w^{1/(2H)} - s) dw
  const double c = 1.0 / a;
  const double lo = std::pow(s, a);
  const double hi = std::pow(s + 60.0, a);
  const double upper =
      quad::tanh_sinh([&](double w) { return std::exp(s - std::pow(w, c)); }, lo, hi).value;
  const double lower =
      s == 0.0 ? 0.0
               : quad::tanh_sinh([&](double w) { return std::exp(std::pow(w, c) - s); }, 0.0, lo)
                     .value;
  return g2h1 * std::exp(-s) + upper - lower;
}

double I_qH(int q, double H) {
  check_hurst(H);
  require(q >= 1, ErrorKind::Precondition, "q must be at least 1");
  const bool valid = (q == 1 && H <= 0.5) || (q >= 2 && H < 1.0 - 1.0 / (2.0 * q));
  if (!valid) {
    throw Error(ErrorKind::DomainError, "I_{q,H} diverges for q = " + std::to_string(q) +
                                            ", H = " + std::to_string(H));
  }
  auto integrand = [&](double s) { return std::pow(fou_bracket(H, s), q); };
  // fixed composite Gauss rule: the bracket carries tanh-sinh noise near 1e-12
  // that would stall an adaptive scheme
  const double body = quad::geometric_gauss_rule(kSeriesSwitch, 1e-9).apply(integrand);
  // exponential decay at H = 1/2: the tail is below 2^q e^{-40 q}
  if (H == 0.5) return body;
  const double decay = q * (2.0 - 2.0 * H);
  const auto tail = quad::power_tail(integrand, kSeriesSwitch, decay, 1e-11, 1e-13);
  return body + tail.value;
}

double nclt_coeff(int q, double H, double gamma) {
  require(q >= 1, ErrorKind::Precondition, "q must be at least 1");
  check_hurst(H);
  require(gamma > 0.0, ErrorKind::DomainError, "gamma must be positive");
  if (!(H > 1.0 - 1.0 / (2.0 * q))) {
    throw Error(ErrorKind::DomainError, "noncentral regime needs H > 1 - 1/(2q)");
  }
  const double a = (2.0 * H - 2.0) * q;
  return std::sqrt(2.0 * factorial(q) / ((a + 1.0) * (a + 2.0))) *
         std::pow((2.0 * H - 1.0) / std::tgamma(2.0 * H), 0.5 * q) * std::pow(gamma, q * (H - 1.0));
}

double boundary_coeff(int q, double H, double gamma) {
  require(q >= 2, ErrorKind::DomainError, "boundary regime needs q >= 2");
  check_hurst(H);
  require(gamma > 0.0, ErrorKind::DomainError, "gamma must be positive");
  if (H != 1.0 - 1.0 / (2.0 * q)) {
    throw Error(ErrorKind::DomainError, "boundary regime needs H = 1 - 1/(2q)");
  }
  return std::sqrt(2.0 * factorial(q)) * std::pow((2.0 * H - 1.0) / std::tgamma(2.0 * H), 0.5 * q) *
         std::pow(gamma, q * (H - 1.0));
}

double weak_limit_variance(int q, double H, double gamma) {
  require(gamma > 0.0, ErrorKind::DomainError, "gamma must be positive");
  return 2.0 * factorial(q) * I_qH(q, H) /
         (std::pow(2.0 * std::tgamma(2.0 * H + 1.0), q) * gamma);
}

NormalizationBundle bundle(double H, int q, std::optional<double> gamma) {
  NormalizationBundle b{H, q, gamma, regime(q, H), mu(H), sigma(H), kappa(H),
                        {}, {}, sigma_matrix_31(H), {}, {}, {}, {}};
  if (H < 0.75) b.xi_integral = xi_integral(H);
  if (b.regime.tag == RegimeTag::Weak) b.I_qH = I_qH(q, H);
  if (gamma) {
    require(*gamma > 0.0, ErrorKind::DomainError, "gamma must be positive");
    b.h = h(H, *gamma);
    b.b = b_vec_31(H, *gamma);
    if (*gamma > 1.0) b.D = scaling_matrix_31(H, *gamma);
    switch (b.regime.tag) {
      case RegimeTag::Weak: b.limit_coeff = std::sqrt(weak_limit_variance(q, H, *gamma)); break;
      case RegimeTag::Boundary: b.limit_coeff = boundary_coeff(q, H, *gamma); break;
      case RegimeTag::Strong: b.limit_coeff = nclt_coeff(q, H, *gamma); break;
    }
  }
  return b;
}

}  // namespace fraclimit::constants
