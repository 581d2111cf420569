#include "fraclimit/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclimit/error.hpp"

namespace fraclimit::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// The tolerance is taken relative to the L1 norm so that integrals which
// cancel to near zero are not rejected.
void check(const Estimate& e, double l1, double rel_tol, double abs_tol, const char* where) {
  if (!std::isfinite(e.value) ||
      e.abs_error > std::max(abs_tol, rel_tol * std::max(l1, std::abs(e.value))) * 10.0) {
    std::ostringstream os;
    os << where << ": value " << e.value << " with error estimate " << e.abs_error;
    throw Error(ErrorKind::QuadratureFailed, os.str());
  }
}

}  // namespace

Estimate finite(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                unsigned max_depth) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  const double v = Kronrod::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
  Estimate e{v, err};
  check(e, l1, rel_tol, abs_tol, "finite interval");
  return e;
}

Estimate geometric_panels(const Integrand& f, double a, double b, double first_width,
                          double rel_tol, double abs_tol) {
  Estimate total;
  double lo = a;
  double width = first_width;
  while (lo < b) {
    const double hi = std::min(b, lo + width);
    const Estimate piece = finite(f, lo, hi, rel_tol, abs_tol);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
    lo = hi;
    width *= 2.0;
  }
  return total;
}

Estimate power_tail(const Integrand& f, double start, double decay, double rel_tol,
                    double abs_tol) {
  require(decay > 1.0, ErrorKind::DivergentIntegral, "tail decay exponent must exceed 1");
  require(start > 0.0, ErrorKind::Precondition, "tail start must be positive");
  const double p = 1.0 / (decay - 1.0);
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double t = start * std::pow(u, -p);
    if (!std::isfinite(t)) return 0.0;
    // dt/du = -p * t / u
    return f(t) * p * t / u;
  };
  return finite(g, 0.0, 1.0, rel_tol, abs_tol);
}

Estimate tanh_sinh(const Integrand& f, double a, double b, double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  // the two-argument form lets boost place abscissae by their distance to the
  // nearer endpoint, which stays exact on short intervals far from zero
  const double v =
      integrator.integrate([&f](double x, double) { return f(x); }, a, b, rel_tol, &err, &l1);
  Estimate e{v, err};
  // accept a result short of the target once it is good to about 1e-8
  check(e, l1, std::max(rel_tol, 1e-9), 1e-12, "tanh-sinh");
  return e;
}

Estimate fourier_cos(const Integrand& g, double omega) {
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-12, 8);
  auto [v, rel_err] = integrator.integrate(g, omega);
  return {v, rel_err * std::abs(v)};
}


Rule geometric_gauss_rule(double end, double finest) {
  require(end > 0.0 && finest > 0.0, ErrorKind::Precondition, "rule bounds must be positive");
  using Legendre = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Legendre::abscissa();
  const auto& w = Legendre::weights();
  Rule rule;
  auto add_panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < x.size(); ++i) {
      // 20 is even: abscissae are strictly positive and mirrored
      rule.nodes.push_back(mid - half * x[i]);
      rule.weights.push_back(half * w[i]);
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  };
  double lo = 0.0;
  double hi = std::min(finest, end);
  while (lo < end) {
    add_panel(lo, hi);
    lo = hi;
    hi = std::min(end, 2.0 * hi);
  }
  return rule;
}

}  // namespace fraclimit::quad
