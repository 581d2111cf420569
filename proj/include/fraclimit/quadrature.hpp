#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fraclimit::quad {

/// Result of a numerical integral with its estimated absolute error.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on a finite interval. Throws QuadratureFailed when the
/// error estimate exceeds max(abs_tol, rel_tol * |value|).
Estimate finite(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                double abs_tol = 1e-14, unsigned max_depth = 18);

/// Integral over [a, b] split at a geometric ladder of breakpoints. Suited to
/// integrands that are smooth but vary on scales from 1 up to b.
Estimate geometric_panels(const Integrand& f, double a, double b, double first_width = 1.0,
                          double rel_tol = 1e-10, double abs_tol = 1e-14);

/// Integral of f over [start, inf) when |f(t)| decays like t^{-decay}, decay > 1.
/// Uses t = start * u^{-1/(decay-1)}, which maps the algebraic tail onto a
/// bounded integrand on (0, 1].
Estimate power_tail(const Integrand& f, double start, double decay, double rel_tol = 1e-10,
                    double abs_tol = 1e-14);

/// Double-exponential (tanh-sinh) rule on a finite interval; tolerates
/// integrable algebraic endpoint singularities.
Estimate tanh_sinh(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// Fourier cosine integral int_0^inf g(x) cos(omega x) dx (double-exponential
/// rule), for g with at most an integrable algebraic singularity at 0.
Estimate fourier_cos(const Integrand& g, double omega);


/// A fixed node/weight rule: int f ~ sum_i weights[i] * f(nodes[i]).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Composite 20-point Gauss-Legendre rule on [0, end] over the panels
/// [0, finest], [finest, 2 finest], [2 finest, 4 finest], ... Resolves
/// non-smooth behaviour at 0 and slow decay at large arguments with a few
/// hundred nodes, so several integrands can share one set of evaluations.
Rule geometric_gauss_rule(double end, double finest = 1e-9);

}  // namespace fraclimit::quad
