#pragma once

#include <Eigen/Core>

#include <optional>
#include <string_view>

namespace fraclimit::constants {

/// Dependence regime of a rank-q functional of the stationary FOU process.
enum class RegimeTag { Weak, Boundary, Strong };

struct Regime {
  RegimeTag tag;
  int q;
  double H;
};

std::string_view to_string(RegimeTag tag) noexcept;

/// Weak: H < 1 - 1/(2q), or q = 1 and H <= 1/2. Boundary: q >= 2 and
/// H == 1 - 1/(2q) (exact comparison). Strong otherwise.
Regime regime(int q, double H);

/// mu_H = 2 / Gamma(2H + 1).
double mu(double H);

/// Norming g_H(t), t > 1: t^{-1/2}, (t log t)^{-1/2} at H = 3/4, t^{1-2H} above.
double g(double H, double t);

/// h_H(gamma) = gamma^{-1/2-2H} for H < 3/4 and gamma^{-2} otherwise.
double h(double H, double gamma);

/// J(H) = int_0^inf xi^{2-4H} / (1 + xi^2)^2 dxi, finite only for H < 3/4.
double xi_integral(double H);

/// sigma_H, three branches split at H = 3/4.
double sigma(double H);

/// kappa_H, three branches split at H = 3/4.
double kappa(double H);

/// Diagonal scaling D_H(gamma) for the gamma -> +inf unit-root limit, gamma > 1.
Eigen::Matrix4d scaling_matrix_31(double H, double gamma);

/// Limit loading matrix Sigma_H (4 x 2).
Eigen::Matrix<double, 4, 2> sigma_matrix_31(double H);

/// Centering vector b_H(gamma), gamma > 0.
Eigen::Vector4d b_vec_31(double H, double gamma);

/// Unnormalized covariance of the unit-rate stationary FOU process:
///   Gamma(2H+1) e^{-s} + 2H [e^s int_s^inf e^{-u} u^{2H-1} du
///                            - e^{-s} int_0^s e^u u^{2H-1} du],
/// which equals 2 Gamma(2H+1) r_{H,1}(s). Quadrature for s <= 40, the
/// asymptotic series beyond.
double fou_bracket(double H, double s);

/// I_{q,H} = int_0^inf fou_bracket(H, s)^q ds. DomainError outside
/// (q = 1, H <= 1/2) or (q >= 2, H < 1 - 1/(2q)).
double I_qH(int q, double H);

/// Coefficient of the Hermite-process limit for H > 1 - 1/(2q):
/// (2 q!)^{1/2} [((2H-2)q+1)((2H-2)q+2)]^{-1/2} [(2H-1)/Gamma(2H)]^{q/2} gamma^{q(H-1)}.
double nclt_coeff(int q, double H, double gamma);

/// Coefficient of the Brownian limit at H = 1 - 1/(2q), q >= 2:
/// (2 q!)^{1/2} [(2H-1)/Gamma(2H)]^{q/2} gamma^{q(H-1)}.
double boundary_coeff(int q, double H, double gamma);

/// Asymptotic variance factor of t^{-1/2} int_0^t He_q(N_s) ds in the weak
/// regime: 2 q! I_{q,H} / ([2 Gamma(2H+1)]^q gamma).
double weak_limit_variance(int q, double H, double gamma);

/// Every constant for a given (H, q, gamma). Entries that do not apply to the
/// arguments (wrong regime, gamma missing or out of range) are left empty.
struct NormalizationBundle {
  double H;
  int q;
  std::optional<double> gamma;
  Regime regime;
  double mu;
  double sigma;
  double kappa;
  std::optional<double> h;
  std::optional<Eigen::Matrix4d> D;
  Eigen::Matrix<double, 4, 2> Sigma_mat;
  std::optional<Eigen::Vector4d> b;
  std::optional<double> I_qH;
  std::optional<double> xi_integral;
  std::optional<double> limit_coeff;  ///< weak: sqrt(weak_limit_variance); boundary/strong: the displayed coefficient

  double g(double t) const { return constants::g(H, t); }
};

NormalizationBundle bundle(double H, int q, std::optional<double> gamma);

}  // namespace fraclimit::constants
