#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fraclimit/fracproc.hpp"
#include "fraclimit/stats.hpp"

namespace fraclimit::unitroot {

/// Step used on [0, 1] for the continuous-time functionals.
inline constexpr double kDefaultStep = 1e-4;

enum class Innovation { iid_normal, fgn };

/// X_t = beta_n X_{t-1} + eps_t, beta_n = 1 - gamma / n, X_0 = 0.
struct Ar1Config {
  std::int64_t n = 1000;
  double gamma = 0.0;
  Innovation innovation = Innovation::iid_normal;
  double H = 0.5;  ///< fgn innovations only
  double sigma2 = 1.0;
  std::uint64_t seed = 0;

  double beta() const { return 1.0 - gamma / static_cast<double>(n); }
};

/// X_0..X_n.
std::vector<double> simulate_ar1(const Ar1Config& cfg);

/// sum X_{t+1} X_t / sum X_t^2 over t = 0..n-1. Throws DegenerateSeries.
double lse(std::span<const double> x);

/// (sum X_t^2)^{1/2} (lse - beta). Throws DegenerateSeries.
double tau_hat(std::span<const double> x, double beta);

/// (Q^{-1/2}, Q^{-1}, A Q^{-1/2}, A Q^{-1}) with Q = int_0^1 Y_s^2 ds
/// (trapezoid) and A = Y_1^2 / 2 + gamma Q.
struct TauVector {
  std::array<double, 4> tau{};
  double Q = 0.0;
  double A = 0.0;
};

/// Throws DegeneratePath when Q = 0 and Precondition unless the grid spans [0, 1].
TauVector tau_vector(double gamma, const fracproc::GaussPath& path);
TauVector tau_vector(double gamma, std::span<const double> values, double dt);

/// tau_3 - tau_1 / 2.
double tau_bar(double gamma, const fracproc::GaussPath& path);
double tau_bar(const TauVector& tv);

/// (W_1^2 - 1) / 2 times Q^{-1/2}, assembled directly from the path.
double tau_bar_direct_gamma0(std::span<const double> values, double dt);

/// reps x 4 sample of tau_H(gamma) on FOU paths over [0, 1].
Eigen::MatrixXd tau_sample(double H, double gamma, std::int64_t reps, double dt,
                           std::uint64_t seed);

/// D_H(gamma) (tau_H(gamma) - b_H(gamma)) per replicate, gamma > 1.
Eigen::MatrixXd thm31_sample(double H, double gamma, std::int64_t reps, double dt,
                             std::uint64_t seed);

/// diag(|g|^{-(2H+1)/2} e^{|g|}, |g|^{-2H-1} e^{2|g|}, |g|^{(2H-1)/2}, |g|^{-1} e^{|g|}) tau_H(gamma)
/// per replicate, gamma < 0. Throws Overflow past the exponent limit.
Eigen::MatrixXd thm32_sample(double H, double gamma, std::int64_t reps, double dt,
                             std::uint64_t seed);

/// diag(2 Gamma(2H+1)^{-1/2}, 4 Gamma(2H+1)^{-1}, Gamma(2H+1)^{1/2}, 2) of the
/// limit (|Z|^{-1}, Z^{-2}, Y sign Z, Y / Z).
std::array<double, 4> thm32_limit_scale(double H);

/// tau_bar(gamma) per replicate, H = 1/2.
std::vector<double> tau_bar_sample(double gamma, std::int64_t reps, double dt, std::uint64_t seed);

struct DiscreteCheck {
  stats::EmpiricalSummary discrete;    ///< tau_hat_n over AR(1) replicates
  stats::EmpiricalSummary continuous;  ///< tau_bar(gamma) over FOU replicates
  double ks_two_sample = 0.0;
  double ks_critical_1pct = 0.0;
};

/// tau_hat_n against tau_bar(gamma) at H = 1/2.
DiscreteCheck discrete_check(double gamma, std::int64_t n, std::int64_t reps, double dt,
                             std::uint64_t seed);

}  // namespace fraclimit::unitroot
