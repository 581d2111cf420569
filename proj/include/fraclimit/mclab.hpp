#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fraclimit/fracproc.hpp"
#include "fraclimit/hermite.hpp"
#include "fraclimit/stats.hpp"

namespace fraclimit::mclab {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr double kDefaultStep = 0.05;
inline constexpr std::int64_t kDefaultReps = 2000;

/// Trapezoidal int_0^{t u} f(N_s) ds over a sampled path of horizon t. The
/// last partial interval uses the linearly interpolated path value.
/// Throws GridTooShort for u > 1.
double integrate_functional(const fracproc::GaussPath& path,
                            const std::function<double(double)>& f, double u);

/// Trapezoidal integral of He_q over equally spaced values.
double integrate_hermite(std::span<const double> values, int q, double dt);

/// L(t) = int_0^t r_{H,gamma}^q(u) du, closed form at H = 1/2.
double L_eval(double H, double gamma, int q, double t);
/// int_0^t |r_{H,gamma}(u)|^q du.
double L_abs_eval(double H, double gamma, int q, double t);
/// 2 q! int_0^t (t - u) r^q(u) du, the exact variance of int_0^t He_q(N_s) ds.
double exact_integral_variance(double H, double gamma, int q, double t);

/// Shared Monte Carlo settings. Replicate i uses fraclimit::derive_seed(seed, i / 2);
/// the two replicates of a seed come out of one FFT.
struct McConfig {
  double dt = kDefaultStep;
  std::int64_t reps = kDefaultReps;
  std::uint64_t seed = kDefaultSeed;
};

struct ScalingRow {
  double t = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double L = 0.0;
  double L_abs = 0.0;
  double target = 0.0;       ///< 2 q! t L(t)
  double ratio = 0.0;        ///< variance / target
  double ratio_se = 0.0;
  double exact_ratio = 0.0;  ///< variance / exact_integral_variance
};

struct ScalingStudy {
  int q = 0;
  double H = 0.0;
  double gamma = 0.0;
  McConfig mc;
  std::vector<ScalingRow> rows;
  double log_ratio_slope = 0.0;  ///< least-squares slope of log ratio against log t
  double burn_in = 0.0;
};

/// Var of int_0^t He_q(N_s) ds on stationary FOU paths for each t in the
/// ladder, one set of paths shared across the ladder.
ScalingStudy variance_scaling(int q, double H, double gamma, std::span<const double> t_ladder,
                              const McConfig& mc);

struct ExperimentResult {
  stats::EmpiricalSummary summary;
  std::vector<double> sample;
  double target_variance = 0.0;  ///< variance the raw statistic is normalized by
  double norming = 0.0;          ///< multiplier applied to the raw integral
  bool degenerate_limit = false;
};

struct CltResult : ExperimentResult {
  int rank = 0;
  hermite::WeakVariance weak;   ///< sigma^2 from the Hermite series
  double closed_form = 0.0;     ///< c_q^2/q!^2 times the I_{q,H} form, rank term only
};

/// Summary of t^{-1/2} int_0^t f(N_s) ds / sigma. Throws WrongRegime unless
/// the rank of f and H give the weak regime. When sigma vanishes the statistic
/// is left unnormalized and degenerate_limit is set.
CltResult clt_experiment(const hermite::HermiteExpansion& f, double H, double gamma, double t,
                         const McConfig& mc);

/// Summary of (t log t)^{-1/2} int_0^t He_q(N_s) ds / boundary_coeff at
/// H = 1 - 1/(2q). Throws WrongRegime for q < 2.
ExperimentResult boundary_experiment(int q, double gamma, double t, const McConfig& mc);

/// Summary of t^{1-2H} int_0^t [B_{gamma,s}^2 - Gamma(2H+1) / (2 gamma^{2H})] ds
/// on zero-start FOU paths, target variance (h_H(gamma) sigma_H)^2.
/// Throws WrongRegime unless q = 2 and H > 3/4.
ExperimentResult nclt_experiment(int q, double H, double gamma, double t, const McConfig& mc);

struct SmoothingRow {
  double t = 0.0;
  double sup_error = 0.0;
  double v_at_sup = 0.0;
  double bound = 0.0;  ///< t^{-beta} C_T / gamma^{1+beta}
};

struct SmoothingReport {
  double gamma = 0.0;
  double C_T = 1.0;
  double beta = 1.0;
  std::vector<SmoothingRow> rows;
};

/// sup_{v in [0,1]} |t int_0^v e^{gamma t (s - v)} psi(s) ds - psi(v) / gamma|
/// on a grid of v_points values of v.
SmoothingReport smoothing_deterministic(const std::function<double(double)>& psi, double gamma,
                                        std::span<const double> t_ladder, double C_T = 1.0,
                                        double beta = 1.0, int v_points = 201);

struct SmoothingStochastic {
  ExperimentResult result;  ///< summary of t^{-H} int_0^t B_{gamma,s} ds
  double ratio = 0.0;       ///< empirical variance times gamma^2
  double ratio_se = 0.0;
};

SmoothingStochastic smoothing_stochastic(double H, double gamma, double t, const McConfig& mc);

}  // namespace fraclimit::mclab
