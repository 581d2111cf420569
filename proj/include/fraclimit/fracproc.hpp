#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fraclimit/hermite.hpp"

namespace fraclimit::fracproc {

/// Hurst index, strictly inside (0, 1).
class HurstIndex {
 public:
  explicit HurstIndex(double H);
  double value() const noexcept { return H_; }
  operator double() const noexcept { return H_; }

 private:
  double H_;
};

/// Uniform grid t_i = i * T / n, i = 0..n.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::int64_t steps);

  double horizon() const noexcept { return horizon_; }
  std::int64_t steps() const noexcept { return steps_; }
  double step() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double time(std::int64_t i) const noexcept { return step() * static_cast<double>(i); }

  /// Grid with spacing dt covering [0, horizon]; horizon is rounded up to a whole step.
  static TimeGrid with_step(double horizon, double dt);

 private:
  double horizon_;
  std::int64_t steps_;
};

enum class PathKind { fbm, foup, stationary_foup, brownian };

std::string_view to_string(PathKind kind) noexcept;

struct GaussPath {
  TimeGrid grid;
  std::vector<double> values;  ///< n + 1 values at grid.time(0..n)
  PathKind kind;
};

struct FoupSpec {
  HurstIndex H;
  double gamma;
  double burn_in;  ///< time units discarded before t = 0 (stationary variant)

  /// burn-in of 12 / gamma, which bounds the initial-condition term by e^{-12}
  static FoupSpec with_default_burn_in(double H, double gamma);
};

/// E B_t B_s = (|t|^{2H} + |s|^{2H} - |t - s|^{2H}) / 2.
double fbm_cov(HurstIndex H, double s, double t);

/// Unit-step fractional Gaussian noise autocovariance
/// rho(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocov(HurstIndex H, std::int64_t k);

enum class SamplerMethod { automatic, circulant, dense };

/// Exact sampler of fractional Brownian motion on a fixed grid. The increment
/// autocovariance is embedded in a circulant of size 2m (m the next power of
/// two at or above n) and diagonalized once by FFT; each draw costs one FFT of
/// size 2m and yields two independent paths (real and imaginary parts). When
/// the embedding has an eigenvalue below -1e-10 and n <= 2048, the sampler
/// falls back to a Cholesky factor of the dense increment covariance.
class FbmSampler {
 public:
  FbmSampler(HurstIndex H, TimeGrid grid, SamplerMethod method = SamplerMethod::automatic);
  ~FbmSampler();
  FbmSampler(const FbmSampler&) = delete;
  FbmSampler& operator=(const FbmSampler&) = delete;
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  HurstIndex hurst() const noexcept;
  const TimeGrid& grid() const noexcept;
  /// circulant or dense, after any fallback
  SamplerMethod method() const noexcept;
  double min_embedding_eigenvalue() const noexcept;

  GaussPath sample(std::uint64_t seed) const;
  /// Two independent paths from one seed.
  std::pair<GaussPath, GaussPath> sample_pair(std::uint64_t seed) const;

  /// Writes n unit-free increments (already scaled by dt^H) of two independent
  /// paths into first / second. Allocation-free apart from FFT scratch.
  void increments_pair(std::uint64_t seed, std::span<double> first,
                       std::span<double> second) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GaussPath fbm_sample(HurstIndex H, const TimeGrid& grid, std::uint64_t seed);

/// Upper bound on |gamma| * T before e^{|gamma| T} overflows a double.
inline constexpr double kExplosiveExponentLimit = 700.0;

/// FOU path B_{gamma,t} = B_t - gamma int_0^t e^{-gamma(t-s)} B_s ds with the
/// driving path interpolated linearly between grid points. The exponential
/// weights make the recursion exact for that interpolation:
///   Y_{k+1} = e^{-gamma dt} Y_k + (1 - e^{-gamma dt}) / (gamma dt) * (B_{k+1} - B_k).
/// Throws Overflow when gamma < 0 and |gamma| T exceeds kExplosiveExponentLimit.
GaussPath foup_from_fbm(double gamma, const GaussPath& fbm);

/// In-place form on raw values: increments[k] = B_{k+1} - B_k in, FOU levels
/// Y_1..Y_n out (Y_0 = 0 implied).
void foup_recursion(double gamma, double dt, std::span<double> increments);

struct StationarySample {
  GaussPath path;
  double initial_condition_bound;  ///< e^{-gamma * burn_in}
  bool burn_in_too_short;          ///< bound above 1e-4
};

/// Unit-variance stationary FOU process: zero-start FOU on [-burn_in, T],
/// scaled by gamma^H mu_H^{1/2}, burn-in window dropped.
class StationaryFoupSampler {
 public:
  StationaryFoupSampler(FoupSpec spec, TimeGrid grid);

  const FoupSpec& spec() const noexcept { return spec_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  std::int64_t burn_in_steps() const noexcept { return burn_steps_; }
  double initial_condition_bound() const noexcept;
  bool burn_in_too_short() const noexcept { return initial_condition_bound() > 1e-4; }

  StationarySample sample(std::uint64_t seed) const;
  std::pair<GaussPath, GaussPath> sample_pair(std::uint64_t seed) const;

  /// Fills first / second with the n + 1 grid values of two independent paths.
  /// scratch buffers are resized as needed and may be reused between calls.
  void sample_pair_into(std::uint64_t seed, std::vector<double>& first,
                        std::vector<double>& second) const;

 private:
  FoupSpec spec_;
  TimeGrid grid_;
  std::int64_t burn_steps_;
  FbmSampler fbm_;
};

StationarySample foup_stationary_sample(const FoupSpec& spec, const TimeGrid& grid,
                                        std::uint64_t seed);

/// Covariance r_{H,gamma}(t) of the unit-variance stationary FOU process as the
/// Fourier integral of its spectral density
///   f(xi) = gamma^{2H} sin(pi H) |xi|^{1-2H} / (pi (gamma^2 + xi^2)).
/// Throws QuadratureFailed when the error estimate exceeds 1e-8.
double foup_cov(HurstIndex H, double gamma, double t);

/// Same covariance from the time-domain bracket fou_bracket(H, gamma t) / (2 Gamma(2H+1)).
double foup_cov_time_domain(HurstIndex H, double gamma, double t);

/// int_R r_{H,gamma}^2 = gamma^{-1} sin^2(pi H) (4 / pi) J(H). DivergentIntegral for H >= 3/4.
double foup_cov_sq_integral(HurstIndex H, double gamma);

/// r_{H,gamma} packaged for hermite::sigma_weak_sq: e^{-gamma |t|} at H = 1/2,
/// foup_cov otherwise, with decay exponent 2 - 2H (infinite at H = 1/2).
hermite::Covariance stationary_foup_covariance(HurstIndex H, double gamma);

}  // namespace fraclimit::fracproc
