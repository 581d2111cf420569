#include "fraclimit/fracproc.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "fraclimit/constants.hpp"
#include "fraclimit/error.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit::fracproc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEmbeddingFloor = -1e-10;
constexpr std::int64_t kDenseLimit = 2048;

// FFTW planning and plan destruction are not thread safe; execution on
// distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

std::int64_t next_pow2(std::int64_t n) {
  std::int64_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// (1 - e^{-x}) / x, continuous at 0
double phi(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

}  // namespace

HurstIndex::HurstIndex(double H) : H_(H) {
  require(H > 0.0 && H < 1.0, ErrorKind::Precondition,
          "Hurst index must lie strictly inside (0, 1), got " + std::to_string(H));
}

TimeGrid::TimeGrid(double horizon, std::int64_t steps) : horizon_(horizon), steps_(steps) {
  require(horizon > 0.0 && std::isfinite(horizon), ErrorKind::Precondition,
          "grid horizon must be positive");
  require(steps >= 1, ErrorKind::Precondition, "grid needs at least one step");
}

TimeGrid TimeGrid::with_step(double horizon, double dt) {
  require(dt > 0.0, ErrorKind::Precondition, "time step must be positive");
  const auto steps = static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-9));
  return TimeGrid(dt * static_cast<double>(std::max<std::int64_t>(steps, 1)),
                  std::max<std::int64_t>(steps, 1));
}

std::string_view to_string(PathKind kind) noexcept {
  switch (kind) {
    case PathKind::fbm: return "fbm";
    case PathKind::foup: return "foup";
    case PathKind::stationary_foup: return "stationary_foup";
    case PathKind::brownian: return "brownian";
  }
  return "unknown";
}

FoupSpec FoupSpec::with_default_burn_in(double H, double gamma) {
  require(gamma > 0.0, ErrorKind::Precondition, "stationary FOU needs gamma > 0");
  return FoupSpec{HurstIndex(H), gamma, 12.0 / gamma};
}

double fbm_cov(HurstIndex H, double s, double t) {
  const double a = 2.0 * H.value();
  return 0.5 * (std::pow(std::abs(t), a) + std::pow(std::abs(s), a) - std::pow(std::abs(t - s), a));
}

double fgn_autocov(HurstIndex H, std::int64_t k) {
  const double a = 2.0 * H.value();
  const double x = std::abs(static_cast<double>(k));
  return 0.5 * (std::pow(x + 1.0, a) - 2.0 * std::pow(x, a) + std::pow(std::abs(x - 1.0), a));
}

// ---------------------------------------------------------------------------
// FbmSampler

struct FbmSampler::Impl {
  HurstIndex H;
  TimeGrid grid;
  SamplerMethod method = SamplerMethod::circulant;
  std::int64_t n = 0;
  std::int64_t size = 0;          // circulant size 2m
  std::vector<double> amplitude;  // sqrt(lambda_k / size)
  double min_eigenvalue = 0.0;
  fftw_plan plan = nullptr;
  Eigen::MatrixXd chol;  // dense fallback: lower Cholesky factor
  double scale = 1.0;    // dt^H

  Impl(HurstIndex h, TimeGrid g) : H(h), grid(g) {}

  ~Impl() {
    if (plan) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }

  bool build_circulant() {
    const std::int64_t m = next_pow2(n);
    size = 2 * m;
    FftwBuffer buf(static_cast<std::size_t>(size));
    {
      std::lock_guard lock(fftw_planner_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(size), buf.data, buf.data, FFTW_FORWARD,
                              FFTW_ESTIMATE);
    }
    require(plan != nullptr, ErrorKind::EmbeddingFailed, "FFT plan creation failed");
    for (std::int64_t j = 0; j < size; ++j) {
      const std::int64_t lag = j <= m ? j : size - j;
      buf.data[j][0] = fgn_autocov(H, lag);
      buf.data[j][1] = 0.0;
    }
    fftw_execute_dft(plan, buf.data, buf.data);
    amplitude.resize(static_cast<std::size_t>(size));
    min_eigenvalue = buf.data[0][0];
    for (std::int64_t k = 0; k < size; ++k) {
      const double lambda = buf.data[k][0];
      min_eigenvalue = std::min(min_eigenvalue, lambda);
      amplitude[k] = std::sqrt(std::max(lambda, 0.0) / static_cast<double>(size));
    }
    return min_eigenvalue >= kEmbeddingFloor;
  }

  void build_dense() {
    Eigen::MatrixXd cov(n, n);
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) cov(i, j) = fgn_autocov(H, i - j);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    require(llt.info() == Eigen::Success, ErrorKind::EmbeddingFailed,
            "dense fGn covariance is not positive definite");
    chol = llt.matrixL();
    method = SamplerMethod::dense;
  }
};

FbmSampler::FbmSampler(HurstIndex H, TimeGrid grid, SamplerMethod method)
    : impl_(std::make_unique<Impl>(H, grid)) {
  impl_->n = grid.steps();
  impl_->scale = std::pow(grid.step(), H.value());
  if (method == SamplerMethod::dense) {
    require(impl_->n <= kDenseLimit, ErrorKind::EmbeddingFailed,
            "dense sampling limited to 2048 steps");
    impl_->build_dense();
    return;
  }
  if (impl_->build_circulant()) {
    impl_->method = SamplerMethod::circulant;
    return;
  }
  if (method == SamplerMethod::circulant || impl_->n > kDenseLimit) {
    throw Error(ErrorKind::EmbeddingFailed,
                "circulant embedding has eigenvalue " + std::to_string(impl_->min_eigenvalue));
  }
  impl_->build_dense();
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

HurstIndex FbmSampler::hurst() const noexcept { return impl_->H; }
const TimeGrid& FbmSampler::grid() const noexcept { return impl_->grid; }
SamplerMethod FbmSampler::method() const noexcept { return impl_->method; }
double FbmSampler::min_embedding_eigenvalue() const noexcept { return impl_->min_eigenvalue; }

void FbmSampler::increments_pair(std::uint64_t seed, std::span<double> first,
                                 std::span<double> second) const {
  const Impl& s = *impl_;
  require(static_cast<std::int64_t>(first.size()) == s.n &&
              static_cast<std::int64_t>(second.size()) == s.n,
          ErrorKind::Precondition, "increment buffers must hold one value per step");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  if (s.method == SamplerMethod::dense) {
    Eigen::VectorXd z1(s.n);
    Eigen::VectorXd z2(s.n);
    for (std::int64_t i = 0; i < s.n; ++i) z1(i) = normal(rng);
    for (std::int64_t i = 0; i < s.n; ++i) z2(i) = normal(rng);
    const Eigen::VectorXd x1 = s.chol.triangularView<Eigen::Lower>() * z1;
    const Eigen::VectorXd x2 = s.chol.triangularView<Eigen::Lower>() * z2;
    for (std::int64_t i = 0; i < s.n; ++i) {
      first[i] = s.scale * x1(i);
      second[i] = s.scale * x2(i);
    }
    return;
  }
  FftwBuffer buf(static_cast<std::size_t>(s.size));
  for (std::int64_t k = 0; k < s.size; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    buf.data[k][0] = s.amplitude[k] * re;
    buf.data[k][1] = s.amplitude[k] * im;
  }
  fftw_execute_dft(s.plan, buf.data, buf.data);
  for (std::int64_t i = 0; i < s.n; ++i) {
    first[i] = s.scale * buf.data[i][0];
    second[i] = s.scale * buf.data[i][1];
  }
}

std::pair<GaussPath, GaussPath> FbmSampler::sample_pair(std::uint64_t seed) const {
  const auto n = static_cast<std::size_t>(impl_->n);
  std::vector<double> a(n + 1, 0.0);
  std::vector<double> b(n + 1, 0.0);
  increments_pair(seed, std::span(a).subspan(1), std::span(b).subspan(1));
  for (std::size_t i = 1; i <= n; ++i) {
    a[i] += a[i - 1];
    b[i] += b[i - 1];
  }
  const PathKind kind = impl_->H.value() == 0.5 ? PathKind::brownian : PathKind::fbm;
  return {GaussPath{impl_->grid, std::move(a), kind}, GaussPath{impl_->grid, std::move(b), kind}};
}

GaussPath FbmSampler::sample(std::uint64_t seed) const { return sample_pair(seed).first; }

GaussPath fbm_sample(HurstIndex H, const TimeGrid& grid, std::uint64_t seed) {
  return FbmSampler(H, grid).sample(seed);
}

// ---------------------------------------------------------------------------
// FOU paths

void foup_recursion(double gamma, double dt, std::span<double> increments) {
  const double x = gamma * dt;
  const double decay = std::exp(-x);
  const double weight = phi(x);
  double y = 0.0;
  for (double& v : increments) {
    y = decay * y + weight * v;
    v = y;
  }
}

GaussPath foup_from_fbm(double gamma, const GaussPath& fbm) {
  require(fbm.kind == PathKind::fbm || fbm.kind == PathKind::brownian, ErrorKind::Precondition,
          "foup_from_fbm needs a fractional Brownian path");
  require(fbm.values.size() == static_cast<std::size_t>(fbm.grid.steps() + 1),
          ErrorKind::Precondition, "path length does not match its grid");
  if (gamma < 0.0 && -gamma * fbm.grid.horizon() > kExplosiveExponentLimit) {
    throw Error(ErrorKind::Overflow, "|gamma| T = " + std::to_string(-gamma * fbm.grid.horizon()) +
                                         " exceeds the exponent limit");
  }
  GaussPath out{fbm.grid, std::vector<double>(fbm.values.size(), 0.0), PathKind::foup};
  for (std::size_t i = 1; i < fbm.values.size(); ++i) {
    out.values[i] = fbm.values[i] - fbm.values[i - 1];
  }
  foup_recursion(gamma, fbm.grid.step(), std::span(out.values).subspan(1));
  return out;
}

StationaryFoupSampler::StationaryFoupSampler(FoupSpec spec, TimeGrid grid)
    : spec_(spec),
      grid_(grid),
      burn_steps_(0),
      fbm_(spec.H, TimeGrid(grid.horizon() + grid.step(), grid.steps() + 1)) {
  require(spec.gamma > 0.0, ErrorKind::Precondition, "stationary FOU needs gamma > 0");
  require(spec.burn_in >= 0.0, ErrorKind::Precondition, "burn-in must be nonnegative");
  burn_steps_ = static_cast<std::int64_t>(std::ceil(spec.burn_in / grid.step() - 1e-9));
  const std::int64_t total = grid.steps() + burn_steps_;
  fbm_ = FbmSampler(spec.H, TimeGrid(grid.step() * static_cast<double>(total), total));
}

double StationaryFoupSampler::initial_condition_bound() const noexcept {
  return std::exp(-spec_.gamma * grid_.step() * static_cast<double>(burn_steps_));
}

void StationaryFoupSampler::sample_pair_into(std::uint64_t seed, std::vector<double>& first,
                                             std::vector<double>& second) const {
  const std::int64_t total = grid_.steps() + burn_steps_;
  std::vector<double> a(static_cast<std::size_t>(total));
  std::vector<double> b(static_cast<std::size_t>(total));
  fbm_.increments_pair(seed, a, b);
  foup_recursion(spec_.gamma, grid_.step(), a);
  foup_recursion(spec_.gamma, grid_.step(), b);
  const double scale = std::pow(spec_.gamma, spec_.H.value()) * std::sqrt(constants::mu(spec_.H));
  const auto n = static_cast<std::size_t>(grid_.steps());
  first.assign(n + 1, 0.0);
  second.assign(n + 1, 0.0);
  // FOU level at grid time i is the recursion output after burn_steps + i increments
  for (std::size_t i = 0; i <= n; ++i) {
    const std::int64_t idx = burn_steps_ + static_cast<std::int64_t>(i) - 1;
    first[i] = idx >= 0 ? scale * a[idx] : 0.0;
    second[i] = idx >= 0 ? scale * b[idx] : 0.0;
  }
}

std::pair<GaussPath, GaussPath> StationaryFoupSampler::sample_pair(std::uint64_t seed) const {
  std::vector<double> a;
  std::vector<double> b;
  sample_pair_into(seed, a, b);
  return {GaussPath{grid_, std::move(a), PathKind::stationary_foup},
          GaussPath{grid_, std::move(b), PathKind::stationary_foup}};
}

StationarySample StationaryFoupSampler::sample(std::uint64_t seed) const {
  return {sample_pair(seed).first, initial_condition_bound(), burn_in_too_short()};
}

StationarySample foup_stationary_sample(const FoupSpec& spec, const TimeGrid& grid,
                                        std::uint64_t seed) {
  return StationaryFoupSampler(spec, grid).sample(seed);
}

// ---------------------------------------------------------------------------
// Covariance of the stationary process

double foup_cov(HurstIndex H, double gamma, double t) {
  require(gamma > 0.0, ErrorKind::Precondition, "stationary covariance needs gamma > 0");
  const double h = H.value();
  const double s = gamma * std::abs(t);
  const double prefactor = 2.0 * std::sin(kPi * h) / kPi;
  if (s == 0.0) {
    // int_0^inf xi^{1-2H}/(1+xi^2) with [1, inf) folded onto [0, 1]
    const auto e = quad::tanh_sinh(
        [h](double x) { return (std::pow(x, 1.0 - 2.0 * h) + std::pow(x, 2.0 * h - 1.0)) / (1.0 + x * x); },
        0.0, 1.0);
    return prefactor * e.value;
  }
  const auto e = quad::fourier_cos(
      [h](double xi) { return std::pow(xi, 1.0 - 2.0 * h) / (1.0 + xi * xi); }, s);
  if (!(prefactor * e.abs_error <= 1e-8) || !std::isfinite(e.value)) {
    throw Error(ErrorKind::QuadratureFailed,
                "spectral integral at gamma t = " + std::to_string(s) + " did not converge");
  }
  return prefactor * e.value;
}

double foup_cov_time_domain(HurstIndex H, double gamma, double t) {
  require(gamma > 0.0, ErrorKind::Precondition, "stationary covariance needs gamma > 0");
  return constants::fou_bracket(H, gamma * std::abs(t)) / (2.0 * std::tgamma(2.0 * H + 1.0));
}

double foup_cov_sq_integral(HurstIndex H, double gamma) {
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  if (H.value() >= 0.75) {
    throw Error(ErrorKind::DivergentIntegral, "int r^2 is finite only for H < 3/4");
  }
  const double s = std::sin(kPi * H.value());
  return s * s * (4.0 / kPi) * constants::xi_integral(H) / gamma;
}

hermite::Covariance stationary_foup_covariance(HurstIndex H, double gamma) {
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  if (H.value() == 0.5) {
    return {[gamma](double t) { return std::exp(-gamma * std::abs(t)); },
            std::numeric_limits<double>::infinity()};
  }
  return {[H, gamma](double t) { return foup_cov(H, gamma, t); }, 2.0 - 2.0 * H.value()};
}

}  // namespace fraclimit::fracproc
