#include "fraclimit/unitroot.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fraclimit/constants.hpp"
#include "fraclimit/error.hpp"
#include "fraclimit/parallel.hpp"

namespace fraclimit::unitroot {

namespace {

struct Sums {
  double cross = 0.0;
  double square = 0.0;
};

Sums lse_sums(std::span<const double> x) {
  require(x.size() >= 2, ErrorKind::DegenerateSeries, "series needs at least two values");
  Sums s;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    s.cross += x[t + 1] * x[t];
    s.square += x[t] * x[t];
  }
  if (!(s.square > 0.0)) throw Error(ErrorKind::DegenerateSeries, "sum of X_t^2 is zero");
  return s;
}

Eigen::MatrixXd to_matrix(const std::vector<double>& table, std::int64_t reps) {
  Eigen::MatrixXd m(reps, 4);
  for (std::int64_t i = 0; i < reps; ++i) {
    for (int c = 0; c < 4; ++c) m(i, c) = table[static_cast<std::size_t>(i) * 4 + c];
  }
  return m;
}

}  // namespace

std::vector<double> simulate_ar1(const Ar1Config& cfg) {
  require(cfg.n >= 2, ErrorKind::Precondition, "AR(1) needs n >= 2");
  require(cfg.sigma2 >= 0.0, ErrorKind::Precondition, "innovation variance must be nonnegative");
  const double beta = cfg.beta();
  require(std::isfinite(beta), ErrorKind::Precondition, "beta_n must be finite");
  const double sd = std::sqrt(cfg.sigma2);
  const auto n = static_cast<std::size_t>(cfg.n);
  std::vector<double> eps(n);
  if (cfg.innovation == Innovation::iid_normal) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    for (auto& e : eps) e = sd * normal(rng);
  } else {
    // unit-spaced fractional Gaussian noise
    const fracproc::FbmSampler sampler(fracproc::HurstIndex(cfg.H),
                                       fracproc::TimeGrid(static_cast<double>(cfg.n), cfg.n));
    std::vector<double> spare(n);
    sampler.increments_pair(cfg.seed, eps, spare);
    for (auto& e : eps) e *= sd;
  }
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t t = 1; t <= n; ++t) x[t] = beta * x[t - 1] + eps[t - 1];
  return x;
}

double lse(std::span<const double> x) {
  const auto s = lse_sums(x);
  return s.cross / s.square;
}

double tau_hat(std::span<const double> x, double beta) {
  const auto s = lse_sums(x);
  return std::sqrt(s.square) * (s.cross / s.square - beta);
}

TauVector tau_vector(double gamma, std::span<const double> values, double dt) {
  require(values.size() >= 2, ErrorKind::DegeneratePath, "path needs at least two values");
  const std::size_t last = values.size() - 1;
  double q = 0.5 * (values[0] * values[0] + values[last] * values[last]);
  for (std::size_t i = 1; i < last; ++i) q += values[i] * values[i];
  q *= dt;
  if (!(q > 0.0)) throw Error(ErrorKind::DegeneratePath, "int_0^1 Y_s^2 ds is zero");
  TauVector tv;
  tv.Q = q;
  tv.A = 0.5 * values[last] * values[last] + gamma * q;
  const double root = std::sqrt(q);
  tv.tau = {1.0 / root, 1.0 / q, tv.A / root, tv.A / q};
  return tv;
}

TauVector tau_vector(double gamma, const fracproc::GaussPath& path) {
  require(std::abs(path.grid.horizon() - 1.0) <= 1e-12, ErrorKind::Precondition,
          "tau functionals are defined on [0, 1]");
  return tau_vector(gamma, path.values, path.grid.step());
}

double tau_bar(const TauVector& tv) { return tv.tau[2] - 0.5 * tv.tau[0]; }

double tau_bar(double gamma, const fracproc::GaussPath& path) {
  return tau_bar(tau_vector(gamma, path));
}

double tau_bar_direct_gamma0(std::span<const double> values, double dt) {
  const auto tv = tau_vector(0.0, values, dt);
  const double w1 = values.back();
  return 0.5 * (w1 * w1 - 1.0) / std::sqrt(tv.Q);
}

Eigen::MatrixXd tau_sample(double H, double gamma, std::int64_t reps, double dt,
                           std::uint64_t seed) {
  require(reps >= 1, ErrorKind::Precondition, "need at least one replicate");
  if (gamma < 0.0 && -gamma > fracproc::kExplosiveExponentLimit) {
    throw Error(ErrorKind::Overflow, "|gamma| = " + std::to_string(-gamma) +
                                         " exceeds the exponent limit");
  }
  const auto grid = fracproc::TimeGrid::with_step(1.0, dt);
  const fracproc::FbmSampler sampler(fracproc::HurstIndex(H), grid);
  const auto n = static_cast<std::size_t>(grid.steps());
  const auto table = replicate_pairs(reps, seed, 4, [&](std::uint64_t s, std::span<double> a,
                                                         std::span<double> b) {
    thread_local std::vector<double> x;
    thread_local std::vector<double> y;
    x.assign(n + 1, 0.0);
    y.assign(n + 1, 0.0);
    sampler.increments_pair(s, std::span(x).subspan(1), std::span(y).subspan(1));
    fracproc::foup_recursion(gamma, grid.step(), std::span(x).subspan(1));
    fracproc::foup_recursion(gamma, grid.step(), std::span(y).subspan(1));
    const auto ta = tau_vector(gamma, x, grid.step());
    const auto tb = tau_vector(gamma, y, grid.step());
    std::copy(ta.tau.begin(), ta.tau.end(), a.begin());
    std::copy(tb.tau.begin(), tb.tau.end(), b.begin());
  });
  return to_matrix(table, reps);
}

Eigen::MatrixXd thm31_sample(double H, double gamma, std::int64_t reps, double dt,
                             std::uint64_t seed) {
  require(gamma > 1.0, ErrorKind::DomainError, "stable-rate sampling needs gamma > 1");
  const Eigen::Matrix4d D = constants::scaling_matrix_31(H, gamma);
  const Eigen::Vector4d b = constants::b_vec_31(H, gamma);
  Eigen::MatrixXd m = tau_sample(H, gamma, reps, dt, seed);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::Vector4d tau = m.row(i).transpose();
    m.row(i) = (D * (tau - b)).transpose();
  }
  return m;
}

Eigen::MatrixXd thm32_sample(double H, double gamma, std::int64_t reps, double dt,
                             std::uint64_t seed) {
  require(gamma < 0.0, ErrorKind::DomainError, "explosive-rate sampling needs gamma < 0");
  const double g = -gamma;
  // e^{2|g|} appears in the second entry
  if (2.0 * g > fracproc::kExplosiveExponentLimit) {
    throw Error(ErrorKind::Overflow, "e^{2|gamma|} overflows for |gamma| = " + std::to_string(g));
  }
  const double a = 2.0 * H + 1.0;
  const std::array<double, 4> scale{std::pow(g, -a / 2.0) * std::exp(g),
                                    std::pow(g, -a) * std::exp(2.0 * g),
                                    std::pow(g, (2.0 * H - 1.0) / 2.0), std::exp(g) / g};
  Eigen::MatrixXd m = tau_sample(H, gamma, reps, dt, seed);
  for (int c = 0; c < 4; ++c) m.col(c) *= scale[c];
  return m;
}

std::array<double, 4> thm32_limit_scale(double H) {
  const double g = std::tgamma(2.0 * H + 1.0);
  return {2.0 / std::sqrt(g), 4.0 / g, std::sqrt(g), 2.0};
}

std::vector<double> tau_bar_sample(double gamma, std::int64_t reps, double dt,
                                   std::uint64_t seed) {
  const Eigen::MatrixXd m = tau_sample(0.5, gamma, reps, dt, seed);
  std::vector<double> out(static_cast<std::size_t>(reps));
  for (std::int64_t i = 0; i < reps; ++i) out[i] = m(i, 2) - 0.5 * m(i, 0);
  return out;
}

DiscreteCheck discrete_check(double gamma, std::int64_t n, std::int64_t reps, double dt,
                             std::uint64_t seed) {
  require(reps >= 2, ErrorKind::Precondition, "need at least two replicates");
  std::vector<double> disc(static_cast<std::size_t>(reps));
  parallel_for(disc.size(), [&](std::size_t i) {
    Ar1Config cfg;
    cfg.n = n;
    cfg.gamma = gamma;
    cfg.seed = derive_seed(seed, i);
    const auto x = simulate_ar1(cfg);
    disc[i] = tau_hat(x, cfg.beta());
  });
  // the continuous side uses its own seed stream
  const auto cont = tau_bar_sample(gamma, reps, dt, derive_seed(~seed, 0));
  DiscreteCheck out;
  out.discrete = stats::empirical_summary(disc);
  out.continuous = stats::empirical_summary(cont);
  out.ks_two_sample = stats::ks_two_sample(disc, cont);
  out.ks_critical_1pct = 1.628 * std::sqrt(2.0 / static_cast<double>(reps));
  return out;
}

}  // namespace fraclimit::unitroot
