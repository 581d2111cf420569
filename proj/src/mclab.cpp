#include "fraclimit/mclab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclimit/constants.hpp"
#include "fraclimit/error.hpp"
#include "fraclimit/parallel.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit::mclab {

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// He_q(x) by the three-term recurrence without the degree check
double hermite_q(int q, double x) {
  double pm1 = 1.0;
  double p = x;
  if (q == 0) return 1.0;
  for (int k = 1; k < q; ++k) {
    const double next = x * p - k * pm1;
    pm1 = p;
    p = next;
  }
  return p;
}

void check_mc(const McConfig& mc, std::int64_t min_reps = 2) {
  require(mc.dt > 0.0, ErrorKind::Precondition, "time step must be positive");
  require(mc.reps >= min_reps, ErrorKind::Precondition,
          "need at least " + std::to_string(min_reps) + " replicates");
}

std::vector<double> column(const std::vector<double>& table, std::size_t width, std::size_t c) {
  std::vector<double> out(table.size() / width);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = table[i * width + c];
  return out;
}

struct CovIntegrals {
  double L = 0.0;
  double L_abs = 0.0;
  double exact_variance = 0.0;
};

CovIntegrals cov_integrals(double H, double gamma, int q, double t) {
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  require(q >= 1, ErrorKind::Precondition, "q must be at least 1");
  require(t >= 0.0, ErrorKind::Precondition, "t must be nonnegative");
  const fracproc::HurstIndex hurst(H);
  if (t == 0.0) return {};
  if (H == 0.5) {
    const double a = q * gamma;
    const double L = -std::expm1(-a * t) / a;
    return {L, L, 2.0 * factorial(q) * (t / a + std::expm1(-a * t) / (a * a))};
  }
  // unit-rate coordinates s = gamma u
  const double end = gamma * t;
  const auto rule = quad::geometric_gauss_rule(end, 1e-6);
  CovIntegrals out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    const double r = fracproc::foup_cov(hurst, 1.0, s);
    const double rq = std::pow(r, q);
    out.L += rule.weights[i] * rq;
    out.L_abs += rule.weights[i] * std::abs(rq);
    out.exact_variance += rule.weights[i] * (end - s) * rq;
  }
  out.L /= gamma;
  out.L_abs /= gamma;
  out.exact_variance *= 2.0 * factorial(q) / (gamma * gamma);
  return out;
}

// Trapezoid over values spaced dt, up to and including index last.
template <class F>
double trapezoid(std::span<const double> v, std::size_t last, double dt, F&& f) {
  if (last == 0) return 0.0;
  double s = 0.5 * (f(v[0]) + f(v[last]));
  for (std::size_t i = 1; i < last; ++i) s += f(v[i]);
  return s * dt;
}

ExperimentResult finish(std::vector<double> sample, double target_variance, double norming,
                        bool degenerate) {
  ExperimentResult r;
  r.summary = stats::empirical_summary(sample);
  r.sample = std::move(sample);
  r.target_variance = target_variance;
  r.norming = norming;
  r.degenerate_limit = degenerate;
  return r;
}

// Stationary FOU paths on [0, t]: fills one statistic per replicate.
std::vector<double> stationary_statistic(double H, double gamma, double t, const McConfig& mc,
                                         const std::function<double(std::span<const double>)>& stat) {
  const auto grid = fracproc::TimeGrid::with_step(t, mc.dt);
  const fracproc::StationaryFoupSampler sampler(fracproc::FoupSpec::with_default_burn_in(H, gamma),
                                                grid);
  return replicate_pairs(mc.reps, mc.seed, 1, [&](std::uint64_t s, std::span<double> a,
                                                   std::span<double> b) {
    thread_local std::vector<double> x;
    thread_local std::vector<double> y;
    sampler.sample_pair_into(s, x, y);
    a[0] = stat(x);
    b[0] = stat(y);
  });
}

// Zero-start FOU paths B_{gamma, .} on [0, t], n + 1 grid values each.
std::vector<double> foup_statistic(double H, double gamma, double t, const McConfig& mc,
                                   const std::function<double(std::span<const double>)>& stat) {
  const auto grid = fracproc::TimeGrid::with_step(t, mc.dt);
  const fracproc::FbmSampler sampler(fracproc::HurstIndex(H), grid);
  const auto n = static_cast<std::size_t>(grid.steps());
  return replicate_pairs(mc.reps, mc.seed, 1, [&](std::uint64_t s, std::span<double> a,
                                                   std::span<double> b) {
    thread_local std::vector<double> x;
    thread_local std::vector<double> y;
    x.assign(n + 1, 0.0);
    y.assign(n + 1, 0.0);
    sampler.increments_pair(s, std::span(x).subspan(1), std::span(y).subspan(1));
    fracproc::foup_recursion(gamma, grid.step(), std::span(x).subspan(1));
    fracproc::foup_recursion(gamma, grid.step(), std::span(y).subspan(1));
    a[0] = stat(x);
    b[0] = stat(y);
  });
}

}  // namespace

double integrate_functional(const fracproc::GaussPath& path,
                            const std::function<double(double)>& f, double u) {
  require(u >= 0.0, ErrorKind::Precondition, "u must be nonnegative");
  if (u > 1.0) {
    throw Error(ErrorKind::GridTooShort, "path ends before t u with u = " + std::to_string(u));
  }
  const auto& v = path.values;
  const double dt = path.grid.step();
  const double end = u * static_cast<double>(path.grid.steps());
  const auto whole = static_cast<std::size_t>(std::floor(end));
  double s = trapezoid(std::span<const double>(v), whole, dt, f);
  const double frac = end - static_cast<double>(whole);
  if (frac > 0.0 && whole + 1 < v.size()) {
    const double x = v[whole] + frac * (v[whole + 1] - v[whole]);
    s += 0.5 * frac * dt * (f(v[whole]) + f(x));
  }
  return s;
}

double integrate_hermite(std::span<const double> values, int q, double dt) {
  require(!values.empty(), ErrorKind::GridTooShort, "no path values");
  return trapezoid(values, values.size() - 1, dt, [q](double x) { return hermite_q(q, x); });
}

double L_eval(double H, double gamma, int q, double t) { return cov_integrals(H, gamma, q, t).L; }

double L_abs_eval(double H, double gamma, int q, double t) {
  return cov_integrals(H, gamma, q, t).L_abs;
}

double exact_integral_variance(double H, double gamma, int q, double t) {
  return cov_integrals(H, gamma, q, t).exact_variance;
}

ScalingStudy variance_scaling(int q, double H, double gamma, std::span<const double> t_ladder,
                              const McConfig& mc) {
  check_mc(mc, 500);
  require(q >= 1, ErrorKind::Precondition, "q must be at least 1");
  require(!t_ladder.empty(), ErrorKind::Precondition, "empty t ladder");
  for (std::size_t i = 0; i < t_ladder.size(); ++i) {
    require(t_ladder[i] > 0.0 && (i == 0 || t_ladder[i] > t_ladder[i - 1]),
            ErrorKind::Precondition, "t ladder must be positive and strictly increasing");
  }
  const auto grid = fracproc::TimeGrid::with_step(t_ladder.back(), mc.dt);
  const fracproc::StationaryFoupSampler sampler(fracproc::FoupSpec::with_default_burn_in(H, gamma),
                                                grid);
  std::vector<std::size_t> index(t_ladder.size());
  for (std::size_t i = 0; i < t_ladder.size(); ++i) {
    index[i] = static_cast<std::size_t>(
        std::clamp<double>(std::llround(t_ladder[i] / mc.dt), 1.0, static_cast<double>(grid.steps())));
  }
  const std::size_t width = index.size();
  const double dt = mc.dt;
  auto integrals = [&](const std::vector<double>& v, std::span<double> out) {
    double acc = 0.0;
    double prev = hermite_q(q, v[0]);
    std::size_t next = 0;
    for (std::size_t i = 1; i < v.size() && next < width; ++i) {
      const double cur = hermite_q(q, v[i]);
      acc += 0.5 * dt * (prev + cur);
      prev = cur;
      while (next < width && index[next] == i) out[next++] = acc;
    }
  };
  const auto table = replicate_pairs(mc.reps, mc.seed, width, [&](std::uint64_t s,
                                                                   std::span<double> a,
                                                                   std::span<double> b) {
    thread_local std::vector<double> x;
    thread_local std::vector<double> y;
    sampler.sample_pair_into(s, x, y);
    integrals(x, a);
    integrals(y, b);
  });

  ScalingStudy study{q, H, gamma, mc, {}, 0.0, sampler.spec().burn_in};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t c = 0; c < width; ++c) {
    const auto col = column(table, width, c);
    const auto summary = stats::empirical_summary(col);
    const double t = static_cast<double>(index[c]) * dt;
    const auto ci = cov_integrals(H, gamma, q, t);
    ScalingRow row;
    row.t = t;
    row.variance = summary.variance;
    row.variance_se = summary.variance_se;
    row.L = ci.L;
    row.L_abs = ci.L_abs;
    row.target = 2.0 * factorial(q) * t * ci.L;
    row.ratio = row.variance / row.target;
    row.ratio_se = row.variance_se / row.target;
    row.exact_ratio = row.variance / ci.exact_variance;
    study.rows.push_back(row);
    const double lx = std::log(t);
    const double ly = std::log(row.ratio);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(width);
  if (width >= 2) study.log_ratio_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return study;
}

CltResult clt_experiment(const hermite::HermiteExpansion& f, double H, double gamma, double t,
                         const McConfig& mc) {
  check_mc(mc);
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  require(t > 0.0, ErrorKind::Precondition, "t must be positive");
  const auto rank = f.rank();
  require(rank.has_value(), ErrorKind::RankUndetected, "functional has no significant coefficient");
  const int q = *rank;
  const auto reg = constants::regime(q, H);
  if (reg.tag != constants::RegimeTag::Weak) {
    throw Error(ErrorKind::WrongRegime, "rank " + std::to_string(q) + " at H = " +
                                            std::to_string(H) + " is in the " +
                                            std::string(constants::to_string(reg.tag)) + " regime");
  }
  const fracproc::HurstIndex hurst(H);
  const double cutoff = (H == 0.5 ? 60.0 : 1e4) / gamma;
  CltResult out;
  out.rank = q;
  out.weak = hermite::sigma_weak_sq(f, fracproc::stationary_foup_covariance(hurst, gamma), cutoff);
  const double cq = f.coeff(q);
  out.closed_form =
      cq * cq / (factorial(q) * factorial(q)) * constants::weak_limit_variance(q, H, gamma);
  const double sigma_sq = out.weak.value + out.weak.tail_estimate;
  const bool degenerate = !(sigma_sq > 1e-6 * f.second_moment() / gamma);
  const double norming = degenerate ? 1.0 / std::sqrt(t) : 1.0 / std::sqrt(t * sigma_sq);
  auto sample = stationary_statistic(H, gamma, t, mc, [&](std::span<const double> v) {
    return norming * trapezoid(v, v.size() - 1, mc.dt, f);
  });
  static_cast<ExperimentResult&>(out) = finish(std::move(sample), sigma_sq, norming, degenerate);
  return out;
}

ExperimentResult boundary_experiment(int q, double gamma, double t, const McConfig& mc) {
  check_mc(mc);
  if (q < 2) throw Error(ErrorKind::WrongRegime, "the boundary regime needs q >= 2");
  require(t > 1.0, ErrorKind::Precondition, "t must exceed 1");
  const double H = 1.0 - 1.0 / (2.0 * q);
  const double coeff = constants::boundary_coeff(q, H, gamma);
  const double norming = 1.0 / (std::sqrt(t * std::log(t)) * coeff);
  auto sample = stationary_statistic(H, gamma, t, mc, [&](std::span<const double> v) {
    return norming * integrate_hermite(v, q, mc.dt);
  });
  return finish(std::move(sample), coeff * coeff, norming, false);
}

ExperimentResult nclt_experiment(int q, double H, double gamma, double t, const McConfig& mc) {
  check_mc(mc);
  if (q != 2 || !(H > 0.75)) {
    throw Error(ErrorKind::WrongRegime, "the Rosenblatt limit is implemented for q = 2, H > 3/4");
  }
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  require(t > 1.0, ErrorKind::Precondition, "t must exceed 1");
  const double scale = constants::h(H, gamma) * constants::sigma(H);
  const double centre = std::tgamma(2.0 * H + 1.0) / (2.0 * std::pow(gamma, 2.0 * H));
  const double norming = constants::g(H, t) / scale;
  auto sample = foup_statistic(H, gamma, t, mc, [&](std::span<const double> v) {
    return norming * trapezoid(v, v.size() - 1, mc.dt, [centre](double x) { return x * x - centre; });
  });
  return finish(std::move(sample), scale * scale, norming, false);
}

SmoothingReport smoothing_deterministic(const std::function<double(double)>& psi, double gamma,
                                        std::span<const double> t_ladder, double C_T, double beta,
                                        int v_points) {
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  require(v_points >= 2, ErrorKind::Precondition, "need at least two v points");
  SmoothingReport report{gamma, C_T, beta, {}};
  // Gamma(beta + 1) + sup_s s^beta e^{-s} = Gamma(beta + 1) + (beta / e)^beta
  const double bracket = std::tgamma(beta + 1.0) + std::pow(beta / std::exp(1.0), beta);
  for (double t : t_ladder) {
    require(t > 0.0, ErrorKind::Precondition, "t must be positive");
    SmoothingRow row;
    row.t = t;
    row.bound = std::pow(t, -beta) * C_T / std::pow(gamma, 1.0 + beta) * bracket;
    for (int j = 0; j < v_points; ++j) {
      const double v = static_cast<double>(j) / (v_points - 1);
      // w = gamma t (v - s): t int_0^v e^{gamma t (s - v)} psi(s) ds
      //                     = gamma^{-1} int_0^{gamma t v} e^{-w} psi(v - w / (gamma t)) dw
      const double upper = std::min(gamma * t * v, 60.0);
      double smoothed = 0.0;
      if (upper > 0.0) {
        smoothed = quad::finite([&](double w) { return std::exp(-w) * psi(v - w / (gamma * t)); },
                                0.0, upper, 1e-13, 1e-16)
                       .value /
                   gamma;
      }
      const double err = std::abs(smoothed - psi(v) / gamma);
      if (err > row.sup_error) {
        row.sup_error = err;
        row.v_at_sup = v;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

SmoothingStochastic smoothing_stochastic(double H, double gamma, double t, const McConfig& mc) {
  check_mc(mc);
  require(gamma > 0.0, ErrorKind::Precondition, "gamma must be positive");
  require(t > 0.0, ErrorKind::Precondition, "t must be positive");
  const double norming = std::pow(t, -H);
  auto sample = foup_statistic(H, gamma, t, mc, [&](std::span<const double> v) {
    return norming * trapezoid(v, v.size() - 1, mc.dt, [](double x) { return x; });
  });
  SmoothingStochastic out;
  out.result = finish(std::move(sample), 1.0 / (gamma * gamma), norming, false);
  out.ratio = out.result.summary.variance * gamma * gamma;
  out.ratio_se = out.result.summary.variance_se * gamma * gamma;
  return out;
}

}  // namespace fraclimit::mclab
