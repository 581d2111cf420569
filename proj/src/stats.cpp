#include "fraclimit/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclimit/error.hpp"

namespace fraclimit::stats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Central-moment estimators from power sums of values already centered at a
// fixed origin (the full-sample mean), so leave-one-out versions are O(1).
struct Moments {
  double mean;
  double variance;
  double skewness;
  double kurtosis;
};

Moments from_sums(double n, double s1, double s2, double s3, double s4) {
  const double m = s1 / n;
  const double m2 = s2 / n - m * m;
  const double m3 = s3 / n - 3.0 * m * s2 / n + 2.0 * m * m * m;
  const double m4 = s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
  Moments r{m, n / (n - 1.0) * m2, kNaN, kNaN};
  if (m2 > 0.0 && n > 2.0) {
    const double g1 = m3 / std::pow(m2, 1.5);
    r.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
  }
  if (m2 > 0.0 && n > 3.0) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    r.kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  }
  return r;
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::Precondition, "quantile level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), ErrorKind::EmptySample, "KS statistic of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::EmptySample, "KS statistic of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return d;
}

double ks_critical_1pct(std::int64_t n) {
  require(n >= 1, ErrorKind::EmptySample, "critical value needs n >= 1");
  return 1.628 / std::sqrt(static_cast<double>(n));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  require(!sorted.empty(), ErrorKind::EmptySample, "quantile of an empty sample");
  require(p >= 0.0 && p <= 1.0, ErrorKind::Precondition, "quantile level must lie in [0, 1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

EmpiricalSummary empirical_summary(std::span<const double> sample) {
  require(sample.size() >= 2, ErrorKind::EmptySample, "summary needs at least two values");
  const auto count = sample.size();
  const double n = static_cast<double>(count);

  CompensatedSum total;
  for (double x : sample) total.add(x);
  const double centre = total.value() / n;

  CompensatedSum s1, s2, s3, s4;
  for (double x : sample) {
    const double d = x - centre;
    const double d2 = d * d;
    s1.add(d);
    s2.add(d2);
    s3.add(d2 * d);
    s4.add(d2 * d2);
  }
  const Moments full = from_sums(n, s1.value(), s2.value(), s3.value(), s4.value());

  EmpiricalSummary out;
  out.n = static_cast<std::int64_t>(count);
  out.mean = centre + full.mean;
  out.variance = std::max(full.variance, 0.0);
  out.skewness = full.skewness;
  out.excess_kurtosis = full.kurtosis;
  out.degenerate = !(full.variance > 0.0) || count < 4;

  // jackknife
  if (count >= 3) {
    CompensatedSum jm, jv, js, jk;
    std::vector<Moments> loo(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double d = sample[i] - centre;
      const double d2 = d * d;
      loo[i] = from_sums(n - 1.0, s1.value() - d, s2.value() - d2, s3.value() - d2 * d,
                         s4.value() - d2 * d2);
      jm.add(loo[i].mean);
      jv.add(loo[i].variance);
      js.add(loo[i].skewness);
      jk.add(loo[i].kurtosis);
    }
    const double bm = jm.value() / n, bv = jv.value() / n, bs = js.value() / n,
                 bk = jk.value() / n;
    CompensatedSum em, ev, es, ek;
    for (const auto& m : loo) {
      em.add((m.mean - bm) * (m.mean - bm));
      ev.add((m.variance - bv) * (m.variance - bv));
      es.add((m.skewness - bs) * (m.skewness - bs));
      ek.add((m.kurtosis - bk) * (m.kurtosis - bk));
    }
    const double f = (n - 1.0) / n;
    out.mean_se = std::sqrt(f * em.value());
    out.variance_se = std::sqrt(f * ev.value());
    out.skewness_se = std::sqrt(f * es.value());
    out.excess_kurtosis_se = std::sqrt(f * ek.value());
  } else {
    out.mean_se = std::sqrt(out.variance / n);
    out.variance_se = out.skewness_se = out.excess_kurtosis_se = kNaN;
  }

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < kQuantileLevels.size(); ++k) {
    out.quantiles[k] = quantile_sorted(sorted, kQuantileLevels[k]);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  out.ks_normal = d;
  return out;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::EmptySample,
          "correlation needs two equal samples of size >= 2");
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
    syy.add((y[i] - my) * (y[i] - my));
  }
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

}  // namespace fraclimit::stats
