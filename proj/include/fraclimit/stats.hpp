#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fraclimit::stats {

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.5, 0.75, 0.95};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Moments are the usual unbiased (G1, G2) estimators; standard errors are
/// delete-one jackknife. Skewness and kurtosis are NaN, and `degenerate` is
/// set, when the sample has zero variance or too few points.
struct EmpiricalSummary {
  std::int64_t n = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double skewness = 0.0;
  double skewness_se = 0.0;
  double excess_kurtosis = 0.0;
  double excess_kurtosis_se = 0.0;
  std::array<double, 5> quantiles{};  ///< at kQuantileLevels
  double ks_normal = 0.0;             ///< KS distance to N(0, 1)
  bool degenerate = false;
};

double normal_cdf(double x);
double normal_quantile(double p);

/// Two-sided one-sample Kolmogorov-Smirnov distance. Throws EmptySample.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// sup |F_a - F_b| between two empirical distributions. Throws EmptySample.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic 1% critical value 1.628 / sqrt(n) of the one-sample statistic.
double ks_critical_1pct(std::int64_t n);

/// Quantile of a sorted sample by linear interpolation between order statistics.
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws EmptySample for n < 2.
EmpiricalSummary empirical_summary(std::span<const double> sample);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace fraclimit::stats
