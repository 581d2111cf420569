#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace fraclimit::hermite {

inline constexpr int kDefaultQuadOrder = 128;
inline constexpr int kDefaultTruncation = 12;
inline constexpr double kDefaultRankTolerance = 1e-9;
inline constexpr double kMeanZeroTolerance = 1e-9;

/// Probabilists' Hermite polynomial He_k(x) (leading coefficient one), via
/// He_{k+1}(x) = x He_k(x) - k He_{k-1}(x).
double eval(int k, double x);

/// Fills out[j] = He_j(x) for j = 0 .. out.size() - 1.
void eval_all(double x, std::span<double> out);

/// Gauss-Hermite rule for the standard normal law: weights sum to one and the
/// rule is exact for polynomials of degree up to 2n - 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; safe to call concurrently.
const GaussHermiteRule& gauss_hermite_rule(int order);

/// A real functional f of a standard normal variable, with its quadrature
/// moments E f(N_0) and E f(N_0)^2 precomputed.
class Functional {
 public:
  explicit Functional(std::function<double(double)> f, int quad_order = kDefaultQuadOrder);

  double operator()(double x) const { return f_(x); }
  double mean() const noexcept { return mean_; }
  double second_moment() const noexcept { return second_moment_; }
  int quad_order() const noexcept { return quad_order_; }

  /// |E f| within tol * (1 + (E f^2)^{1/2}).
  bool is_mean_zero(double tol = kMeanZeroTolerance) const;

 private:
  std::function<double(double)> f_;
  int quad_order_;
  double mean_;
  double second_moment_;
};

/// Truncated expansion f = sum_{k=1}^{K} c_k / k! He_k.
class HermiteExpansion {
 public:
  /// coeffs[k - 1] holds c_k. When the second moment of the source functional
  /// is unknown the Parseval sum stands in for it.
  explicit HermiteExpansion(std::vector<double> coeffs,
                            std::optional<double> second_moment = std::nullopt);

  int truncation() const noexcept { return static_cast<int>(coeffs_.size()); }
  /// c_k for k >= 1; zero beyond the truncation.
  double coeff(int k) const;
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double second_moment() const noexcept { return second_moment_; }
  /// sum_{k <= K} c_k^2 / k!
  double parseval_sum() const;
  /// E f^2 minus the Parseval sum: the L2 mass lost to truncation.
  double truncation_loss() const { return second_moment_ - parseval_sum(); }

  /// Threshold that |c_k| must exceed to count as nonzero:
  /// rel_tol * (k!)^{1/2} * (E f^2)^{1/2}.
  double rank_threshold(int k, double rel_tol = kDefaultRankTolerance) const;

  /// Rank under the default relative rule; nullopt when every coefficient is
  /// below threshold.
  std::optional<int> rank() const;

  /// Evaluates the truncated series at x.
  double operator()(double x) const;

 private:
  std::vector<double> coeffs_;
  double second_moment_;
};

/// c_k = E He_k(N_0) f(N_0), k = 1..truncation, by Gauss-Hermite quadrature.
/// Throws MeanNotZero or RankUndetected.
HermiteExpansion expand(const Functional& f, int truncation = kDefaultTruncation,
                        int quad_order = kDefaultQuadOrder);

/// inf{k : |c_k| > tol}. Throws RankUndetected.
int hermite_rank(const HermiteExpansion& e, double tol);

/// Even covariance function of a unit-variance stationary process.
struct Covariance {
  std::function<double(double)> r;
  /// |r(u)| ~ u^{-decay} as u -> inf; infinity for faster-than-power decay.
  double decay = std::numeric_limits<double>::infinity();
};

struct WeakVariance {
  double value = 0.0;          ///< truncated sum, integrals over [-cutoff, cutoff]
  double tail_estimate = 0.0;  ///< estimated contribution of |u| > cutoff
  int rank = 0;                ///< 0 for an expansion with no significant coefficient
  std::vector<double> integrals;  ///< int_R r^k, k = rank..K (truncated)
};

/// sigma^2 = sum_{k=q}^{K} c_k^2/k! int_R r^k(u) du for an expansion of rank q.
/// Throws DivergentIntegral when int |r|^q is infinite.
WeakVariance sigma_weak_sq(const HermiteExpansion& e, const Covariance& cov, double cutoff);

}  // namespace fraclimit::hermite
