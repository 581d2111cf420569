#include "fraclimit/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fraclimit/error.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit::hermite {

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// Orthonormal p_k = He_k / sqrt(k!) at x, returns (p_{n-1}, p_n) and the
// Christoffel sum sum_{k<n} p_k^2.
struct Orthonormal {
  double prev;
  double last;
  double christoffel;
};

Orthonormal orthonormal(int n, double x) {
  double pm1 = 0.0;
  double p = 1.0;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += p * p;
    const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm1) / std::sqrt(k + 1.0);
    pm1 = p;
    p = next;
  }
  return {pm1, p, sum};
}

GaussHermiteRule build_rule(int n) {
  // Golub-Welsch for the starting nodes, then Newton on p_n with
  // p_n' = sqrt(n) p_{n-1}; weights from the Christoffel function so the far
  // nodes keep full relative accuracy.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      const auto o = orthonormal(n, x);
      const double step = o.last / (std::sqrt(static_cast<double>(n)) * o.prev);
      x -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / orthonormal(n, x).christoffel;
  }
  // symmetrize to remove the last-bit asymmetry of the eigen solver
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

double eval(int k, double x) {
  require(k >= 0, ErrorKind::Precondition, "Hermite degree must be nonnegative");
  if (k == 0) return 1.0;
  double pm1 = 1.0;
  double p = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * p - j * pm1;
    pm1 = p;
    p = next;
  }
  return p;
}

void eval_all(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    out[j + 1] = x * out[j] - static_cast<double>(j) * out[j - 1];
  }
}

const GaussHermiteRule& gauss_hermite_rule(int order) {
  require(order >= 1, ErrorKind::Precondition, "quadrature order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(build_rule(order));
  return *slot;
}

Functional::Functional(std::function<double(double)> f, int quad_order)
    : f_(std::move(f)), quad_order_(quad_order), mean_(0.0), second_moment_(0.0) {
  const auto& rule = gauss_hermite_rule(quad_order);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f_(rule.nodes[i]);
    mean_ += rule.weights[i] * v;
    second_moment_ += rule.weights[i] * v * v;
  }
  require(std::isfinite(second_moment_), ErrorKind::Precondition,
          "functional is not square integrable under the standard normal law");
}

bool Functional::is_mean_zero(double tol) const {
  return std::abs(mean_) <= tol * (1.0 + std::sqrt(second_moment_));
}

HermiteExpansion::HermiteExpansion(std::vector<double> coeffs, std::optional<double> second_moment)
    : coeffs_(std::move(coeffs)), second_moment_(0.0) {
  require(!coeffs_.empty(), ErrorKind::Precondition, "expansion needs at least one coefficient");
  second_moment_ = second_moment ? *second_moment : parseval_sum();
}

double HermiteExpansion::coeff(int k) const {
  require(k >= 1, ErrorKind::Precondition, "coefficient index starts at 1");
  return k <= truncation() ? coeffs_[k - 1] : 0.0;
}

double HermiteExpansion::parseval_sum() const {
  double s = 0.0;
  for (int k = 1; k <= truncation(); ++k) s += coeffs_[k - 1] * coeffs_[k - 1] / factorial(k);
  return s;
}

double HermiteExpansion::rank_threshold(int k, double rel_tol) const {
  return rel_tol * std::sqrt(factorial(k)) * std::sqrt(second_moment_);
}

std::optional<int> HermiteExpansion::rank() const {
  for (int k = 1; k <= truncation(); ++k) {
    if (std::abs(coeffs_[k - 1]) > rank_threshold(k)) return k;
  }
  return std::nullopt;
}

double HermiteExpansion::operator()(double x) const {
  std::vector<double> he(coeffs_.size() + 1);
  eval_all(x, he);
  double s = 0.0;
  double fact = 1.0;
  for (int k = 1; k <= truncation(); ++k) {
    fact *= k;
    s += coeffs_[k - 1] / fact * he[k];
  }
  return s;
}

HermiteExpansion expand(const Functional& f, int truncation, int quad_order) {
  require(truncation >= 1, ErrorKind::Precondition, "truncation must be at least 1");
  require(2 * quad_order - 1 >= 2 * truncation, ErrorKind::Precondition,
          "quadrature order too small for the requested truncation");
  if (!f.is_mean_zero()) {
    throw Error(ErrorKind::MeanNotZero, "E f(N_0) = " + std::to_string(f.mean()));
  }
  const auto& rule = gauss_hermite_rule(quad_order);
  std::vector<double> coeffs(truncation, 0.0);
  std::vector<double> he(truncation + 1);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double fx = f(rule.nodes[i]);
    eval_all(rule.nodes[i], he);
    for (int k = 1; k <= truncation; ++k) coeffs[k - 1] += rule.weights[i] * he[k] * fx;
  }
  HermiteExpansion e(std::move(coeffs), f.second_moment());
  if (!e.rank()) throw Error(ErrorKind::RankUndetected, "all coefficients below tolerance");
  return e;
}

int hermite_rank(const HermiteExpansion& e, double tol) {
  for (int k = 1; k <= e.truncation(); ++k) {
    if (std::abs(e.coeff(k)) > tol) return k;
  }
  throw Error(ErrorKind::RankUndetected, "no coefficient exceeds the tolerance");
}

WeakVariance sigma_weak_sq(const HermiteExpansion& e, const Covariance& cov, double cutoff) {
  require(cutoff > 0.0, ErrorKind::Precondition, "cutoff must be positive");
  WeakVariance out;
  const auto q = e.rank();
  if (!q) return out;
  out.rank = *q;
  if (*q * cov.decay <= 1.0) {
    throw Error(ErrorKind::DivergentIntegral,
                "int |r|^q diverges for q = " + std::to_string(*q));
  }
  const int K = e.truncation();
  const auto rule = quad::geometric_gauss_rule(cutoff);
  std::vector<double> half(K + 1, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = cov.r(rule.nodes[i]);
    double rk = 1.0;
    for (int k = 1; k <= K; ++k) {
      rk *= r;
      if (k >= *q) half[k] += rule.weights[i] * rk;
    }
  }
  const double r_end = cov.r(cutoff);
  double fact = 1.0;
  for (int k = 1; k <= K; ++k) {
    fact *= k;
    if (k < *q) continue;
    const double ck = e.coeff(k);
    out.integrals.push_back(2.0 * half[k]);
    out.value += ck * ck / fact * 2.0 * half[k];
    if (std::isfinite(cov.decay)) {
      // r(u)^k ~ r(cutoff)^k (u / cutoff)^{-k decay} beyond the cutoff
      const double kd = k * cov.decay;
      if (kd > 1.0) {
        out.tail_estimate += ck * ck / fact * 2.0 * std::pow(r_end, k) * cutoff / (kd - 1.0);
      }
    }
  }
  return out;
}

}  // namespace fraclimit::hermite
