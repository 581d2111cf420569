#include "fraclimit/diagrams.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "fraclimit/error.hpp"
#include "fraclimit/hermite.hpp"

namespace fraclimit::diagrams {

namespace {

void check_size(int p, int q, int vertex_limit) {
  require(p >= 2, ErrorKind::Precondition, "diagrams need at least two levels");
  require(q >= 1, ErrorKind::Precondition, "row length must be positive");
  if (p * q > vertex_limit) {
    throw Error(ErrorKind::TooLarge, std::to_string(p * q) + " vertices exceed the limit of " +
                                         std::to_string(vertex_limit));
  }
}

// Matches the lowest unmatched vertex to every admissible partner. Vertex v
// sits at level v / q (0-based). visit() receives the partner array once per
// complete matching.
class Matcher {
 public:
  Matcher(int p, int q) : p_(p), q_(q), partner_(static_cast<std::size_t>(p * q), -1) {}

  template <class OnEdge, class OnLeave, class OnComplete>
  void run(OnEdge&& on_edge, OnLeave&& on_leave, OnComplete&& on_complete) {
    recurse(0, on_edge, on_leave, on_complete);
  }

  const std::vector<int>& partners() const noexcept { return partner_; }

 private:
  template <class OnEdge, class OnLeave, class OnComplete>
  void recurse(int from, OnEdge& on_edge, OnLeave& on_leave, OnComplete& on_complete) {
    const int n = p_ * q_;
    int v = from;
    while (v < n && partner_[v] >= 0) ++v;
    if (v == n) {
      on_complete();
      return;
    }
    const int level = v / q_;
    for (int w = (level + 1) * q_; w < n; ++w) {
      if (partner_[w] >= 0) continue;
      partner_[v] = w;
      partner_[w] = v;
      on_edge(level, w / q_);
      recurse(v + 1, on_edge, on_leave, on_complete);
      on_leave();
      partner_[v] = partner_[w] = -1;
    }
  }

  int p_;
  int q_;
  std::vector<int> partner_;
};

}  // namespace

bool is_valid(const Diagram& d) {
  const int n = d.levels * d.row_length;
  if (static_cast<int>(d.edges.size()) * 2 != n) return false;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : d.edges) {
    for (const Vertex& v : {e.low, e.high}) {
      if (v.level < 1 || v.level > d.levels || v.position < 1 || v.position > d.row_length) {
        return false;
      }
      ++degree[(v.level - 1) * d.row_length + (v.position - 1)];
    }
    if (e.low.level >= e.high.level) return false;
  }
  for (int deg : degree) {
    if (deg != 1) return false;
  }
  return true;
}

std::vector<Diagram> enumerate_diagrams(int p, int q, int vertex_limit) {
  check_size(p, q, vertex_limit);
  std::vector<Diagram> out;
  if ((p * q) % 2 != 0) return out;
  Matcher matcher(p, q);
  auto noop_edge = [](int, int) {};
  auto noop_leave = [] {};
  matcher.run(noop_edge, noop_leave, [&] {
    Diagram d{p, q, {}};
    const auto& partner = matcher.partners();
    for (int v = 0; v < p * q; ++v) {
      const int w = partner[v];
      if (w < v) continue;
      d.edges.push_back({{v / q + 1, v % q + 1}, {w / q + 1, w % q + 1}});
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::uint64_t count_diagrams(int p, int q, int vertex_limit) {
  check_size(p, q, vertex_limit);
  if ((p * q) % 2 != 0) return 0;
  std::uint64_t count = 0;
  Matcher matcher(p, q);
  matcher.run([](int, int) {}, [] {}, [&] { ++count; });
  return count;
}

void validate_correlation(const Eigen::MatrixXd& sigma) {
  require(sigma.rows() == sigma.cols() && sigma.rows() >= 1, ErrorKind::NotPSD,
          "correlation matrix must be square");
  const auto n = sigma.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::abs(sigma(i, i) - 1.0) <= 1e-12, ErrorKind::NotPSD, "diagonal must be one");
    for (Eigen::Index j = 0; j < i; ++j) {
      require(std::abs(sigma(i, j) - sigma(j, i)) <= 1e-12, ErrorKind::NotPSD,
              "matrix must be symmetric");
      require(std::abs(sigma(i, j)) <= 1.0 + 1e-12, ErrorKind::NotPSD,
              "entries must lie in [-1, 1]");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma, Eigen::EigenvaluesOnly);
  require(solver.eigenvalues().minCoeff() >= -1e-10, ErrorKind::NotPSD,
          "minimum eigenvalue " + std::to_string(solver.eigenvalues().minCoeff()));
}

double diagram_moment(int q, const Eigen::MatrixXd& sigma, int vertex_limit) {
  validate_correlation(sigma);
  const int p = static_cast<int>(sigma.rows());
  check_size(p, q, vertex_limit);
  if ((p * q) % 2 != 0) return 0.0;
  // running products along the recursion; stack[d] is the product of the first d edges
  std::vector<double> stack{1.0};
  stack.reserve(static_cast<std::size_t>(p * q / 2 + 1));
  double total = 0.0;
  Matcher matcher(p, q);
  matcher.run([&](int m, int M) { stack.push_back(stack.back() * sigma(m, M)); },
              [&] { stack.pop_back(); }, [&] { total += stack.back(); });
  return total;
}

MonteCarloMoment mc_moment_oracle(int q, const Eigen::MatrixXd& sigma, std::int64_t n_samples,
                                  std::uint64_t seed) {
  validate_correlation(sigma);
  require(q >= 1, ErrorKind::Precondition, "row length must be positive");
  require(n_samples >= 1000, ErrorKind::Precondition, "at least 1000 samples required");
  const auto p = sigma.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  const Eigen::VectorXd root_eig = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root =
      solver.eigenvectors() * root_eig.asDiagonal() * solver.eigenvectors().transpose();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(p);
  Eigen::VectorXd x(p);
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(rng);
    x.noalias() = root * z;
    double prod = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) prod *= hermite::eval(q, x(j));
    const double delta = prod - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (prod - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

}  // namespace fraclimit::diagrams
