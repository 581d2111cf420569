#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace fraclimit::diagrams {

inline constexpr int kDefaultVertexLimit = 16;

/// Vertex (level, position), both 1-based as in the diagram definition.
struct Vertex {
  int level;
  int position;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Edge stored with its endpoints ordered by level, so that low.level is
/// m(e) = min{k, l} and high.level is M(e) = max{k, l}.
struct Edge {
  Vertex low;
  Vertex high;
  int m() const noexcept { return low.level; }
  int M() const noexcept { return high.level; }
};

/// A perfect matching of {1..p} x {1..q} with no edge inside a level.
struct Diagram {
  int levels = 0;
  int row_length = 0;
  std::vector<Edge> edges;  ///< canonical order: by first vertex (level-major)
};

/// Checks the three diagram invariants.
bool is_valid(const Diagram& d);

/// All diagrams with p levels and rows of length q, in deterministic order.
/// Empty when p*q is odd. Throws TooLarge when p*q exceeds vertex_limit.
std::vector<Diagram> enumerate_diagrams(int p, int q, int vertex_limit = kDefaultVertexLimit);

/// |D(p,q)| without materializing the diagrams.
std::uint64_t count_diagrams(int p, int q, int vertex_limit = kDefaultVertexLimit);

/// Symmetric, unit diagonal, eigenvalues >= -1e-10. Throws NotPSD otherwise.
void validate_correlation(const Eigen::MatrixXd& sigma);

/// E prod_j He_q(X_j) = sum over D(p,q) of prod over edges of sigma(m(e), M(e)).
double diagram_moment(int q, const Eigen::MatrixXd& sigma,
                      int vertex_limit = kDefaultVertexLimit);

struct MonteCarloMoment {
  double estimate;
  double std_error;
};

/// Monte Carlo estimate of E prod_j He_q(X_j), X ~ N(0, sigma), sampled through
/// the symmetric square root of sigma. Throws NotPSD.
MonteCarloMoment mc_moment_oracle(int q, const Eigen::MatrixXd& sigma, std::int64_t n_samples,
                                  std::uint64_t seed);

}  // namespace fraclimit::diagrams
