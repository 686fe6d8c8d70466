#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace smoothsamp {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;

  friend bool operator==(const Edge &, const Edge &) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

/// Weighted undirected graph. Edges are stored once per unordered pair with u < v.
struct Graph {
  int num_vertices = 0;
  std::vector<Edge> edges;
  std::optional<std::vector<Point2>> coordinates;

  friend bool operator==(const Graph &, const Graph &) = default;
};

/// Throws std::invalid_argument if indices are out of range, an edge is a
/// self loop or duplicated, a weight is not strictly positive, or the
/// coordinate count does not match the vertex count.
void validate(const Graph &g);

bool is_connected(const Graph &g);

/// Random geometric sensor graph: n points uniform in the unit square, each
/// joined to its k nearest neighbours (symmetrized), Gaussian weights
/// exp(-d^2 / (2 sigma^2)) with sigma the mean k-NN distance. Disconnected
/// draws are resampled with seed + attempt, at most 50 attempts.
Graph build_random_sensor_graph(int n, int k, std::uint64_t seed);

inline constexpr int kSensorGraphMaxAttempts = 50;

/// Combinatorial Laplacian L = D - W.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> laplacian(const Graph &g) {
  validate(g);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat L = Mat::Zero(g.num_vertices, g.num_vertices);
  for (const auto &e : g.edges) {
    const auto w = static_cast<Scalar>(e.w);
    L(e.u, e.v) -= w;
    L(e.v, e.u) -= w;
    L(e.u, e.u) += w;
    L(e.v, e.v) += w;
  }
  return L;
}

template <typename Scalar = double>
struct Spectrum {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vec eigenvalues;  ///< ascending
  Mat eigenvectors; ///< column i pairs with eigenvalues(i)

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Flip the sign of each column so that its largest-magnitude entry is
/// positive. Entries within a relative 1e-12 of the maximum count as ties and
/// the lowest index wins.
template <typename Derived>
void canonicalize_signs(Eigen::MatrixBase<Derived> &vectors) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const Scalar peak = col.cwiseAbs().maxCoeff();
    const Scalar tie = peak * Scalar(1 - 1e-12);
    Eigen::Index pick = 0;
    while (pick < col.size() && abs(col(pick)) < tie) ++pick;
    if (pick < col.size() && col(pick) < Scalar(0)) col = -col;
  }
}

/// Dense symmetric eigendecomposition with a deterministic sign convention.
/// Rejects input whose asymmetry exceeds `sym_tol` relative to its max entry.
template <typename Derived>
Spectrum<typename Derived::Scalar> eigendecompose(const Eigen::MatrixBase<Derived> &L,
                                                  double sym_tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  if (L.rows() != L.cols() || L.rows() == 0)
    throw std::invalid_argument("eigendecompose: matrix must be square and non-empty");
  const Scalar scale = std::max(Scalar(1), L.cwiseAbs().maxCoeff());
  if ((L - L.transpose()).cwiseAbs().maxCoeff() > Scalar(sym_tol) * scale)
    throw std::invalid_argument("eigendecompose: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(
      L.eval());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver did not converge");

  Spectrum<Scalar> spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.eigenvectors = solver.eigenvectors();
  canonicalize_signs(spec.eigenvectors);
  return spec;
}

} // namespace smoothsamp
