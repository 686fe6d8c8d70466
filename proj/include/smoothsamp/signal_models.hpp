#pragma once

#include "smoothsamp/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <variant>
#include <algorithm>
#include <vector>

namespace smoothsamp {

struct GmrfModel {
  double eta = 0.1;
};

struct PwlModel {
  double density = 0.125;
};

struct SignalModelSpec {
  std::variant<GmrfModel, PwlModel> kind = GmrfModel{};
  std::uint64_t seed = 0;

  void validate() const {
    if (const auto *g = std::get_if<GmrfModel>(&kind); g && !(g->eta > 0.0))
      throw std::invalid_argument("SignalModelSpec: eta must be positive");
    if (const auto *p = std::get_if<PwlModel>(&kind); p && !(p->density > 0.0 && p->density <= 1.0))
      throw std::invalid_argument("SignalModelSpec: density must lie in (0, 1]");
  }
};

/// GMRF signal x = U g with g_i ~ N(0, 1 / (lambda_i + eta)).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gen_gmrf(const Spectrum<Scalar> &spec, double eta,
                                                  std::uint64_t seed) {
  if (!(eta > 0.0)) throw std::invalid_argument("gen_gmrf: eta must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(spec.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const Scalar power = Scalar(1) / (spec.eigenvalues(i) + Scalar(eta));
    // eigenvalue rounding can dip slightly below zero; power stays positive for eta > 0
    g(i) = Scalar(normal(rng)) * std::sqrt(std::max(power, Scalar(0)));
  }
  return spec.eigenvectors * g;
}

/// Piecewise-linear signal: m = max(1, round(density n)) random anchors with
/// values uniform on [-1, 1], harmonic interpolation L_UU x_U = -L_UA x_A elsewhere.
/// When `anchors` is given it receives the sorted anchor vertices.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1>
gen_pwl(const Graph &g, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &L,
        double density, std::uint64_t seed, std::vector<int> *anchors = nullptr) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("gen_pwl: density must lie in (0, 1]");
  const int n = g.num_vertices;
  if (L.rows() != n || L.cols() != n) throw std::invalid_argument("gen_pwl: Laplacian size");
  if (!is_connected(g)) throw std::invalid_argument("gen_pwl: graph must be connected");

  const int m = std::clamp(static_cast<int>(std::lround(density * n)), 1, n);
  std::mt19937_64 rng(seed);

  // partial Fisher-Yates: the first m entries become the anchors
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<char> is_anchor(n, 0);
  Vec x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    is_anchor[perm[i]] = 1;
    x(perm[i]) = Scalar(value(rng));
  }
  std::vector<int> free_idx, anchor_idx;
  for (int v = 0; v < n; ++v) (is_anchor[v] ? anchor_idx : free_idx).push_back(v);
  if (anchors) *anchors = anchor_idx;
  if (m == n) return x;

  Mat L_ff = L(free_idx, free_idx);
  Mat L_fa = L(free_idx, anchor_idx);
  Vec x_a = x(anchor_idx);
  Eigen::LLT<Mat> llt(L_ff);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gen_pwl: interior Laplacian block is not positive definite");
  const Vec x_f = llt.solve(-(L_fa * x_a));
  x(free_idx) = x_f;
  return x;
}

} // namespace smoothsamp
