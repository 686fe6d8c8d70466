#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothsamp {

/// Choice of the free block T in the nuclear-norm subgradient
/// U_r V_r^T + U_o T V_o^T.
enum class TMode { Zero, Identity };

struct DesignConfig {
  double epsilon = 1.0;
  double gamma = 1.0;
  TMode t_mode = TMode::Zero;
  double stop_tol = 1e-5;
  int max_iter = 10000;
  double rank_tol = 1e-10;
  std::uint64_t seed = 0;

  /// Experimental defaults: epsilon = sqrt(n K), gamma = 1, T = O, stop_tol = 1e-5.
  static DesignConfig defaults_for(Eigen::Index n, Eigen::Index K, std::uint64_t seed = 0) {
    DesignConfig cfg;
    cfg.epsilon = std::sqrt(static_cast<double>(n) * static_cast<double>(K));
    cfg.seed = seed;
    return cfg;
  }

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("DesignConfig: epsilon must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("DesignConfig: gamma must be positive");
    if (!(stop_tol > 0.0 && stop_tol < 1.0))
      throw std::invalid_argument("DesignConfig: stop_tol must lie in (0, 1)");
    if (max_iter <= 0) throw std::invalid_argument("DesignConfig: max_iter must be positive");
    if (!(rank_tol > 0.0 && rank_tol <= 1e-4))
      throw std::invalid_argument("DesignConfig: rank_tol must lie in (0, 1e-4]");
  }
};

struct IterationRecord {
  double nuclear_norm = 0.0;   ///< ||A S^(t)||_*
  double step_norm = 0.0;      ///< ||S^(t+1) - S^(t)||_F
  double frobenius_norm = 0.0; ///< ||S^(t+1)||_F
};

template <typename Scalar = double>
struct SamplingDesign {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> S;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  bool converged = false;
};

/// Metric projection onto the Frobenius ball of radius epsilon.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
project_frobenius_ball(const Eigen::MatrixBase<Derived> &X, double epsilon) {
  using Scalar = typename Derived::Scalar;
  if (!(epsilon > 0.0)) throw std::invalid_argument("project_frobenius_ball: epsilon must be > 0");
  const Scalar norm = X.norm();
  if (norm <= Scalar(epsilon)) return X;
  Eigen::Matrix<Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> out =
      (Scalar(epsilon) / norm) * X;
  // rounding can leave the scaled norm an ulp above epsilon
  for (Scalar scaled = out.norm(); scaled > Scalar(epsilon); scaled = out.norm())
    out *= std::nextafter(Scalar(epsilon) / scaled, Scalar(0));
  return out;
}

/// Number of singular values strictly above rank_tol * sigma_1.
template <typename Derived>
int rank_of(const Eigen::MatrixBase<Derived> &M, double rank_tol) {
  using Scalar = typename Derived::Scalar;
  if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_of: rank_tol must be positive");
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(M);
  const auto &sv = svd.singularValues();
  if (sv(0) <= Scalar(0)) return 0;
  const Scalar cutoff = Scalar(rank_tol) * sv(0);
  return static_cast<int>((sv.array() > cutoff).count());
}

namespace detail {

template <typename Scalar>
struct Subgradient {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> G;
  Scalar nuclear_norm{};
  int rank = 0;
};

template <typename Derived>
Subgradient<typename Derived::Scalar> nuclear_subgradient_full(const Eigen::MatrixBase<Derived> &AS,
                                                               TMode t_mode, double rank_tol) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (AS.size() == 0) throw std::invalid_argument("nuclear_subgradient: empty matrix");

  Eigen::JacobiSVD<Mat> svd(AS, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  if (!(sv(0) > Scalar(0)))
    throw std::domain_error("nuclear_subgradient: zero matrix has no canonical subgradient; "
                            "re-randomize the initial point");

  const Scalar cutoff = Scalar(rank_tol) * sv(0);
  const int r = static_cast<int>((sv.array() > cutoff).count());

  Subgradient<Scalar> out;
  out.rank = r;
  out.nuclear_norm = sv.sum();
  const auto &U = svd.matrixU();
  const auto &V = svd.matrixV();
  if (t_mode == TMode::Identity)
    out.G.noalias() = U * V.transpose();
  else
    out.G.noalias() = U.leftCols(r) * V.leftCols(r).transpose();
  return out;
}

} // namespace detail

/// Subgradient of the nuclear norm at AS: U_r V_r^T for T = O, U V^T (thin,
/// K column pairs) for T = I. Throws std::domain_error on the zero matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
nuclear_subgradient(const Eigen::MatrixBase<Derived> &AS, TMode t_mode, double rank_tol = 1e-10) {
  return detail::nuclear_subgradient_full(AS, t_mode, rank_tol).G;
}

/// Standard Gaussian |V| x K matrix drawn from `seed`, column-major fill order.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gaussian_matrix(Eigen::Index rows,
                                                                      Eigen::Index cols,
                                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = Scalar(normal(rng));
  return M;
}

/// Proximal linearized DC iteration for
///   min_S  indicator_{||S||_F <= eps}(S) - ||A S||_*
/// started from a projected Gaussian matrix.
template <typename Derived>
SamplingDesign<typename Derived::Scalar>
design_sampling_operator(const Eigen::MatrixBase<Derived> &A, Eigen::Index K,
                         const DesignConfig &cfg) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  cfg.validate();
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("design_sampling_operator: A must be square");
  if (K <= 0 || K >= n)
    throw std::invalid_argument("design_sampling_operator: K must satisfy 0 < K < |V|, got " +
                                std::to_string(K));

  const Mat At = A.transpose();
  SamplingDesign<Scalar> out;
  Mat S = project_frobenius_ball(gaussian_matrix<Scalar>(n, K, cfg.seed), cfg.epsilon);
  Mat AS(n, K), next(n, K);
  out.trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iter, 4096)));

  for (int t = 0; t < cfg.max_iter; ++t) {
    AS.noalias() = A * S;
    const auto sub = detail::nuclear_subgradient_full(AS, cfg.t_mode, cfg.rank_tol);
    next = S;
    next.noalias() += Scalar(cfg.gamma) * (At * sub.G);
    next = project_frobenius_ball(next, cfg.epsilon);

    const Scalar prev_norm = S.norm();
    const Scalar step = (next - S).norm();
    out.trace.push_back({static_cast<double>(sub.nuclear_norm), static_cast<double>(step),
                         static_cast<double>(next.norm())});
    S.swap(next);
    out.iterations = t + 1;
    if (step <= Scalar(cfg.stop_tol) * prev_norm) {
      out.converged = true;
      break;
    }
  }
  out.S = std::move(S);
  return out;
}

} // namespace smoothsamp
