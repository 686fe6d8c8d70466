#pragma once

#include "smoothsamp/spectral_ops.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <string>

namespace smoothsamp {

/// Least-squares generalized sampling under a smoothness prior:
/// x~ = W H c with W = Q = (F^T F)^{-1} S and H = (S^T Q)^{-1}.
template <typename Scalar = double>
struct ReconstructionPipeline {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Mat S;
  Mat Q;
  Mat W;
  Mat H;
  bool used_pseudo_inverse = false;
};

/// Builds the pipeline for sampling operator S. H falls back to the
/// Moore-Penrose pseudo-inverse (same relative cutoff) when the smallest
/// singular value of S^T Q is at most inv_tol * sigma_max.
template <typename Scalar, typename Derived>
ReconstructionPipeline<Scalar> build_pipeline(const VariationOperator<Scalar> &vo,
                                              const Eigen::MatrixBase<Derived> &S,
                                              double inv_tol = 1e-10) {
  using Mat = typename ReconstructionPipeline<Scalar>::Mat;
  if (!(inv_tol > 0.0)) throw std::invalid_argument("build_pipeline: inv_tol must be positive");
  if (S.rows() != vo.size() || S.cols() == 0)
    throw std::invalid_argument("build_pipeline: S must be |V| x K with K > 0");

  ReconstructionPipeline<Scalar> p;
  p.S = S;
  Eigen::LLT<Mat> llt(vo.gram());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("build_pipeline: F^T F is not positive definite");
  p.Q = llt.solve(p.S);
  p.W = p.Q;

  const Mat StQ = p.S.transpose() * p.Q;
  Eigen::JacobiSVD<Mat> svd(StQ, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const Scalar cutoff = Scalar(inv_tol) * sv(0);
  if (sv(0) > Scalar(0) && sv(sv.size() - 1) > cutoff) {
    p.H = StQ.partialPivLu().inverse();
  } else {
    p.used_pseudo_inverse = true;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_sv = sv;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      inv_sv(i) = (sv(0) > Scalar(0) && sv(i) > cutoff) ? Scalar(1) / sv(i) : Scalar(0);
    p.H = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  }
  return p;
}

/// c = S^T x.
template <typename DerivedS, typename DerivedX>
Eigen::Matrix<typename DerivedS::Scalar, Eigen::Dynamic, 1>
sample(const Eigen::MatrixBase<DerivedS> &S, const Eigen::MatrixBase<DerivedX> &x) {
  if (S.rows() != x.size())
    throw std::invalid_argument("sample: signal length " + std::to_string(x.size()) +
                                " does not match S rows " + std::to_string(S.rows()));
  return S.transpose() * x;
}

template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> reconstruct(const ReconstructionPipeline<Scalar> &p,
                                                     const Eigen::MatrixBase<Derived> &c) {
  if (c.size() != p.H.cols())
    throw std::invalid_argument("reconstruct: sample vector has wrong length");
  return p.W * (p.H * c);
}

/// Direct solution of argmin { ||F x||^2 : S^T x = c } via the KKT system
///   [F^T F  S] [x]   [0]
///   [S^T    0] [mu] = [c].
/// Throws std::runtime_error when the KKT matrix is singular.
template <typename Scalar, typename DerivedS, typename DerivedC>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ls_oracle(const VariationOperator<Scalar> &vo,
                                                   const Eigen::MatrixBase<DerivedS> &S,
                                                   const Eigen::MatrixBase<DerivedC> &c) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = vo.size();
  const Eigen::Index K = S.cols();
  if (S.rows() != n || c.size() != K)
    throw std::invalid_argument("ls_oracle: dimension mismatch");

  Mat kkt = Mat::Zero(n + K, n + K);
  kkt.topLeftCorner(n, n) = vo.gram();
  kkt.topRightCorner(n, K) = S;
  kkt.bottomLeftCorner(K, n) = S.transpose();
  Vec rhs = Vec::Zero(n + K);
  rhs.tail(K) = c;

  Eigen::FullPivLU<Mat> lu(kkt);
  if (!lu.isInvertible())
    throw std::runtime_error("ls_oracle: KKT system is singular (degenerate sampling operator)");
  return lu.solve(rhs).head(n);
}

} // namespace smoothsamp
