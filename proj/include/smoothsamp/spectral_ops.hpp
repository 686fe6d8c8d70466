#pragma once

#include "smoothsamp/graph.hpp"

#include <Eigen/Dense>

#include <numeric>
#include <stdexcept>
#include <string>

namespace smoothsamp {

/// Spectral response lambda -> slope * lambda + offset.
struct SpectralResponse {
  enum class Kind { Affine };

  Kind kind = Kind::Affine;
  double slope = 1.0;
  double offset = 0.1;

  template <typename Scalar>
  Scalar operator()(Scalar lambda) const {
    return Scalar(slope) * lambda + Scalar(offset);
  }

  static SpectralResponse affine(double slope, double offset) {
    return {Kind::Affine, slope, offset};
  }
  static SpectralResponse constant(double value) { return affine(0.0, value); }
};

/// Variation operator F = U diag(f(lambda)) U^T with its SVD factors and
/// A = Sigma_F^{-1} V_F^T. Singular values are stored in descending order.
template <typename Scalar = double>
struct VariationOperator {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Mat F;
  Mat U_F;
  Vec sigma_F;
  Mat V_F;
  Mat A;

  Eigen::Index size() const { return F.rows(); }

  /// F^T F, formed explicitly for linear solves.
  Mat gram() const { return F.transpose() * F; }
};

template <typename Scalar>
VariationOperator<Scalar> build_variation_operator(const Spectrum<Scalar> &spec,
                                                   const SpectralResponse &resp) {
  using Vec = typename VariationOperator<Scalar>::Vec;
  const Eigen::Index n = spec.size();
  if (n == 0) throw std::invalid_argument("build_variation_operator: empty spectrum");

  Vec f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i) = resp(spec.eigenvalues(i));
    if (!(f(i) > Scalar(0)))
      throw std::invalid_argument("build_variation_operator: response is not positive at "
                                  "eigenvalue index " +
                                  std::to_string(i));
  }

  // descending singular values; stable so equal responses keep eigen order
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return f(a) > f(b); });

  VariationOperator<Scalar> vo;
  vo.sigma_F.resize(n);
  vo.U_F.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    vo.sigma_F(j) = f(order[j]);
    vo.U_F.col(j) = spec.eigenvectors.col(order[j]);
  }
  if (vo.sigma_F.minCoeff() <= Scalar(1e-12) * vo.sigma_F.maxCoeff())
    throw std::invalid_argument("build_variation_operator: F is numerically singular");
  vo.V_F = vo.U_F;
  vo.F = vo.U_F * vo.sigma_F.asDiagonal() * vo.V_F.transpose();
  // symmetrize away rounding so F == F^T bitwise
  vo.F = (Scalar(0.5) * (vo.F + vo.F.transpose())).eval();
  vo.A = vo.sigma_F.cwiseInverse().asDiagonal() * vo.V_F.transpose();
  return vo;
}

/// Returns A * S.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
apply_A(const VariationOperator<Scalar> &vo, const Eigen::MatrixBase<Derived> &S) {
  if (S.rows() != vo.size())
    throw std::invalid_argument("apply_A: S must have " + std::to_string(vo.size()) + " rows");
  if (S.cols() >= vo.size())
    throw std::invalid_argument("apply_A: column count must be smaller than the vertex count");
  return vo.A * S;
}

} // namespace smoothsamp
