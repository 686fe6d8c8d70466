#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smoothsamp/spectral_ops.hpp"

#include "test_util.hpp"

using namespace smoothsamp;
using testutil::max_abs;

namespace {

VariationOperator<double> sensor_operator(int n, std::uint64_t seed) {
  const Graph g = build_random_sensor_graph(n, 6, seed);
  return build_variation_operator(eigendecompose(laplacian(g)), SpectralResponse::affine(1.0, 0.1));
}

} // namespace

TEST_CASE("variation operator: affine response on the two-vertex path") {
  Eigen::Matrix2d P2;
  P2 << 1, -1, -1, 1;
  const auto vo = build_variation_operator(eigendecompose(P2), SpectralResponse::affine(1.0, 0.1));
  CHECK(vo.sigma_F(0) == doctest::Approx(2.1));
  CHECK(vo.sigma_F(1) == doctest::Approx(0.1));

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(vo.F);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.1));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2.1));
}

TEST_CASE("variation operator: identity response on the standard basis") {
  Spectrum<double> spec;
  spec.eigenvalues = Eigen::Vector3d(0.0, 1.0, 2.0);
  spec.eigenvectors = Eigen::Matrix3d::Identity();
  const auto vo = build_variation_operator(spec, SpectralResponse::constant(1.0));
  CHECK(vo.F.isApprox(Eigen::Matrix3d::Identity(), 0.0));
  CHECK(vo.A.isApprox(Eigen::Matrix3d::Identity(), 0.0));
}

TEST_CASE("variation operator: identity response on a graph basis gives an orthogonal A") {
  const Graph g = build_random_sensor_graph(12, 4, 3);
  const auto vo = build_variation_operator(eigendecompose(laplacian(g)), SpectralResponse::constant(1.0));
  CHECK(max_abs(vo.F - Eigen::MatrixXd::Identity(12, 12)) <= 1e-12);
  CHECK(max_abs(vo.A.transpose() * vo.A - Eigen::MatrixXd::Identity(12, 12)) <= 1e-12);
}

TEST_CASE("variation operator rejects non-positive responses") {
  Eigen::Matrix2d P2;
  P2 << 1, -1, -1, 1;
  const auto spec = eigendecompose(P2);
  CHECK_THROWS_AS(build_variation_operator(spec, SpectralResponse::affine(1.0, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_variation_operator(spec, SpectralResponse::affine(-1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("variation operator invariants on a sensor graph") {
  const auto vo = sensor_operator(16, 8);
  const double smax = vo.sigma_F(0);

  CHECK(vo.sigma_F.minCoeff() > 1e-12 * smax);
  for (Eigen::Index i = 1; i < vo.sigma_F.size(); ++i) CHECK(vo.sigma_F(i) <= vo.sigma_F(i - 1));
  CHECK(max_abs(vo.U_F * vo.sigma_F.asDiagonal() * vo.V_F.transpose() - vo.F) <= 1e-8 * smax);
  CHECK(max_abs(vo.F - vo.F.transpose()) <= 1e-10 * smax);

  // (AS)^T (AS) == S^T (F^T F)^{-1} S against a dense inverse
  const Eigen::MatrixXd FtF_inv = (vo.F.transpose() * vo.F).inverse();
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd S = testutil::gaussian(16, 4, 100 + trial);
    const Eigen::MatrixXd AS = vo.A * S;
    const Eigen::MatrixXd direct = S.transpose() * FtF_inv * S;
    CHECK(max_abs(AS.transpose() * AS - direct) <= 1e-6 * max_abs(direct));
  }
}

TEST_CASE("smoothness measure obeys Parseval over the Laplacian basis") {
  const Graph g = build_random_sensor_graph(24, 6, 4);
  const auto spec = eigendecompose(laplacian(g));
  const SpectralResponse resp = SpectralResponse::affine(1.0, 0.1);
  const auto vo = build_variation_operator(spec, resp);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd x = testutil::gaussian(24, 1, 7 + trial);
    double parseval = 0.0;
    for (Eigen::Index i = 0; i < 24; ++i) {
      const double f = resp(spec.eigenvalues(i));
      const double coef = spec.eigenvectors.col(i).dot(x);
      parseval += f * f * coef * coef;
    }
    CHECK((vo.F * x).squaredNorm() == doctest::Approx(parseval).epsilon(1e-8));
  }
}

TEST_CASE("full column rank of AS matches invertibility of S^T (F^T F)^{-1} S") {
  const auto vo = sensor_operator(12, 2);
  const Eigen::MatrixXd FtF_inv = (vo.F.transpose() * vo.F).inverse();
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd S = testutil::gaussian(12, 4, 300 + trial);
    if (trial % 2) S.col(3) = S.col(0) - 2.0 * S.col(1); // rank deficient half the time
    const Eigen::MatrixXd AS = vo.A * S;
    const Eigen::MatrixXd G = S.transpose() * FtF_inv * S;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(AS);
    const double smin = svd.singularValues().minCoeff(), smax = svd.singularValues().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double emin = es.eigenvalues().cwiseAbs().minCoeff();
    const double emax = es.eigenvalues().cwiseAbs().maxCoeff();

    const bool full_rank = smin > 1e-10 * smax;
    const bool invertible = emin > 1e-10 * emax;
    CHECK(full_rank == invertible);
    CHECK(full_rank == (trial % 2 == 0));
  }
}

TEST_CASE("apply_A") {
  Spectrum<double> spec;
  spec.eigenvalues = Eigen::Vector4d(0, 1, 2, 3);
  spec.eigenvectors = Eigen::Matrix4d::Identity();
  const auto id = build_variation_operator(spec, SpectralResponse::constant(1.0));
  const Eigen::MatrixXd S = testutil::gaussian(4, 2, 1);
  CHECK(apply_A(id, S) == S);
  CHECK(apply_A(id, Eigen::MatrixXd::Zero(4, 2)).isZero(0.0));

  const auto vo = sensor_operator(20, 6);
  const Eigen::MatrixXd T = testutil::gaussian(20, 5, 2);
  const Eigen::MatrixXd got = apply_A(vo, T);
  Eigen::MatrixXd naive = Eigen::MatrixXd::Zero(20, 5);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 20; ++k) naive(i, j) += vo.A(i, k) * T(k, j);
  CHECK(max_abs(got - naive) <= 1e-10);

  CHECK_THROWS_AS(apply_A(vo, Eigen::MatrixXd::Zero(19, 5)), std::invalid_argument);
  CHECK_THROWS_AS(apply_A(vo, Eigen::MatrixXd::Zero(20, 20)), std::invalid_argument);
}

TEST_CASE("variation operator in single precision") {
  Eigen::Matrix2f P2;
  P2 << 1, -1, -1, 1;
  const auto vo = build_variation_operator(eigendecompose(P2), SpectralResponse::affine(1.0, 0.1));
  CHECK(vo.sigma_F(0) == doctest::Approx(2.1f).epsilon(1e-6));
  CHECK(vo.sigma_F(1) == doctest::Approx(0.1f).epsilon(1e-5));
}
