#include "helpers.hpp"

#include "cvree/error.hpp"
#include "cvree/symplectic.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

using namespace cvree;
using testing_support::Rng;

namespace {

// Moduli of the eigenvalues of i * Delta * alpha, paired and sorted descending.
Vector reference_symplectic_eigenvalues(const Matrix& alpha) {
  const int n = static_cast<int>(alpha.rows() / 2);
  const Eigen::MatrixXcd k = std::complex<double>(0.0, 1.0) * (delta_matrix(n) * alpha).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(k);
  std::vector<double> v;
  for (int i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()[i].real() > 0) v.push_back(es.eigenvalues()[i].real());
  }
  std::sort(v.rbegin(), v.rend());
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = v.at(static_cast<std::size_t>(i));
  return out;
}

double diag_residual(const WilliamsonResult& w, const Matrix& alpha) {
  const int n = static_cast<int>(alpha.rows() / 2);
  Vector d(2 * n);
  d << w.gammas, w.gammas;
  return max_abs(w.s.matrix() * d.asDiagonal() * w.s.matrix().transpose() - alpha);
}

}  // namespace

TEST(SymplecticForm, SingleModeBlock) {
  const SymplecticForm f = symplectic_form(1);
  Matrix expect(2, 2);
  expect << 0, 1, -1, 0;
  EXPECT_EQ(f.n, 1);
  EXPECT_EQ(f.delta, expect);
}

TEST(SymplecticForm, TwoModeBlock) {
  Matrix expect(4, 4);
  expect << 0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0;
  EXPECT_EQ(symplectic_form(2).delta, expect);
}

TEST(SymplecticForm, SquaresToMinusIdentity) {
  const Matrix d = delta_matrix(2);
  EXPECT_EQ(d * d, -Matrix::Identity(4, 4));
  EXPECT_EQ(d.transpose(), -d);
}

TEST(SymplecticForm, RejectsNonPositiveModeCount) { EXPECT_THROW(symplectic_form(0), Error); }

TEST(ElementaryTransform, ZeroAngleRotationIsIdentity) {
  const double p[] = {0.0};
  EXPECT_EQ(elementary_transform(TransformKind::two_mode_rotation_qq, p, {0, 1}, 2).matrix(), Matrix::Identity(4, 4));
}

TEST(ElementaryTransform, TwoModeSqueezeIsSymplectic) {
  const double p[] = {0.3};
  const SymplecticMatrix s = elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, 1}, 2);
  EXPECT_TRUE(is_symplectic(s.matrix(), 1e-12));
}

TEST(ElementaryTransform, LocalSqueezeXMatchesDiagonalForm) {
  const double p[] = {2.0};
  const Matrix s = elementary_transform(TransformKind::local_squeeze_X, p, {0, 1}, 2).matrix();
  Vector d(4);
  d << std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), std::sqrt(2.0);
  EXPECT_LT(max_abs(s - Matrix(d.asDiagonal())), 1e-15);
}

TEST(ElementaryTransform, LocalSqueezeYMatchesDiagonalForm) {
  const double p[] = {3.0};
  const Matrix s = elementary_transform(TransformKind::local_squeeze_Y, p, {0, 1}, 2).matrix();
  Vector d(4);
  d << std::sqrt(3.0), std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0);
  EXPECT_LT(max_abs(s - Matrix(d.asDiagonal())), 1e-15);
}

TEST(ElementaryTransform, TwoModeSqueezeBlocks) {
  const double r = 0.7;
  const double p[] = {r};
  const Matrix s = elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, 1}, 2).matrix();
  EXPECT_NEAR(s(0, 0), std::cosh(r), 1e-15);
  EXPECT_NEAR(s(0, 1), std::sinh(r), 1e-15);
  EXPECT_NEAR(s(2, 2), std::cosh(r), 1e-15);
  EXPECT_NEAR(s(2, 3), -std::sinh(r), 1e-15);
}

TEST(ElementaryTransform, EveryKindIsSymplecticOnThreeModes) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<TransformKind> kinds{
      TransformKind::local_rotation,       TransformKind::local_squeeze_X,     TransformKind::local_squeeze_Y,
      TransformKind::two_mode_rotation_qq, TransformKind::two_mode_squeeze_qq, TransformKind::two_mode_rotation_qp,
      TransformKind::two_mode_squeeze_qp,  TransformKind::general_local};
  for (TransformKind k : kinds) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> p(k == TransformKind::general_local ? 6 : k == TransformKind::local_rotation ? 2 : 1);
      for (double& v : p) v = u(rng);
      if (k == TransformKind::local_squeeze_X || k == TransformKind::local_squeeze_Y) p[0] = std::exp(p[0]);
      const SymplecticMatrix s = elementary_transform(k, p, {2, 0}, 3);
      EXPECT_LT(symplectic_residual(s.matrix()), 1e-12) << to_string(k);
      EXPECT_NEAR(s.matrix().determinant(), 1.0, 1e-10) << to_string(k);
    }
  }
}

TEST(ElementaryTransform, RejectsBadModes) {
  const double p[] = {0.1};
  EXPECT_THROW(elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, 0}, 2), Error);
  EXPECT_THROW(elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, 2}, 2), Error);
  EXPECT_THROW(elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, std::nullopt}, 2), Error);
  EXPECT_THROW(elementary_transform(TransformKind::local_rotation, p, {-1, std::nullopt}, 2), Error);
}

TEST(ElementaryTransform, KindNamesRoundTrip) {
  for (auto k : {TransformKind::local_rotation, TransformKind::two_mode_squeeze_qp, TransformKind::general_local}) {
    EXPECT_EQ(parse_transform_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_transform_kind("shear").has_value());
}

TEST(SymplecticEigenvalues, TwoModeVacuum) {
  const Vector g = symplectic_eigenvalues(0.5 * Matrix::Identity(4, 4));
  EXPECT_NEAR(g[0], 0.5, 1e-14);
  EXPECT_NEAR(g[1], 0.5, 1e-14);
}

TEST(SymplecticEigenvalues, SymmetricState) {
  const double m = 2, kq = 1, kp = 1;
  Matrix a = Matrix::Zero(4, 4);
  a << m, kq, 0, 0, kq, m, 0, 0, 0, 0, m, -kp, 0, 0, -kp, m;
  a *= 0.5;
  const Vector g = symplectic_eigenvalues(a);
  const double expect = 0.5 * std::sqrt((m + kq) * (m - kp));
  EXPECT_NEAR(g[0], expect, 1e-12);
  EXPECT_NEAR(g[1], 0.5 * std::sqrt((m - kq) * (m + kp)), 1e-12);
  EXPECT_NEAR(g[0], 0.8660254037844386, 1e-12);
  const Vector ref = reference_symplectic_eigenvalues(a);
  EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymplecticEigenvalues, DiagonalStateSortedDescending) {
  Vector d(4);
  d << 0.7, 1.5, 0.7, 1.5;
  const Vector g = symplectic_eigenvalues(Matrix(d.asDiagonal()));
  EXPECT_NEAR(g[0], 1.5, 1e-14);
  EXPECT_NEAR(g[1], 0.7, 1e-14);
}

TEST(SymplecticEigenvalues, RejectsAsymmetricInput) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 0.1;
  EXPECT_THROW(symplectic_eigenvalues(a), Error);
}

TEST(SymplecticEigenvalues, InvariantUnderConjugation) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix a = testing_support::random_cm(n, rng);
    const Matrix s = testing_support::random_symplectic(n, rng);
    const Vector g0 = symplectic_eigenvalues(a);
    const Vector g1 = symplectic_eigenvalues(s * a * s.transpose());
    EXPECT_LT((g0 - g1).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((g0 - reference_symplectic_eigenvalues(a)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Williamson, ThermalSingleMode) {
  const WilliamsonResult w = williamson(Matrix::Identity(2, 2));
  EXPECT_LT(max_abs(w.s.matrix() - Matrix::Identity(2, 2)), 1e-14);
  EXPECT_NEAR(w.gammas[0], 1.0, 1e-14);
}

TEST(Williamson, SymmetricStateEigenvectorRoute) {
  const double m = 2, kq = 1, kp = 1;
  Matrix a(4, 4);
  a << m, kq, 0, 0, kq, m, 0, 0, 0, 0, m, -kp, 0, 0, -kp, m;
  a *= 0.5;
  const WilliamsonResult w = williamson_qp(a);
  const double s1 = std::pow((m + kq) / (m - kp), 0.25);
  const double s2 = std::pow((m - kq) / (m + kp), 0.25);
  EXPECT_NEAR(s1, 1.3160740129524924, 1e-12);
  EXPECT_NEAR(s2, 0.7598356856515925, 1e-12);
  const Matrix sq = w.s.matrix().topLeftCorner(2, 2);
  // Columns are fixed up to the sign freedom of each eigenvector.
  Matrix expect(2, 2);
  expect << s1, s2, s1, -s2;
  expect /= std::sqrt(2.0);
  for (int c = 0; c < 2; ++c) {
    const double sign = sq(0, c) * expect(0, c) > 0 ? 1.0 : -1.0;
    EXPECT_LT((sq.col(c) - sign * expect.col(c)).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_LT(symplectic_residual(w.s.matrix()), 1e-12);
  EXPECT_LT(diag_residual(w, a), 1e-12);
}

TEST(Williamson, QpRouteHasBlockInverseStructure) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    // Both blocks dominate I/2, so every gamma^2 (eigenvalue of alpha_p alpha_q) exceeds 1/4.
    std::normal_distribution<double> nd(0.0, 0.6);
    Matrix bq(n, n), bp(n, n);
    for (int i = 0; i < n * n; ++i) {
      bq(i) = nd(rng);
      bp(i) = nd(rng);
    }
    Matrix a = Matrix::Zero(2 * n, 2 * n);
    a.topLeftCorner(n, n) = bq * bq.transpose() + 0.5 * Matrix::Identity(n, n);
    a.bottomRightCorner(n, n) = bp * bp.transpose() + 0.5 * Matrix::Identity(n, n);
    ASSERT_TRUE(is_qp_block_diagonal(a));
    const WilliamsonResult w = williamson_qp(a);
    const Matrix& s = w.s.matrix();
    EXPECT_LT(max_abs(s.topRightCorner(n, n)), 1e-14);
    EXPECT_LT(max_abs(s.bottomLeftCorner(n, n)), 1e-14);
    const Matrix sq = s.topLeftCorner(n, n);
    const Matrix sp = s.bottomRightCorner(n, n);
    EXPECT_LT(max_abs(sp.transpose() * sq - Matrix::Identity(n, n)), 1e-8);
    EXPECT_LT(diag_residual(w, a), 1e-8);
    const WilliamsonResult wg = williamson_general(a);
    EXPECT_LT((w.gammas - wg.gammas).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(diag_residual(wg, a), 1e-8);
  }
}

TEST(Williamson, RandomRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix a = testing_support::random_cm(n, rng);
    const WilliamsonResult w = williamson(a);
    EXPECT_LT(symplectic_residual(w.s.matrix()), 1e-10);
    EXPECT_LT(diag_residual(w, a), 1e-8);
    EXPECT_LT((w.gammas - symplectic_eigenvalues(a)).cwiseAbs().maxCoeff(), 1e-8);
    for (int j = 1; j < n; ++j) EXPECT_GE(w.gammas[j - 1], w.gammas[j]);
  }
}

TEST(Williamson, DegenerateSpectrum) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 2;
    const Matrix s = testing_support::random_symplectic(n, rng);
    const Matrix a = 1.3 * s * s.transpose();
    const WilliamsonResult w = williamson(a);
    EXPECT_LT(symplectic_residual(w.s.matrix()), 1e-10);
    EXPECT_LT(diag_residual(w, a), 1e-8);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(w.gammas[j], 1.3, 1e-8);
  }
}

TEST(IsSymplectic, Examples) {
  EXPECT_TRUE(is_symplectic(Matrix::Identity(4, 4), 1e-12));
  Vector d(4);
  d << 2, 1, 1, 1;
  EXPECT_FALSE(is_symplectic(Matrix(d.asDiagonal()), 1e-8));
  const double p[] = {0.5};
  EXPECT_TRUE(is_symplectic(elementary_transform(TransformKind::two_mode_squeeze_qq, p, {0, 1}, 2).matrix(), 1e-12));
  EXPECT_THROW(is_symplectic(Matrix::Identity(3, 3), 1e-12), Error);
}

TEST(SymplecticMatrix, ConstructionChecksCondition) {
  Vector d(2);
  d << 2, 1;
  EXPECT_THROW(SymplecticMatrix(Matrix(d.asDiagonal())), Error);
  Rng rng(1);
  const Matrix s = testing_support::random_symplectic(2, rng);
  const SymplecticMatrix sm(s);
  EXPECT_LT(max_abs(sm.inverse().matrix() * s - Matrix::Identity(4, 4)), 1e-10);
  EXPECT_LT(max_abs(symplectic_inverse(s) - s.inverse()), 1e-10);
}
