#include "helpers.hpp"

#include "cvree/error.hpp"
#include "cvree/gaussian.hpp"
#include "cvree/gree.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvree;
using testing_support::g;
using testing_support::Rng;

namespace {

Matrix tmsv(double r) {
  const double params[] = {r};
  const Matrix s = elementary_transform(TransformKind::two_mode_squeeze_qq, params, {0, 1}, 2).matrix();
  return 0.5 * s * s.transpose();
}

Matrix two_mode_cm(double a, double b, double c1, double c2) {
  Matrix m(4, 4);
  m << a, c1, 0, 0, c1, b, 0, 0, 0, 0, a, -c2, 0, 0, -c2, b;
  return m;
}

}  // namespace

TEST(BosonicEntropy, Values) {
  EXPECT_EQ(bosonic_entropy(0.0), 0.0);
  EXPECT_NEAR(bosonic_entropy(0.5), 1.5 * std::log(1.5) + 0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(bosonic_entropy(0.5), 0.95477, 1e-5);
  EXPECT_THROW(bosonic_entropy(-0.1), Error);
}

TEST(BosonicEntropy, IncreasingAndConcave) {
  double prev = bosonic_entropy(0.0);
  double prev_slope = INFINITY;
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.025 * i;
    const double v = bosonic_entropy(x);
    const double slope = (v - prev) / 0.025;
    EXPECT_GT(v, prev);
    EXPECT_LT(slope, prev_slope);
    prev = v;
    prev_slope = slope;
  }
}

TEST(VonNeumannEntropy, PureAndThermal) {
  EXPECT_NEAR(von_neumann_entropy(CovarianceMatrix(0.5 * Matrix::Identity(4, 4))), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(CovarianceMatrix(tmsv(0.6))), 0.0, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(CovarianceMatrix(Matrix::Identity(2, 2))), g(0.5), 1e-12);
}

TEST(VonNeumannEntropy, SymplecticInvariance) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix a = testing_support::random_cm(n, rng);
    const Matrix s = testing_support::random_symplectic(n, rng);
    EXPECT_NEAR(von_neumann_entropy(CovarianceMatrix(a)),
                von_neumann_entropy(CovarianceMatrix(s * a * s.transpose())), 1e-8);
  }
}

TEST(CmToEm, ThermalIsLog3) {
  const ExponentialMatrix m = cm_to_em(CovarianceMatrix(Matrix::Identity(2, 2)));
  EXPECT_LT(max_abs(m.matrix() - std::log(3.0) * Matrix::Identity(2, 2)), 1e-14);
  EXPECT_NEAR(std::log(3.0), 1.0986122886681098, 1e-15);
}

TEST(CmToEm, SymmetricStateRoundTrip) {
  const SymmetricParams p{2.0, 1.0, 1.0};
  const CovarianceMatrix a = symmetric_cm(p);
  const ExponentialMatrix m = cm_to_em(a);
  EXPECT_LT(max_abs(em_to_cm(m).matrix() - a.matrix()), 1e-8);
  EXPECT_LT(commutation_residual(m.matrix(), a.matrix()), 1e-8);
  EXPECT_LT(max_abs(m.matrix() - symmetric_em(p).matrix()), 1e-8);
}

TEST(CmToEm, NearPureIsGuarded) {
  Vector gam(1);
  gam << 0.5 + 1e-12;
  try {
    cm_to_em(thermal_cm(gam));
    FAIL() << "expected a guard";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical_guard);
  }
  EXPECT_THROW(cm_to_em(CovarianceMatrix(tmsv(0.3))), Error);
}

TEST(CmToEm, SpectralRouteAgrees) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    const CovarianceMatrix a(testing_support::random_cm(n, rng));
    EXPECT_LT(max_abs(cm_to_em(a).matrix() - cm_to_em_spectral(a).matrix()), 1e-8);
  }
}

TEST(EmToCm, Log3IsThermal) {
  const CovarianceMatrix a = em_to_cm(ExponentialMatrix(std::log(3.0) * Matrix::Identity(2, 2)));
  EXPECT_LT(max_abs(a.matrix() - Matrix::Identity(2, 2)), 1e-14);
}

TEST(EmToCm, RandomRoundTrip) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix s = testing_support::random_symplectic(n, rng);
    Vector d(2 * n);
    for (int j = 0; j < n; ++j) d[j] = d[n + j] = u(rng);
    const Matrix si = s.inverse();
    const ExponentialMatrix m(si.transpose() * d.asDiagonal() * si);
    const ExponentialMatrix back = cm_to_em(em_to_cm(m));
    EXPECT_LT(max_abs(back.matrix() - m.matrix()), 1e-8 * std::max(1.0, max_abs(m.matrix())));
  }
}

TEST(EmToCm, TypeIVBorderHasUnitSymplecticEigenvalues) {
  const ExponentialMatrix m = border_em(make_border_params(BorderType::IV, 1.0, 1.0));
  const Vector gam = symplectic_eigenvalues(em_to_cm(m).matrix());
  EXPECT_NEAR(gam[0], 1.0, 1e-10);
  EXPECT_NEAR(gam[1], 1.0, 1e-10);
}

TEST(EmToCm, RejectsNonPositiveSpectrum) {
  EXPECT_THROW(em_to_cm(ExponentialMatrix(-Matrix::Identity(2, 2))), Error);
}

TEST(NormalizationLogC, Values) {
  Vector gam(1);
  gam << 1.5;
  EXPECT_NEAR(normalization_log_c(gam), -0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(normalization_log_c(gam), -0.34657359, 1e-8);
  gam << 1e8;
  EXPECT_LT(normalization_log_c(gam), -18.0);
  gam << 0.5;
  EXPECT_THROW(normalization_log_c(gam), Error);
}

TEST(NormalizationLogC, SinhIdentity) {
  for (int i = 1; i <= 200; ++i) {
    const double gamma = 0.5 + 0.02 * i;
    const double mt = em_eigenvalue(gamma);
    const double lhs = 2.0 * std::sinh(0.5 * mt);
    const double rhs = 1.0 / std::sqrt(gamma * gamma - 0.25);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs));
  }
}

TEST(StandardForm, TwoModeSqueezedVacuum) {
  const StandardForm sf = standard_form(CovarianceMatrix(tmsv(0.5)));
  EXPECT_NEAR(sf.a, 0.5 * std::cosh(1.0), 1e-10);
  EXPECT_NEAR(sf.b, 0.5 * std::cosh(1.0), 1e-10);
  EXPECT_NEAR(sf.c1, 0.5 * std::sinh(1.0), 1e-10);
  EXPECT_NEAR(sf.c2, 0.5 * std::sinh(1.0), 1e-10);
  EXPECT_NEAR(sf.a, 0.77154, 1e-5);
  EXPECT_NEAR(sf.c1, 0.58760, 1e-5);
}

TEST(StandardForm, FixedPoint) {
  const Matrix a = two_mode_cm(1.2, 0.9, 0.5, 0.3);
  const StandardForm sf = standard_form(CovarianceMatrix(a));
  EXPECT_NEAR(sf.a, 1.2, 1e-12);
  EXPECT_NEAR(sf.b, 0.9, 1e-12);
  EXPECT_NEAR(sf.c1, 0.5, 1e-12);
  EXPECT_NEAR(sf.c2, 0.3, 1e-12);
  EXPECT_LT(max_abs(sf.matrix() - a), 1e-12);
}

TEST(StandardForm, ProductState) {
  Vector d(4);
  d << 1, 2, 1, 2;
  const StandardForm sf = standard_form(CovarianceMatrix(0.5 * Matrix(d.asDiagonal())));
  EXPECT_NEAR(sf.c1, 0.0, 1e-14);
  EXPECT_NEAR(sf.c2, 0.0, 1e-14);
  EXPECT_NEAR(sf.a, 0.5, 1e-14);
  EXPECT_NEAR(sf.b, 1.0, 1e-14);
}

TEST(StandardForm, PreservesLocalInvariants) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = testing_support::random_cm(2, rng);
    const StandardForm sf = standard_form(CovarianceMatrix(a));
    const Matrix std_m = sf.matrix();
    EXPECT_LT(max_abs(sf.local.matrix() * a * sf.local.matrix().transpose() - std_m), 1e-8 * max_abs(a));
    auto block = [](const Matrix& m, int r, int c) {
      Matrix b(2, 2);
      b << m(r, c), m(r, 2 + c), m(2 + r, c), m(2 + r, 2 + c);
      return b;
    };
    const double tol = 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff() * a.cwiseAbs().maxCoeff());
    EXPECT_NEAR(block(a, 0, 0).determinant(), sf.a * sf.a, tol);
    EXPECT_NEAR(block(a, 1, 1).determinant(), sf.b * sf.b, tol);
    // alpha_p carries -c2, so det C = -c1 c2.
    EXPECT_NEAR(block(a, 0, 1).determinant(), -sf.c1 * sf.c2, tol);
    EXPECT_NEAR(a.determinant(), std_m.determinant(), 1e-8 * std::max(1.0, std::abs(a.determinant())));
    EXPECT_GE(sf.c1 + 1e-12, std::abs(sf.c2));
  }
}

TEST(Classify, Examples) {
  StandardForm sf;
  sf.a = sf.b = 1.1;
  sf.c1 = 0.5;
  sf.c2 = 0.2;
  EXPECT_EQ(classify(sf).label, BorderType::IV);

  sf.a = 1.2;
  sf.b = 0.9;
  sf.c1 = 0.5;
  sf.c2 = 0.49;
  const TypeLabel t1 = classify(sf);
  EXPECT_EQ(t1.label, BorderType::I);
  EXPECT_NEAR(t1.ratio, (1.2 / 0.9 + 0.9 / 1.2) / (0.5 / 0.49 + 0.49 / 0.5), 1e-14);

  sf.a = 1.01;
  sf.b = 1.0;
  sf.c1 = 0.6;
  sf.c2 = 0.2;
  EXPECT_EQ(classify(sf).label, BorderType::II);

  // ratio exactly one: a/b = c1/c2
  sf.a = 1.2;
  sf.b = 0.6;
  sf.c1 = 0.4;
  sf.c2 = 0.2;
  EXPECT_EQ(classify(sf).label, BorderType::III);

  sf.c2 = 0.0;
  EXPECT_THROW(classify(sf), Error);
}

TEST(Classify, InvariantUnderLocalOperations) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = testing_support::random_cm(2, rng);
    const StandardForm sf = standard_form(CovarianceMatrix(a));
    if (sf.c2 <= 1e-6) continue;
    const Matrix l = testing_support::random_local_symplectic(rng);
    const StandardForm sf2 = standard_form(CovarianceMatrix(l * a * l.transpose()));
    const TypeLabel t1 = classify(sf);
    const TypeLabel t2 = classify(sf2);
    EXPECT_EQ(t1.label, t2.label);
    EXPECT_NEAR(t1.ratio, t2.ratio, 1e-7 * t1.ratio);
  }
}

TEST(IsSeparable, Examples) {
  const Separability vac = is_separable(CovarianceMatrix(tmsv(0.0)));
  EXPECT_TRUE(vac.separable);
  EXPECT_NEAR(vac.border_residual, 0.0, 1e-14);  // vacuum: every determinant term is 1/16

  const Separability sq = is_separable(CovarianceMatrix(tmsv(0.5)));
  EXPECT_FALSE(sq.separable);
  EXPECT_NEAR(sq.min_ppt_gamma, 0.5 * std::exp(-1.0), 1e-10);

  const Separability thermal = is_separable(CovarianceMatrix(Matrix::Identity(4, 4)));
  EXPECT_TRUE(thermal.separable);
  EXPECT_GT(thermal.border_residual, 0.0);
}

TEST(IsSeparable, TypeIBorderState) {
  const double r = 0.5 * std::asinh(std::sqrt(0.5));
  const BorderParams p = make_border_params(BorderType::I, 1.0, 1.0, r);
  const Separability s = is_separable(em_to_cm(border_em(p)));
  EXPECT_LT(std::abs(s.border_residual), 1e-8);
  EXPECT_NEAR(s.min_ppt_gamma, 0.5, 1e-8);
}

TEST(IsSeparable, PptAgreesWithBorderResidualSign) {
  Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix a = testing_support::random_cm(2, rng, 0.55, 1.5);
    const Separability s = is_separable(CovarianceMatrix(a));
    if (std::abs(s.border_residual) < 1e-9) continue;
    ++checked;
    EXPECT_EQ(s.separable, s.border_residual > 0.0) << "trial " << trial;
    EXPECT_EQ(s.separable, s.min_ppt_gamma >= 0.5);
  }
  EXPECT_GT(checked, 900);
}

TEST(SymmetricEm, Thermal) {
  const ExponentialMatrix m = symmetric_em({2.0, 0.0, 0.0});
  EXPECT_LT(max_abs(m.matrix() - std::log(3.0) * Matrix::Identity(4, 4)), 1e-12);
}

TEST(SymmetricEm, MatchesGeneralConversion) {
  for (const SymmetricParams p : {SymmetricParams{2.0, 1.0, 1.0}, SymmetricParams{1.6, 1.0, 0.7},
                                  SymmetricParams{2.0, 0.5, -0.3}}) {
    EXPECT_LT(max_abs(symmetric_em(p).matrix() - cm_to_em(symmetric_cm(p)).matrix()), 1e-8);
  }
}

TEST(SymmetricEm, PureLimitIsRejected) {
  EXPECT_THROW(symmetric_em({1.0, 1.0 - 1e-13, 1.0 - 1e-13}), Error);
  EXPECT_THROW(symmetric_em({1.0, 1.0, 1.0}), Error);
}

TEST(BorderEm, PositiveDefiniteForAllFamilies) {
  Rng rng(17);
  std::uniform_real_distribution<double> gam(0.6, 3.0);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 80; ++trial) {
    const double ga = gam(rng), gb = gam(rng);
    const auto type = static_cast<BorderType>(trial % 4);
    double shape = 0.0;
    if (type == BorderType::I) shape = unit(rng) * type_i_max_squeeze(ga, gb);
    if (type == BorderType::II) shape = unit(rng) * 1.5707963267948966;
    if (type == BorderType::III) shape = trial % 8 == 2 ? 0.0 : 1.0;
    const ExponentialMatrix m = border_em(make_border_params(type, ga, gb, shape));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}
