#include "helpers.hpp"

#include "cvree/descent.hpp"
#include "cvree/error.hpp"
#include "cvree/gree.hpp"
#include "cvree/relent.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace cvree;
using testing_support::g;
using testing_support::Rng;

namespace {

ExponentialMatrix thermal_em(std::initializer_list<double> gammas) {
  Vector v(static_cast<Eigen::Index>(gammas.size()));
  int i = 0;
  for (double x : gammas) v[i++] = x;
  return cm_to_em(thermal_cm(v));
}

CovarianceMatrix thermal(std::initializer_list<double> gammas) {
  Vector v(static_cast<Eigen::Index>(gammas.size()));
  int i = 0;
  for (double x : gammas) v[i++] = x;
  return thermal_cm(v);
}

double entropy_sum(const Vector& gammas) {
  double s = 0;
  for (Eigen::Index j = 0; j < gammas.size(); ++j) s += g(gammas[j] - 0.5);
  return s;
}

}  // namespace

TEST(DescentObjective, SigmaEqualsRho) {
  Rng rng(51);
  const CovarianceMatrix rho(testing_support::random_cm(2, rng));
  const DescentState s = make_descent_state(rho, cm_to_em(rho));
  EXPECT_NEAR(descent_objective(s), 0.0, 1e-8);
  EXPECT_NEAR(relative_entropy(rho, rho).value, 0.0, 1e-8);
}

TEST(DescentObjective, MatchesRelativeEntropyBeforeAlignment) {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const CovarianceMatrix rho(testing_support::random_cm(n, rng));
    const ExponentialMatrix sigma = cm_to_em(CovarianceMatrix(testing_support::random_cm(n, rng)));
    const DescentState s = make_descent_state(rho, sigma);
    EXPECT_NEAR(s.objective, relative_entropy(rho, sigma).value, 1e-8);
  }
}

TEST(DescentObjective, AlignedDiagonalGammasDifferentFrame) {
  // beta_bar equals gamma_rho while S_sigma differs from S_rho: alignment leaves a non-negative gap.
  Rng rng(53);
  const Matrix s = testing_support::random_symplectic(2, rng);
  const CovarianceMatrix rho(s * thermal({1.4, 0.8}).matrix() * s.transpose());
  const DescentState st = align_gammas(make_descent_state(rho, thermal_em({1.0, 1.0})));
  EXPECT_GE(st.objective, -1e-12);
}

TEST(DescentObjective, SingleModeThermalAlignmentClosesGap) {
  const DescentState s = make_descent_state(thermal({1.0}), thermal_em({1.5}));
  EXPECT_NEAR(s.objective, -g(0.5) + 1.5 * std::log(2.0), 1e-12);
  const DescentState a = align_gammas(s);
  EXPECT_NEAR(a.gammas_sigma[0], 1.0, 1e-12);
  EXPECT_NEAR(a.objective, 0.0, 1e-12);
}

TEST(AlignGammas, AlreadyAlignedIsNoOp) {
  const DescentState a = align_gammas(make_descent_state(thermal({1.2, 1.7}), thermal_em({2.0, 2.0})));
  const DescentState b = align_gammas(a);
  EXPECT_EQ(a.gammas_sigma, b.gammas_sigma);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(AlignGammas, ExampleDropAndMonotonePath) {
  DescentState s = make_descent_state(thermal({1.2, 1.7}), thermal_em({2.0, 2.0}));
  const Vector bb = beta_bar(s.beta);
  EXPECT_NEAR(bb[0], 1.2, 1e-12);
  EXPECT_NEAR(bb[1], 1.7, 1e-12);
  const double before = descent_objective(s);
  const DescentState a = align_gammas(s);
  EXPECT_NEAR(a.gammas_sigma[0], 1.2, 1e-12);
  EXPECT_NEAR(a.gammas_sigma[1], 1.7, 1e-12);
  EXPECT_LT(a.objective, before);
  EXPECT_NEAR(a.objective, 0.0, 1e-12);
  // Lower gamma_sigma,1 first, then gamma_sigma,2, checking 10 interior points of each sweep.
  double prev = before;
  for (int coord = 0; coord < 2; ++coord) {
    const double from = s.gammas_sigma[coord];
    const double to = bb[coord];
    for (int k = 1; k <= 10; ++k) {
      s.gammas_sigma[coord] = from + (to - from) * k / 10.0;
      const double v = descent_objective(s);
      EXPECT_LE(v, prev + 1e-14);
      prev = v;
    }
  }
  EXPECT_NEAR(prev, a.objective, 1e-12);
}

TEST(DescentStep, DiagonalBetaIsFixedPoint) {
  const DescentState a = align_gammas(make_descent_state(thermal({1.2, 1.7}), thermal_em({2.0, 2.0})));
  const DescentState b = descent_step(a);
  EXPECT_TRUE(b.step_log.empty());
  EXPECT_EQ(b.objective, a.objective);
}

TEST(DescentStep, QqCouplingRemovedBySqueeze) {
  // beta_ij = -beta_{i+n,j+n}: a two-mode squeezed thermal state seen from a thermal sigma.
  const double m = 2.4, k = 1.1;
  const CovarianceMatrix rho = symmetric_cm({m, k, k});
  const DescentState a = align_gammas(make_descent_state(rho, thermal_em({1.0, 1.0})));
  const double bbar = 0.5 * m, bij = 0.5 * k;
  const double predicted_bar = bbar - (bbar - std::sqrt(bbar * bbar - bij * bij));
  const Vector gr = symplectic_eigenvalues(rho.matrix());
  const double predicted = -entropy_sum(gr) + 2 * g(predicted_bar - 0.5);
  EXPECT_NEAR(a.objective, -entropy_sum(gr) + 2 * g(bbar - 0.5), 1e-12);
  const DescentState b = descent_step(a);
  ASSERT_EQ(b.step_log.size(), 1u);
  EXPECT_EQ(b.step_log[0].group, DescentGroup::qq);
  EXPECT_NEAR(b.objective, predicted, 1e-9);
  EXPECT_NEAR(b.step_log[0].gain, a.objective - predicted, 1e-9);
  EXPECT_LT(std::abs(b.beta(0, 1)) + std::abs(b.beta(2, 3)), 1e-6);
}

TEST(DescentStep, GroupChoiceFollowsLargerGain) {
  // Only q_i p_j couplings (beta_{i,j+n} = beta_{i+n,j}): the qp squeeze carries the whole gain.
  const double params[] = {0.4};
  const Matrix sqp = elementary_transform(TransformKind::two_mode_squeeze_qp, params, {0, 1}, 2).matrix();
  const CovarianceMatrix rho(sqp * thermal({1.3, 1.3}).matrix() * sqp.transpose());
  const DescentState a = align_gammas(make_descent_state(rho, thermal_em({1.0, 1.0})));
  const double qq = std::abs(a.beta(0, 1)) + std::abs(a.beta(2, 3));
  const double qp = std::abs(a.beta(0, 3));
  EXPECT_NEAR(a.beta(0, 3), a.beta(2, 1), 1e-12);
  EXPECT_LT(qq, 1e-12);
  EXPECT_GT(qp, 0.1);
  const DescentState b = descent_step(a);
  ASSERT_EQ(b.step_log.size(), 1u);
  EXPECT_EQ(b.step_log[0].group, DescentGroup::qp);
  EXPECT_NEAR(b.objective, 0.0, 1e-9);
}

TEST(DescentStep, InvariantsAlongIteration) {
  Rng rng(54);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 2;
    const CovarianceMatrix rho(testing_support::random_cm(n, rng, 0.55, 2.0));
    DescentState s = align_gammas(
        make_descent_state(rho, cm_to_em(CovarianceMatrix(testing_support::random_cm(n, rng, 0.55, 2.0)))));
    const Vector gr = symplectic_eigenvalues(rho.matrix());
    for (int it = 0; it < 30; ++it) {
      const DescentState next = descent_step(s);
      EXPECT_LE(next.objective, s.objective + 1e-12);
      EXPECT_LT((symplectic_eigenvalues(next.beta) - gr).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_GE(beta_bar(next.beta).minCoeff(), 0.5 - 1e-12);
      EXPECT_LT(symplectic_residual(next.s_sigma.matrix()), 1e-8 * std::max(1.0, max_abs(next.s_sigma.matrix())));
      s = next;
    }
  }
}

TEST(Descend, SigmaEqualsRhoStopsImmediately) {
  const CovarianceMatrix rho = two_mode_squeezed_thermal(0.8, 0.8, 0.4);
  const DescentResult r = descend(rho, cm_to_em(rho), DescentStop::at_rho);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.state.step_log.size(), 1u);
  EXPECT_LT(std::abs(r.state.objective), 1e-8);
}

TEST(Descend, SqueezedThermalToRho) {
  const CovarianceMatrix rho = two_mode_squeezed_thermal(0.7, 0.7, 0.4);
  const DescentResult r = descend(rho, thermal_em({1.0, 1.0}), DescentStop::at_rho);
  EXPECT_TRUE(r.converged) << r.message;
  EXPECT_LE(r.state.objective, 1e-8);
  for (std::size_t i = 1; i < r.objectives.size(); ++i) EXPECT_LE(r.objectives[i], r.objectives[i - 1] + 1e-12);
  Vector bb = beta_bar(r.state.beta);
  Vector gr = symplectic_eigenvalues(rho.matrix());
  std::sort(bb.data(), bb.data() + bb.size());
  std::sort(gr.data(), gr.data() + gr.size());
  EXPECT_LT((bb - gr).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Descend, BorderStopUpperBoundsGree) {
  const CovarianceMatrix rho = two_mode_squeezed_thermal(0.7, 0.7, 0.4);
  ASSERT_FALSE(is_separable(rho).separable);
  const DescentResult r = descend(rho, thermal_em({1.0, 1.0}), DescentStop::at_border);
  ASSERT_TRUE(r.border_em.has_value());
  ASSERT_FALSE(r.crossings.empty());
  const CovarianceMatrix sigma = em_to_cm(*r.border_em);
  EXPECT_LT(std::abs(border_residual(sigma.matrix())), 1e-8);
  EXPECT_TRUE(is_separable(sigma).separable);
  GreeOptions o;
  o.starts = 12;
  const double gv = gree(rho, o).value;
  EXPECT_GE(*r.border_value, gv - 1e-6);
  EXPECT_NEAR(relative_entropy(rho, *r.border_em).value, *r.border_value, 1e-8);
}

TEST(Descend, RejectsMismatchedModes) {
  EXPECT_THROW(descend(thermal({1.0}), thermal_em({1.0, 1.0}), DescentStop::at_rho), Error);
}
