#pragma once

// Monotone relative-entropy descent over Gaussian sigma built from elementary
// symplectic moves, run until sigma reaches rho or crosses the separable border.

#include "cvree/gaussian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvree {

/// One elementary move V acting on beta as beta -> V beta V^T (sigma's
/// symplectic changes by V^{-1} on the right).
struct DescentMove {
  TransformKind kind = TransformKind::local_rotation;
  int first = 0;
  int second = -1;  // -1 for single-mode moves
  double param = 0.0;
};

enum class DescentGroup { local, qq, qp };
std::string_view to_string(DescentGroup g);

struct DescentStep {
  int iteration = 0;
  DescentGroup group = DescentGroup::local;
  std::vector<DescentMove> moves;
  double gain = 0.0;
  double objective = 0.0;
};

struct DescentState {
  Vector gammas_rho;  // descending
  SymplecticMatrix s_sigma = SymplecticMatrix::identity(1);
  Vector gammas_sigma;
  Matrix beta;  // S_sigma^{-1} alpha_rho S_sigma^{-T}
  double objective = 0.0;
  std::vector<DescentStep> step_log;
};

/// Starts a state from rho and a Gaussian sigma (no alignment performed).
DescentState make_descent_state(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& sigma);

/// 1/2 (beta_jj + beta_{n+j,n+j})
Vector beta_bar(const Matrix& beta);

/// S(rho||sigma) = -sum g(gamma_rho - 1/2) + sum [1/2 log(gamma_s^2 - 1/4) + Mt_s beta_bar],
/// which reduces to -sum g(gamma_rho - 1/2) + sum g(beta_bar - 1/2) once aligned.
double descent_objective(const DescentState& state);

/// gamma_sigma := beta_bar. Throws numerical_guard if some beta_bar <= 1/2.
DescentState align_gammas(const DescentState& state);

/// One group of moves on the most strongly coupled mode pair, followed by local
/// diagonalisation and realignment. Returns the state unchanged at a fixed point.
DescentState descent_step(const DescentState& state);

CovarianceMatrix sigma_cm(const DescentState& state);

enum class DescentStop { at_border, at_rho };

struct BorderCrossing {
  int iteration = 0;  // crossing lies between iterate `iteration - 1` and `iteration`
  double t = 0.0;     // position along that step
  bool into_separable = false;
  double value = 0.0;  // S(rho||sigma) at the crossing
  double border_residual = 0.0;
  CovarianceMatrix sigma{Matrix::Identity(2, 2) * 0.5};
};

struct DescentOptions {
  int max_iterations = 10000;
  double tol = 1e-12;  // stop when one step lowers the objective by less than this
};

struct DescentResult {
  DescentState state;
  bool converged = false;
  std::string message;
  std::vector<double> objectives;  // after alignment of sigma0, then after every step
  std::vector<BorderCrossing> crossings;
  std::optional<ExponentialMatrix> border_em;  // crossing with the smallest value
  std::optional<double> border_value;
};

/// stop = at_rho runs to convergence and reports failure unless the terminal
/// objective is <= 1e-8. stop = at_border also records every separability
/// crossing, bisected along the step, and returns the last separable iterate.
DescentResult descend(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& sigma0, DescentStop stop,
                      const DescentOptions& options = {});

}  // namespace cvree
