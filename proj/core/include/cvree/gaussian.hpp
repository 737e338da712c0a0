#pragma once

// Gaussian states in correlation-matrix (CM) and exponential-matrix (EM) form.

#include "cvree/symplectic.hpp"

#include <string_view>

namespace cvree {

/// Second-moment matrix alpha, vacuum variance 1/2. Symmetric on construction
/// (within 1e-10, then symmetrised); physicality is checked by the operations.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix alpha);

  int modes() const { return static_cast<int>(alpha_.rows() / 2); }
  const Matrix& matrix() const { return alpha_; }

 private:
  Matrix alpha_;
};

/// M in rho = exp(-1/2 F^T M F) / Z. Symmetric positive definite on construction.
class ExponentialMatrix {
 public:
  explicit ExponentialMatrix(Matrix m);

  int modes() const { return static_cast<int>(m_.rows() / 2); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

inline constexpr double kPhysicalTol = 1e-10;
inline constexpr double kPureGuard = 1e-9;

bool is_physical(const CovarianceMatrix& cm, double tol = kPhysicalTol);

/// g(x) = (x+1) log(x+1) - x log x, nats.
double bosonic_entropy(double x);
double von_neumann_entropy(const CovarianceMatrix& cm);

/// log((2 gamma + 1) / (2 gamma - 1)); throws numerical_guard within kPureGuard of 1/2.
double em_eigenvalue(double gamma);
/// 1/2 coth(mt / 2)
double cm_eigenvalue(double mt);

ExponentialMatrix cm_to_em(const CovarianceMatrix& cm);
CovarianceMatrix em_to_cm(const ExponentialMatrix& em);

/// Independent conversion through the spectral calculus of Delta alpha:
/// M = f(Delta alpha) Delta^{-1} with f(+-i gamma) = +-i log((2 gamma + 1)/(2 gamma - 1)).
ExponentialMatrix cm_to_em_spectral(const CovarianceMatrix& cm);

/// max |M alpha Delta^{-1} - Delta^{-1} alpha M|
double commutation_residual(const Matrix& m, const Matrix& alpha);

/// log c = -1/2 sum log(gamma_j^2 - 1/4)
double normalization_log_c(const Vector& gammas);

/// Result of reducing a 4x4 symmetric positive matrix with local symplectics:
/// local * m * local^T = [[a, cq, 0, 0], [cq, b, 0, 0], [0, 0, a, cp], [0, 0, cp, b]],
/// cq >= |cp| and cq >= 0.
struct LocalReduction {
  double a = 0;
  double b = 0;
  double cq = 0;
  double cp = 0;
  Matrix local;
};

LocalReduction reduce_two_mode(const Matrix& m);

/// Two-mode standard form with the alpha_p off-diagonal stored as -c2.
struct StandardForm {
  double a = 0;
  double b = 0;
  double c1 = 0;
  double c2 = 0;
  SymplecticMatrix local = SymplecticMatrix::identity(2);

  Matrix matrix() const;
};

StandardForm standard_form(const CovarianceMatrix& cm);
Matrix standard_form_matrix(double a, double b, double c1, double c2);

enum class BorderType { I, II, III, IV };
std::string_view to_string(BorderType t);

struct TypeLabel {
  BorderType label = BorderType::I;
  double ratio = 0;  // (a/b + b/a) / (c1/c2 + c2/c1)
};

inline constexpr double kClassifyTol = 1e-9;

double classification_ratio(double a, double b, double c1, double c2);
TypeLabel classify(const StandardForm& sf, double tol = kClassifyTol);

struct Separability {
  bool separable = false;
  double border_residual = 0;  // 4 det alpha - det A - det B - 2 |det C| + 1/4
  double min_ppt_gamma = 0;    // smallest symplectic eigenvalue after p_B -> -p_B
};

Separability is_separable(const CovarianceMatrix& cm);
double border_residual(const Matrix& alpha);

struct SymmetricParams {
  double m = 0;
  double kq = 0;
  double kp = 0;
};

void validate(const SymmetricParams& p);
/// alpha_q = 1/2 [[m, kq], [kq, m]], alpha_p = 1/2 [[m, -kp], [-kp, m]]
CovarianceMatrix symmetric_cm(const SymmetricParams& p);
ExponentialMatrix symmetric_em(const SymmetricParams& p);

// Convenience constructors.
CovarianceMatrix thermal_cm(const Vector& gammas);
/// R(r) (+) R(-r) applied to diag(gamma_a, gamma_b, gamma_a, gamma_b).
CovarianceMatrix two_mode_squeezed_thermal(double gamma_a, double gamma_b, double r);

}  // namespace cvree
