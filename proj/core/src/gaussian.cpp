#include "cvree/gaussian.hpp"

#include "cvree/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <string>

namespace cvree {

namespace {

void require_two_mode(const Matrix& m, const char* what) {
  if (m.rows() != 4 || m.cols() != 4) fail_validation(std::string(what) + ": expected a two-mode (4x4) matrix");
}

Matrix symmetrised(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    fail_validation(std::string(what) + ": expected a square matrix of even dimension");
  }
  if (!m.allFinite()) fail_validation(std::string(what) + ": non-finite entries");
  if (!is_symmetric(m, 1e-10)) fail_validation(std::string(what) + ": matrix is not symmetric within 1e-10");
  return 0.5 * (m + m.transpose());
}

void require_physical(const CovarianceMatrix& cm, const char* what) {
  if (!is_physical(cm)) fail_validation(std::string(what) + ": unphysical covariance matrix (symplectic eigenvalue below 1/2)");
}

// Symmetric square root of a 2x2 positive matrix with unit determinant.
Eigen::Matrix2d unimodular_sqrt(const Eigen::Matrix2d& x) {
  return (x + Eigen::Matrix2d::Identity()) / std::sqrt(x.trace() + 2.0);
}

Eigen::Matrix2d block(const Matrix& m, int r0, int r1, int c0, int c1) {
  Eigen::Matrix2d b;
  b << m(r0, c0), m(r0, c1), m(r1, c0), m(r1, c1);
  return b;
}

// Mode A occupies (q_A, p_A) = (0, 2), mode B (q_B, p_B) = (1, 3).
Matrix local_embed(const Eigen::Matrix2d& la, const Eigen::Matrix2d& lb) {
  Matrix l = Matrix::Zero(4, 4);
  l(0, 0) = la(0, 0);
  l(0, 2) = la(0, 1);
  l(2, 0) = la(1, 0);
  l(2, 2) = la(1, 1);
  l(1, 1) = lb(0, 0);
  l(1, 3) = lb(0, 1);
  l(3, 1) = lb(1, 0);
  l(3, 3) = lb(1, 1);
  return l;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Matrix alpha) : alpha_(symmetrised(alpha, "CovarianceMatrix")) {}

ExponentialMatrix::ExponentialMatrix(Matrix m) : m_(symmetrised(m, "ExponentialMatrix")) {
  Eigen::LLT<Matrix> llt(m_);
  if (llt.info() != Eigen::Success) {
    fail_guard("ExponentialMatrix: matrix is not positive definite (non-positive symplectic spectrum)");
  }
}

bool is_physical(const CovarianceMatrix& cm, double tol) {
  Eigen::LLT<Matrix> llt(cm.matrix());
  if (llt.info() != Eigen::Success) return false;
  return symplectic_eigenvalues(cm.matrix()).minCoeff() >= 0.5 - tol;
}

double bosonic_entropy(double x) {
  if (!(x >= 0.0)) fail_validation("bosonic_entropy: argument must be non-negative");
  if (x == 0.0) return 0.0;
  return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

double von_neumann_entropy(const CovarianceMatrix& cm) {
  require_physical(cm, "von_neumann_entropy");
  double s = 0.0;
  for (double g : symplectic_eigenvalues(cm.matrix())) s += bosonic_entropy(std::max(0.0, g - 0.5));
  return s;
}

double em_eigenvalue(double gamma) {
  if (!(gamma > 0.5 + kPureGuard)) {
    fail_guard("pure direction: symplectic eigenvalue " + std::to_string(gamma) +
               " is within 1e-9 of 1/2, the exponential matrix diverges");
  }
  return std::log1p(2.0 / (2.0 * gamma - 1.0));
}

double cm_eigenvalue(double mt) {
  if (!(mt > 0.0) || !std::isfinite(mt)) fail_guard("exponential matrix has a non-positive symplectic eigenvalue");
  return 0.5 / std::tanh(0.5 * mt);
}

ExponentialMatrix cm_to_em(const CovarianceMatrix& cm) {
  require_physical(cm, "cm_to_em");
  const WilliamsonResult w = williamson(cm.matrix());
  const Eigen::Index n = w.gammas.size();
  Vector mt(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) mt[j] = mt[n + j] = em_eigenvalue(w.gammas[j]);
  const Matrix sinv = symplectic_inverse(w.s.matrix());
  Matrix m = sinv.transpose() * mt.asDiagonal() * sinv;
  return ExponentialMatrix(0.5 * (m + m.transpose()));
}

CovarianceMatrix em_to_cm(const ExponentialMatrix& em) {
  const WilliamsonResult w = williamson(em.matrix());
  const Eigen::Index n = w.gammas.size();
  Vector g(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) g[j] = g[n + j] = cm_eigenvalue(w.gammas[j]);
  // M = S_M diag S_M^T = S^{-T} diag S^{-1} with S = S_M^{-T}.
  const Matrix s = symplectic_inverse(w.s.matrix()).transpose();
  Matrix alpha = s * g.asDiagonal() * s.transpose();
  return CovarianceMatrix(0.5 * (alpha + alpha.transpose()));
}

ExponentialMatrix cm_to_em_spectral(const CovarianceMatrix& cm) {
  require_physical(cm, "cm_to_em_spectral");
  const int n = cm.modes();
  const Matrix delta = delta_matrix(n);
  Eigen::EigenSolver<Matrix> es(delta * cm.matrix());
  if (es.info() != Eigen::Success) fail_guard("cm_to_em_spectral: eigensolver failed");
  const Eigen::VectorXcd lam = es.eigenvalues();
  Eigen::VectorXcd f(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    const double g = std::abs(lam[j].imag());
    f[j] = std::complex<double>(0.0, lam[j].imag() >= 0.0 ? em_eigenvalue(g) : -em_eigenvalue(g));
  }
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Matrix fm = (v * f.asDiagonal() * v.inverse()).real();
  Matrix m = fm * (-delta);
  return ExponentialMatrix(0.5 * (m + m.transpose()));
}

double commutation_residual(const Matrix& m, const Matrix& alpha) {
  if (m.rows() != alpha.rows() || m.cols() != alpha.cols()) fail_validation("commutation_residual: dimension mismatch");
  const Matrix dinv = -delta_matrix(static_cast<int>(m.rows() / 2));
  return max_abs(m * alpha * dinv - dinv * alpha * m);
}

double normalization_log_c(const Vector& gammas) {
  double s = 0.0;
  for (double g : gammas) {
    if (!(g > 0.5)) fail_validation("normalization_log_c: symplectic eigenvalue must exceed 1/2");
    s += std::log(g - 0.5) + std::log(g + 0.5);
  }
  return -0.5 * s;
}

LocalReduction reduce_two_mode(const Matrix& m) {
  require_two_mode(m, "reduce_two_mode");
  const Eigen::Matrix2d ba = block(m, 0, 2, 0, 2);
  const Eigen::Matrix2d bb = block(m, 1, 3, 1, 3);
  const Eigen::Matrix2d bc = block(m, 0, 2, 1, 3);
  const double det_a = ba.determinant();
  const double det_b = bb.determinant();
  if (!(det_a > 0.0) || !(det_b > 0.0) || ba(0, 0) <= 0.0 || bb(0, 0) <= 0.0) {
    fail_validation("reduce_two_mode: local blocks are not positive definite");
  }
  LocalReduction out;
  out.a = std::sqrt(det_a);
  out.b = std::sqrt(det_b);

  // Local Williamson per mode: A = a S_A^2 with S_A symmetric, unimodular.
  const Eigen::Matrix2d sa = unimodular_sqrt(ba / out.a);
  const Eigen::Matrix2d sb = unimodular_sqrt(bb / out.b);
  const Eigen::Matrix2d la = sa.inverse();
  const Eigen::Matrix2d lb = sb.inverse();
  const Eigen::Matrix2d c1 = la * bc * lb.transpose();

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(c1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2d u = svd.matrixU();
  Eigen::Matrix2d v = svd.matrixV();
  double d1 = svd.singularValues()[0];
  double d2 = svd.singularValues()[1];
  if (u.determinant() < 0.0) {
    u.col(1) *= -1.0;
    d2 = -d2;
  }
  if (v.determinant() < 0.0) {
    v.col(1) *= -1.0;
    d2 = -d2;
  }
  out.cq = d1;
  out.cp = d2;
  out.local = local_embed(u.transpose() * la, v.transpose() * lb);

  const Matrix reduced = out.local * m * out.local.transpose();
  Matrix target = Matrix::Zero(4, 4);
  target(0, 0) = target(2, 2) = out.a;
  target(1, 1) = target(3, 3) = out.b;
  target(0, 1) = target(1, 0) = out.cq;
  target(2, 3) = target(3, 2) = out.cp;
  const double res = max_abs(reduced - target);
  if (res > 1e-8 * std::max(1.0, max_abs(m))) {
    fail_guard("reduce_two_mode: reduction residual " + std::to_string(res));
  }
  return out;
}

Matrix standard_form_matrix(double a, double b, double c1, double c2) {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(2, 2) = a;
  s(1, 1) = s(3, 3) = b;
  s(0, 1) = s(1, 0) = c1;
  s(2, 3) = s(3, 2) = -c2;
  return s;
}

Matrix StandardForm::matrix() const { return standard_form_matrix(a, b, c1, c2); }

StandardForm standard_form(const CovarianceMatrix& cm) {
  require_two_mode(cm.matrix(), "standard_form");
  require_physical(cm, "standard_form");
  const Matrix& alpha = cm.matrix();
  const LocalReduction red = reduce_two_mode(alpha);

  StandardForm sf;
  sf.a = red.a;
  sf.b = red.b;
  sf.c1 = red.cq;
  sf.c2 = -red.cp;
  sf.local = SymplecticMatrix(red.local);

  // The reduced values must solve the invariant system
  //   c1^2 c2^2 = det C^2,  det alpha = (ab - c1^2)(ab - c2^2),
  // whose quadratic in c1^2 must have real roots.
  const double det_c = block(alpha, 0, 2, 1, 3).determinant();
  const double det_alpha = alpha.determinant();
  const double ab = sf.a * sf.b;
  const double uv = det_c * det_c;
  const double sum = (ab * ab + uv - det_alpha) / ab;
  const double disc = sum * sum - 4.0 * uv;
  const double scale = std::max(1.0, sum * sum);
  if (disc < -1e-8 * scale) fail_guard("standard_form: complex root in the (c1, c2) solve; inconsistent input");
  const double inv_res = std::abs((ab - sf.c1 * sf.c1) * (ab - sf.c2 * sf.c2) - det_alpha) +
                         std::abs(sf.c1 * sf.c2 + det_c);
  if (inv_res > 1e-8 * std::max(1.0, ab * ab)) {
    fail_guard("standard_form: reduced parameters violate the local invariants by " + std::to_string(inv_res));
  }
  return sf;
}

std::string_view to_string(BorderType t) {
  switch (t) {
    case BorderType::I: return "I";
    case BorderType::II: return "II";
    case BorderType::III: return "III";
    case BorderType::IV: return "IV";
  }
  return "?";
}

double classification_ratio(double a, double b, double c1, double c2) {
  return (a / b + b / a) / (c1 / c2 + c2 / c1);
}

TypeLabel classify(const StandardForm& sf, double tol) {
  if (!(sf.c1 > 0.0) || !(sf.c2 > 0.0)) {
    fail_validation("classify: c1 and c2 must be positive; the state is separable and not a border candidate");
  }
  TypeLabel t;
  t.ratio = classification_ratio(sf.a, sf.b, sf.c1, sf.c2);
  if (std::abs(sf.a - sf.b) <= tol * std::max(sf.a, sf.b)) {
    t.label = BorderType::IV;
  } else if (t.ratio > 1.0 + tol) {
    t.label = BorderType::I;
  } else if (t.ratio < 1.0 - tol) {
    t.label = BorderType::II;
  } else {
    t.label = BorderType::III;
  }
  return t;
}

double border_residual(const Matrix& alpha) {
  require_two_mode(alpha, "border_residual");
  const double det_a = block(alpha, 0, 2, 0, 2).determinant();
  const double det_b = block(alpha, 1, 3, 1, 3).determinant();
  const double det_c = block(alpha, 0, 2, 1, 3).determinant();
  return 4.0 * alpha.determinant() - det_a - det_b - 2.0 * std::abs(det_c) + 0.25;
}

Separability is_separable(const CovarianceMatrix& cm) {
  require_two_mode(cm.matrix(), "is_separable");
  require_physical(cm, "is_separable");
  Matrix pt = cm.matrix();
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  Separability s;
  s.min_ppt_gamma = symplectic_eigenvalues(pt).minCoeff();
  s.separable = s.min_ppt_gamma >= 0.5 - kPhysicalTol;
  s.border_residual = border_residual(cm.matrix());
  return s;
}

void validate(const SymmetricParams& p) {
  if (!std::isfinite(p.m) || !std::isfinite(p.kq) || !std::isfinite(p.kp)) {
    fail_validation("symmetric state: non-finite parameters");
  }
  if (!(p.m > 0.0) || !(std::abs(p.kq) < p.m) || !(std::abs(p.kp) < p.m)) {
    fail_validation("symmetric state: require m > 0, |kq| < m, |kp| < m");
  }
}

CovarianceMatrix symmetric_cm(const SymmetricParams& p) {
  validate(p);
  Matrix a = Matrix::Zero(4, 4);
  a(0, 0) = a(1, 1) = a(2, 2) = a(3, 3) = 0.5 * p.m;
  a(0, 1) = a(1, 0) = 0.5 * p.kq;
  a(2, 3) = a(3, 2) = -0.5 * p.kp;
  return CovarianceMatrix(a);
}

ExponentialMatrix symmetric_em(const SymmetricParams& p) {
  validate(p);
  const double g1 = 0.5 * std::sqrt((p.m + p.kq) * (p.m - p.kp));
  const double g2 = 0.5 * std::sqrt((p.m - p.kq) * (p.m + p.kp));
  const double mt1 = em_eigenvalue(g1);
  const double mt2 = em_eigenvalue(g2);
  const double s1sq = std::sqrt((p.m + p.kq) / (p.m - p.kp));
  const double s2sq = std::sqrt((p.m - p.kq) / (p.m + p.kp));
  const double q1 = mt1 / s1sq;
  const double q2 = mt2 / s2sq;
  const double p1 = mt1 * s1sq;
  const double p2 = mt2 * s2sq;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 0.5 * (q1 + q2);
  m(0, 1) = m(1, 0) = 0.5 * (q1 - q2);
  m(2, 2) = m(3, 3) = 0.5 * (p1 + p2);
  m(2, 3) = m(3, 2) = 0.5 * (p1 - p2);
  return ExponentialMatrix(m);
}

CovarianceMatrix thermal_cm(const Vector& gammas) {
  if (gammas.size() == 0) fail_validation("thermal_cm: need at least one mode");
  Vector d(2 * gammas.size());
  d << gammas, gammas;
  return CovarianceMatrix(Matrix(d.asDiagonal()));
}

CovarianceMatrix two_mode_squeezed_thermal(double gamma_a, double gamma_b, double r) {
  const double params[] = {r};
  const SymplecticMatrix s = elementary_transform(TransformKind::two_mode_squeeze_qq, params, {0, 1}, 2);
  Vector g(2);
  g << gamma_a, gamma_b;
  return CovarianceMatrix(s.congruence(thermal_cm(g).matrix()));
}

}  // namespace cvree
