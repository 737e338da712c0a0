#include "cvree/symplectic.hpp"

#include "cvree/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace cvree {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

void require_even_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    fail_validation(std::string(what) + ": expected a square matrix of even dimension, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail_validation(std::string(what) + ": non-finite entries");
}

double scaled_tol(const Matrix& m, double tol) { return tol * std::max(1.0, max_abs(m)); }

// Symmetric square root and inverse square root of a positive definite matrix.
void spd_roots(const Matrix& a, Matrix& root, Matrix& inv_root, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) fail_guard(std::string(what) + ": eigensolver failed");
  const Vector& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    fail_guard(std::string(what) + ": matrix is not positive definite (smallest eigenvalue " +
               std::to_string(ev.minCoeff()) + ")");
  }
  const Matrix& v = es.eigenvectors();
  root = v * ev.cwiseSqrt().asDiagonal() * v.transpose();
  inv_root = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
}

Matrix rotation_block(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

// Puts a 2x2 block acting on coordinates (a, b) into an identity of size 2n.
void embed2(Matrix& s, int a, int b, const Matrix& blk) {
  s(a, a) = blk(0, 0);
  s(a, b) = blk(0, 1);
  s(b, a) = blk(1, 0);
  s(b, b) = blk(1, 1);
}

Matrix rotation_on_mode(int i, double theta, int n) {
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  embed2(s, i, n + i, rotation_block(theta));
  return s;
}

void verify_williamson(const Matrix& alpha, const Matrix& s, const Vector& gammas, const char* route) {
  const int n = static_cast<int>(gammas.size());
  Vector d(2 * n);
  d << gammas, gammas;
  const double sres = symplectic_residual(s);
  if (sres > 1e-8 * std::max(1.0, max_abs(s) * max_abs(s))) {
    fail_guard(std::string(route) + ": assembled S is not symplectic (residual " + std::to_string(sres) + ")");
  }
  const double rres = max_abs(s * d.asDiagonal() * s.transpose() - alpha);
  if (rres > 1e-8 * std::max(1.0, max_abs(alpha))) {
    fail_guard(std::string(route) + ": reconstruction residual " + std::to_string(rres));
  }
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.transpose()) <= scaled_tol(m, tol);
}

SymplecticForm symplectic_form(int n) {
  if (n < 1) fail_validation("symplectic_form: mode count must be positive");
  return {n, delta_matrix(n)};
}

Matrix delta_matrix(int n) {
  if (n < 1) fail_validation("delta_matrix: mode count must be positive");
  Matrix d = Matrix::Zero(2 * n, 2 * n);
  d.topRightCorner(n, n).setIdentity();
  d.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return d;
}

double symplectic_residual(const Matrix& s) {
  require_even_square(s, "symplectic_residual");
  const Matrix d = delta_matrix(static_cast<int>(s.rows() / 2));
  return max_abs(s * d * s.transpose() - d);
}

bool is_symplectic(const Matrix& s, double tol) { return symplectic_residual(s) <= tol; }

Matrix symplectic_inverse(const Matrix& s) {
  require_even_square(s, "symplectic_inverse");
  const Matrix d = delta_matrix(static_cast<int>(s.rows() / 2));
  return d * s.transpose() * d.transpose();
}

SymplecticMatrix::SymplecticMatrix(Matrix s) : s_(std::move(s)) {
  require_even_square(s_, "SymplecticMatrix");
  require_finite(s_, "SymplecticMatrix");
  const double scale = std::max(1.0, max_abs(s_) * max_abs(s_));
  const double res = symplectic_residual(s_);
  if (res > kConstructionTol * scale) {
    fail_validation("SymplecticMatrix: S Delta S^T differs from Delta by " + std::to_string(res));
  }
  const double det = s_.determinant();
  if (std::abs(det - 1.0) > 1e-8 * scale) {
    fail_validation("SymplecticMatrix: determinant " + std::to_string(det) + " is not 1");
  }
}

SymplecticMatrix SymplecticMatrix::identity(int n) {
  if (n < 1) fail_validation("SymplecticMatrix::identity: mode count must be positive");
  return SymplecticMatrix(Matrix::Identity(2 * n, 2 * n));
}

SymplecticMatrix SymplecticMatrix::inverse() const { return SymplecticMatrix(symplectic_inverse(s_)); }

SymplecticMatrix SymplecticMatrix::transpose() const { return SymplecticMatrix(s_.transpose()); }

Matrix SymplecticMatrix::congruence(const Matrix& a) const {
  if (a.rows() != s_.rows() || a.cols() != s_.cols()) fail_validation("congruence: dimension mismatch");
  return s_ * a * s_.transpose();
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
  if (rhs.s_.rows() != s_.rows()) fail_validation("SymplecticMatrix product: dimension mismatch");
  return SymplecticMatrix(s_ * rhs.s_);
}

namespace {

constexpr std::array<std::pair<TransformKind, std::string_view>, 8> kKindNames{{
    {TransformKind::local_rotation, "local_rotation"},
    {TransformKind::local_squeeze_X, "local_squeeze_X"},
    {TransformKind::local_squeeze_Y, "local_squeeze_Y"},
    {TransformKind::two_mode_rotation_qq, "two_mode_rotation_qq"},
    {TransformKind::two_mode_squeeze_qq, "two_mode_squeeze_qq"},
    {TransformKind::two_mode_rotation_qp, "two_mode_rotation_qp"},
    {TransformKind::two_mode_squeeze_qp, "two_mode_squeeze_qp"},
    {TransformKind::general_local, "general_local"},
}};

}  // namespace

std::string_view to_string(TransformKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  fail_validation("unknown transform kind");
}

std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  for (const auto& [k, nm] : kKindNames) {
    if (nm == name) return k;
  }
  return std::nullopt;
}

SymplecticMatrix elementary_transform(TransformKind kind, std::span<const double> params,
                                      ModeSelection modes, int n) {
  if (n < 1) fail_validation("elementary_transform: mode count must be positive");
  for (double p : params) {
    if (!std::isfinite(p)) fail_validation("elementary_transform: non-finite parameter");
  }
  const int i = modes.first;
  if (i < 0 || i >= n) fail_validation("elementary_transform: mode index out of range");
  if (modes.second) {
    const int j = *modes.second;
    if (j < 0 || j >= n || j == i) fail_validation("elementary_transform: invalid mode pair");
  }
  auto need_pair = [&]() -> int {
    if (!modes.second) fail_validation(std::string(to_string(kind)) + " needs a mode pair");
    return *modes.second;
  };
  auto need_params = [&](std::size_t count) {
    if (params.size() != count) {
      fail_validation(std::string(to_string(kind)) + ": expected " + std::to_string(count) + " parameter(s), got " +
                      std::to_string(params.size()));
    }
  };

  Matrix s = Matrix::Identity(2 * n, 2 * n);
  switch (kind) {
    case TransformKind::local_rotation: {
      if (modes.second) {
        need_params(2);
        embed2(s, i, n + i, rotation_block(params[0]));
        embed2(s, *modes.second, n + *modes.second, rotation_block(params[1]));
      } else {
        need_params(1);
        embed2(s, i, n + i, rotation_block(params[0]));
      }
      break;
    }
    case TransformKind::local_squeeze_X: {
      const int j = need_pair();
      need_params(1);
      if (params[0] <= 0.0) fail_validation("local_squeeze_X: x must be positive");
      const double r = std::sqrt(params[0]);
      s(i, i) = r;
      s(j, j) = 1.0 / r;
      s(n + i, n + i) = 1.0 / r;
      s(n + j, n + j) = r;
      break;
    }
    case TransformKind::local_squeeze_Y: {
      need_params(1);
      if (params[0] <= 0.0) fail_validation("local_squeeze_Y: y must be positive");
      const double r = std::sqrt(params[0]);
      s(i, i) = r;
      s(n + i, n + i) = 1.0 / r;
      if (modes.second) {
        const int j = *modes.second;
        s(j, j) = r;
        s(n + j, n + j) = 1.0 / r;
      }
      break;
    }
    case TransformKind::two_mode_rotation_qq: {
      const int j = need_pair();
      need_params(1);
      const Matrix t = rotation_block(params[0]);
      embed2(s, i, j, t);
      embed2(s, n + i, n + j, t);
      break;
    }
    case TransformKind::two_mode_squeeze_qq: {
      const int j = need_pair();
      need_params(1);
      const double ch = std::cosh(params[0]);
      const double sh = std::sinh(params[0]);
      Matrix r(2, 2);
      r << ch, sh, sh, ch;
      embed2(s, i, j, r);
      r << ch, -sh, -sh, ch;
      embed2(s, n + i, n + j, r);
      break;
    }
    case TransformKind::two_mode_rotation_qp: {
      const int j = need_pair();
      need_params(1);
      const Matrix t = rotation_block(params[0]);
      embed2(s, i, n + j, t);
      embed2(s, j, n + i, t);
      break;
    }
    case TransformKind::two_mode_squeeze_qp: {
      const int j = need_pair();
      need_params(1);
      const double ch = std::cosh(params[0]);
      const double sh = std::sinh(params[0]);
      Matrix r(2, 2);
      r << ch, sh, sh, ch;
      embed2(s, i, n + j, r);
      embed2(s, j, n + i, r);
      break;
    }
    case TransformKind::general_local: {
      const int j = need_pair();
      need_params(6);
      const Matrix l1 = rotation_on_mode(i, params[0], n) * rotation_on_mode(j, params[1], n);
      const Matrix l3 = rotation_on_mode(i, params[2], n) * rotation_on_mode(j, params[3], n);
      Matrix l2 = Matrix::Identity(2 * n, 2 * n);
      l2(i, i) = std::exp(params[4]);
      l2(j, j) = std::exp(params[5]);
      l2(n + i, n + i) = std::exp(-params[4]);
      l2(n + j, n + j) = std::exp(-params[5]);
      s = l3 * l2 * l1;
      break;
    }
    default:
      fail_validation("elementary_transform: unknown kind");
  }
  return SymplecticMatrix(std::move(s));
}

Vector symplectic_eigenvalues(const Matrix& alpha) {
  require_even_square(alpha, "symplectic_eigenvalues");
  require_finite(alpha, "symplectic_eigenvalues");
  if (!is_symmetric(alpha, 1e-10)) fail_validation("symplectic_eigenvalues: input is not symmetric");
  const int n = static_cast<int>(alpha.rows() / 2);
  const Matrix k = -delta_matrix(n) * alpha;
  Eigen::EigenSolver<Matrix> es(k, false);
  if (es.info() != Eigen::Success) fail_guard("symplectic_eigenvalues: eigensolver failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-8 * scale;
  std::vector<double> pos;
  std::vector<double> neg;
  for (Eigen::Index idx = 0; idx < ev.size(); ++idx) {
    if (std::abs(ev[idx].real()) > tol) {
      fail_guard("symplectic_eigenvalues: eigenvalue with real part " + std::to_string(ev[idx].real()) +
                 " does not pair as +-i gamma");
    }
    (ev[idx].imag() >= 0.0 ? pos : neg).push_back(std::abs(ev[idx].imag()));
  }
  if (pos.size() != neg.size()) fail_guard("symplectic_eigenvalues: unbalanced eigenvalue pairing");
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  Vector out(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(pos[j] - neg[j]) > tol) fail_guard("symplectic_eigenvalues: pairing failure");
    out[j] = 0.5 * (pos[j] + neg[j]);
  }
  return out;
}

bool is_qp_block_diagonal(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) return false;
  const Eigen::Index n = m.rows() / 2;
  const double lim = rel_tol * std::max(1.0, max_abs(m));
  return max_abs(m.topRightCorner(n, n)) <= lim && max_abs(m.bottomLeftCorner(n, n)) <= lim;
}

WilliamsonResult williamson_qp(const Matrix& alpha) {
  require_even_square(alpha, "williamson_qp");
  require_finite(alpha, "williamson_qp");
  if (!is_symmetric(alpha, 1e-10)) fail_validation("williamson_qp: input is not symmetric");
  if (!is_qp_block_diagonal(alpha, 1e-10)) fail_validation("williamson_qp: input has q-p correlations");
  const int n = static_cast<int>(alpha.rows() / 2);
  const Matrix aq = 0.5 * (alpha.topLeftCorner(n, n) + alpha.topLeftCorner(n, n).transpose());
  const Matrix ap = 0.5 * (alpha.bottomRightCorner(n, n) + alpha.bottomRightCorner(n, n).transpose());

  Matrix aq_half;
  Matrix aq_mhalf;
  spd_roots(aq, aq_half, aq_mhalf, "williamson_qp");
  Matrix b = aq_half * ap * aq_half;
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eb(b);
  if (eb.info() != Eigen::Success) fail_guard("williamson_qp: eigensolver failed");
  if (eb.eigenvalues().minCoeff() <= 0.0) fail_guard("williamson_qp: alpha_p is not positive definite");

  // Descending order of gamma^2.
  Vector g2 = eb.eigenvalues().reverse();
  Matrix y = eb.eigenvectors().rowwise().reverse();

  // Canonical basis inside clusters of equal gamma: diagonalise y^T alpha_q y, descending.
  const double ctol = 1e-8 * g2[0];
  for (int start = 0; start < n;) {
    int end = start + 1;
    while (end < n && std::abs(g2[end] - g2[start]) <= ctol) ++end;
    const int k = end - start;
    if (k > 1) {
      const Matrix yc = y.middleCols(start, k);
      Matrix g = yc.transpose() * aq * yc;
      g = 0.5 * (g + g.transpose());
      Eigen::SelfAdjointEigenSolver<Matrix> eg(g);
      const Matrix q = eg.eigenvectors().rowwise().reverse();
      y.middleCols(start, k) = yc * q;
      const double mean = g2.segment(start, k).mean();
      g2.segment(start, k).setConstant(mean);
    }
    start = end;
  }

  Vector gammas = g2.cwiseSqrt();
  Matrix c(n, n);
  for (int j = 0; j < n; ++j) {
    Vector cj = std::sqrt(gammas[j]) * (aq_mhalf * y.col(j));
    const double norm = cj.norm();
    int pivot = j;
    if (std::abs(cj[j]) <= 1e-12 * norm) {
      pivot = 0;
      while (pivot < n && std::abs(cj[pivot]) <= 1e-12 * norm) ++pivot;
    }
    if (cj[pivot] < 0.0) cj = -cj;
    c.col(j) = cj;
  }

  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = aq * c * gammas.cwiseInverse().asDiagonal();
  s.bottomRightCorner(n, n) = c;
  verify_williamson(alpha, s, gammas, "williamson_qp");
  return {SymplecticMatrix(std::move(s)), gammas};
}

WilliamsonResult williamson_general(const Matrix& alpha) {
  require_even_square(alpha, "williamson_general");
  require_finite(alpha, "williamson_general");
  if (!is_symmetric(alpha, 1e-10)) fail_validation("williamson_general: input is not symmetric");
  const int n = static_cast<int>(alpha.rows() / 2);
  const Matrix sym = 0.5 * (alpha + alpha.transpose());
  const Matrix delta = delta_matrix(n);

  // Eigenvectors of Delta^{-1} alpha through the similar antisymmetric matrix
  // alpha^{1/2} Delta^{-1} alpha^{1/2}, whose Hermitian companion i A has an
  // orthonormal eigenbasis even when symplectic eigenvalues coincide.
  Matrix root;
  Matrix inv_root;
  spd_roots(sym, root, inv_root, "williamson_general");
  Matrix a = root * (-delta) * root;
  a = 0.5 * (a - a.transpose());
  const CMatrix h = Complex(0.0, 1.0) * a.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> eh(h);
  if (eh.info() != Eigen::Success) fail_guard("williamson_general: eigensolver failed");
  const Vector& lam = eh.eigenvalues();  // ascending; the first n are -gamma
  Vector gammas(n);
  const double tol = 1e-8 * std::max(std::abs(lam[0]), std::abs(lam[2 * n - 1]));
  for (int j = 0; j < n; ++j) {
    gammas[j] = -lam[j];
    if (gammas[j] <= 0.0 || std::abs(gammas[j] - lam[2 * n - 1 - j]) > tol) {
      fail_guard("williamson_general: gamma pairing failure");
    }
  }

  const CMatrix cdelta = delta.cast<Complex>();
  auto hform = [&](const CVector& x, const CVector& yv) { return Complex(0.0, 1.0) * x.dot(cdelta * yv); };

  std::vector<CVector> e;
  e.reserve(n);
  for (int j = 0; j < n; ++j) {
    CVector v = std::sqrt(gammas[j]) * (inv_root.cast<Complex>() * eh.eigenvectors().col(j));
    // Symplectic Gram-Schmidt; only acts inside degenerate clusters up to rounding.
    for (int k = 0; k < j; ++k) v -= hform(e[k], v) * e[k];
    const double hn = hform(v, v).real();
    if (!(hn > 1e-12)) {
      fail_guard("williamson_general: singular symplectic normalization in a degenerate subspace");
    }
    v /= std::sqrt(hn);
    int pivot = j;
    const double vn = v.norm();
    if (std::abs(v[pivot]) <= 1e-8 * vn) {
      pivot = 0;
      while (pivot < 2 * n && std::abs(v[pivot]) <= 1e-8 * vn) ++pivot;
    }
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);
    e.push_back(std::move(v));
  }

  Matrix t(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    t.col(j) = std::sqrt(2.0) * e[j].real();
    t.col(n + j) = -std::sqrt(2.0) * e[j].imag();
  }
  // T^T Delta T = Delta, so S = T^{-T} = Delta T Delta^{-1}.
  Matrix s = delta * t * (-delta);
  verify_williamson(alpha, s, gammas, "williamson_general");
  return {SymplecticMatrix(std::move(s)), gammas};
}

WilliamsonResult williamson(const Matrix& alpha) {
  require_even_square(alpha, "williamson");
  if (is_qp_block_diagonal(alpha)) return williamson_qp(alpha);
  return williamson_general(alpha);
}

}  // namespace cvree
