#pragma once

// Real symplectic linear algebra in the (q1..qn, p1..pn) ordering.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string_view>

namespace cvree {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

double max_abs(const Matrix& m);
bool is_symmetric(const Matrix& m, double tol);

/// The canonical antisymmetric form Delta = [[0, I_n], [-I_n, 0]].
struct SymplecticForm {
  int n = 0;
  Matrix delta;
};

SymplecticForm symplectic_form(int n);
Matrix delta_matrix(int n);

/// A real 2n x 2n matrix with S Delta S^T = Delta, checked on construction.
///
/// The residual check is scaled by max(1, |S|_max^2) so products of strongly
/// squeezing transforms are not rejected for rounding noise in large entries.
class SymplecticMatrix {
 public:
  static constexpr double kConstructionTol = 1e-10;

  explicit SymplecticMatrix(Matrix s);
  static SymplecticMatrix identity(int n);

  int modes() const { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const { return s_; }

  /// Exact inverse Delta S^T Delta^{-1}; no linear solve involved.
  SymplecticMatrix inverse() const;
  SymplecticMatrix transpose() const;

  /// S a S^T
  Matrix congruence(const Matrix& a) const;

  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;

 private:
  Matrix s_;
};

/// max_ij |S Delta S^T - Delta|_ij. Throws on odd or non-square input.
double symplectic_residual(const Matrix& s);
bool is_symplectic(const Matrix& s, double tol);

/// Delta S^T Delta^{-1}, valid when s is symplectic.
Matrix symplectic_inverse(const Matrix& s);

enum class TransformKind {
  local_rotation,
  local_squeeze_X,
  local_squeeze_Y,
  two_mode_rotation_qq,
  two_mode_squeeze_qq,
  two_mode_rotation_qp,
  two_mode_squeeze_qp,
  general_local,
};

std::string_view to_string(TransformKind kind);
std::optional<TransformKind> parse_transform_kind(std::string_view name);

/// Mode indices a generator acts on. `second` is required for two-mode kinds
/// and for local_squeeze_X; local_squeeze_Y accepts one or two modes.
struct ModeSelection {
  int first = 0;
  std::optional<int> second;
};

// Generators, embedded in 2n x 2n. Conventions for the state map alpha -> S alpha S^T:
//   local_rotation(theta)      q' = cos q + sin p,  p' = -sin q + cos p
//   local_squeeze_X(x)         q_i*sqrt x, q_j/sqrt x, p_i/sqrt x, p_j*sqrt x
//   local_squeeze_Y(y)         q*sqrt y, p/sqrt y on each selected mode
//   two_mode_rotation_qq(th)   Theta(th) (+) Theta(th) on [q_i q_j ; p_i p_j]
//   two_mode_squeeze_qq(r)     R(r) (+) R(-r)
//   two_mode_rotation_qp(th)   rotates (q_i, p_j) and (q_j, p_i) pairs
//   two_mode_squeeze_qp(r)     hyperbolic mixing of (q_i, p_j) and (q_j, p_i) pairs
//   general_local(thA1, thB1, thA2, thB2, tauA, tauB)
//                              L3 L2 L1: rotations, diag(e^tauA, e^tauB, e^-tauA, e^-tauB), rotations
SymplecticMatrix elementary_transform(TransformKind kind, std::span<const double> params,
                                      ModeSelection modes, int n);

/// Moduli of the +-i gamma eigenvalue pairs of Delta^{-1} alpha, descending.
/// Throws numerical_guard when the spectrum does not pair within 1e-8 (relative).
Vector symplectic_eigenvalues(const Matrix& alpha);

struct WilliamsonResult {
  SymplecticMatrix s;
  Vector gammas;  // descending
};

/// alpha = S diag(gammas, gammas) S^T. Dispatches to the q-p route when alpha
/// has no position-momentum correlations, otherwise to the general route.
WilliamsonResult williamson(const Matrix& alpha);

/// Requires alpha = alpha_q (+) alpha_p. Builds S = S_q (+) (S_q^T)^{-1} from the
/// real eigenvectors c_j of alpha_p alpha_q, normalised by c_j^T alpha_q c_j = gamma_j
/// and phased with c_jj > 0. Inside a degenerate cluster the basis is the one
/// that diagonalises alpha_q, in descending order.
WilliamsonResult williamson_qp(const Matrix& alpha);

/// Eigenvectors Psi_j of Delta^{-1} alpha for +i gamma_j, normalised so the
/// Hermitian form i Psi^H Delta Psi equals one (symplectic Gram-Schmidt inside
/// degenerate clusters), assembled column-wise and verified post hoc.
WilliamsonResult williamson_general(const Matrix& alpha);

bool is_qp_block_diagonal(const Matrix& m, double rel_tol = 1e-13);

}  // namespace cvree
