#pragma once

// Truncated Fock-basis density matrices for thermal and squeezed states, used
// as a brute-force check of the Gaussian formulas.

#include "cvree/gaussian.hpp"

#include <vector>

namespace cvree {

/// Real density matrix on the tensor product of truncated modes. Basis index
/// of (n_0, n_1, ...) is row-major with mode 0 most significant.
struct FockDensity {
  std::vector<int> dims;
  Matrix rho;
  double trace_deficit = 0.0;     // weight lost to truncation, accumulated before renormalisation
  double unitarity_defect = 0.0;  // weight pushed past the kept levels by the last squeeze
};

/// Geometric weights (nbar/(nbar+1))^n with nbar = gamma - 1/2, renormalised.
FockDensity fock_thermal(double gamma, int dim);
FockDensity fock_product(const FockDensity& a, const FockDensity& b);
/// Product of thermal states, one gamma per mode, each truncated at `dim`.
FockDensity fock_thermal_product(const std::vector<double>& gammas, int dim);

enum class FockSqueeze {
  two_mode,  // exp(r (a_i^+ a_j^+ - a_i a_j)): R(r) (+) R(-r) on (q_i, q_j), (p_i, p_j)
  local,     // exp(r/2 (a^+2 - a^2)) on modes[0] (q -> e^r q), and with -r on modes[1] if given
};

struct FockSqueezeOptions {
  int pad = 12;            // extra levels per mode while the unitary acts
  double max_defect = 1e-3;  // larger truncation loss is a validation error
};

FockDensity fock_apply_squeeze(const FockDensity& state, FockSqueeze kind, double r, const std::vector<int>& modes,
                               const FockSqueezeOptions& options = {});

/// Keeps the lowest `dim` levels of every mode and renormalises.
FockDensity fock_truncate(const FockDensity& state, int dim);

struct FockEntropyResult {
  double value = 0.0;        // nats
  double sensitivity = 0.0;  // |value - value with every dim reduced by 5|, when that is possible
  int floored = 0;           // sigma eigenvalues raised to the floor
  double floored_weight = 0.0;  // rho weight on those directions
  bool support_mismatch = false;
};

/// Floor for sigma eigenvalues obtained from a block eigensolve. Isolated
/// diagonal entries (1x1 blocks) are used as they are unless non-positive.
inline constexpr double kFockEigenFloor = 1e-14;
/// Total rho weight on floored sigma directions above which the supports are
/// reported as mismatched.
inline constexpr double kFockMismatchWeight = 1e-6;

double fock_entropy(const FockDensity& state);
/// Tr rho log rho - Tr rho log sigma by block eigendecomposition. Returns +inf
/// with support_mismatch set when rho has weight where sigma has none.
FockEntropyResult fock_relative_entropy(const FockDensity& rho, const FockDensity& sigma);

/// Entanglement entropy of the two-mode squeezed vacuum from its Schmidt
/// coefficients tanh^{2n} r / cosh^2 r, n < dim. Requires tanh^{2 dim} r < 1e-10.
double fock_schmidt_entropy(double r, int dim);

/// Quadrature second moments. The density matrices here are real, so the
/// position-momentum block vanishes identically.
CovarianceMatrix fock_covariance(const FockDensity& state);

/// <a_i^+ a_i>
double fock_occupation(const FockDensity& state, int mode);

}  // namespace cvree
