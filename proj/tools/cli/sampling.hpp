#pragma once

// Random states shared by the verify suites, tests and benchmarks.

#include "cvree/fock.hpp"
#include "cvree/gaussian.hpp"

#include <random>

namespace cvree::cli {

using Rng = std::mt19937_64;

/// Product of `moves` random elementary transforms.
Matrix random_symplectic(int n, Rng& rng, int moves = 8, double max_squeeze = 0.6);
/// S diag(gamma, gamma) S^T with gamma uniform on [gmin, gmax].
CovarianceMatrix random_cm(int n, Rng& rng, double gmin = 0.55, double gmax = 3.0);

/// A two-mode state: thermal(gamma_a, gamma_b), then a two-mode squeeze r,
/// then a local squeeze s on mode 0 (q -> e^s q).
struct SqueezedThermal {
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double r = 0.0;
  double s = 0.0;
};

SqueezedThermal random_squeezed_thermal(Rng& rng, double gmax = 1.5, double rmax = 0.6, bool local = true);
CovarianceMatrix gaussian_state(const SqueezedThermal& p);
FockDensity fock_state(const SqueezedThermal& p, int dim);

struct SqueezedPair {
  SqueezedThermal rho;
  SqueezedThermal sigma;
};

/// Both states squeezed, with |r_rho - r_sigma| <= rmax so that rho seen from
/// sigma's eigenbasis stays within the same squeezing range. `local` selects
/// which state gets the local squeeze: 0 neither, 1 rho, 2 sigma.
SqueezedPair random_squeezed_pair(Rng& rng, double gmax = 1.5, double rmax = 0.6, int local = 0);

/// Fock relative entropy in sigma's eigenbasis: sigma's squeezes are undone on
/// both states, so sigma is a diagonal thermal product with exact eigenvalues.
FockEntropyResult fock_pair_relative_entropy(const SqueezedThermal& rho, const SqueezedThermal& sigma, int dim);

}  // namespace cvree::cli
