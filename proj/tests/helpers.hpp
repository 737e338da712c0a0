#pragma once

#include "cvree/gaussian.hpp"
#include "cvree/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace testing_support {

using cvree::Matrix;
using cvree::Vector;
using Rng = std::mt19937_64;

inline double g(double x) { return x == 0.0 ? 0.0 : (x + 1.0) * std::log(x + 1.0) - x * std::log(x); }

// exp(Delta H) with H symmetric is symplectic; this avoids the library's own generators.
inline Matrix random_symplectic(int n, Rng& rng, double scale = 0.4) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix h(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = nd(rng);
  const Matrix gen = cvree::delta_matrix(n) * h;
  return gen.exp();
}

// Local symplectic on two modes: independent exp(Delta H) on each mode.
inline Matrix random_local_symplectic(Rng& rng, double scale = 0.5) {
  Matrix s = Matrix::Zero(4, 4);
  for (int mode = 0; mode < 2; ++mode) {
    const Matrix one = random_symplectic(1, rng, scale);
    s(mode, mode) = one(0, 0);
    s(mode, 2 + mode) = one(0, 1);
    s(2 + mode, mode) = one(1, 0);
    s(2 + mode, 2 + mode) = one(1, 1);
  }
  return s;
}

inline Matrix random_cm(int n, Rng& rng, double gmin = 0.55, double gmax = 3.0) {
  std::uniform_real_distribution<double> u(gmin, gmax);
  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d[j] = d[n + j] = u(rng);
  const Matrix s = random_symplectic(n, rng);
  Matrix a = s * d.asDiagonal() * s.transpose();
  return 0.5 * (a + a.transpose());
}

// Thermal relative entropy by summing the photon-number distributions directly.
inline double thermal_relent_series(double gamma_rho, double gamma_sigma, int terms = 4000) {
  const double nr = gamma_rho - 0.5;
  const double ns = gamma_sigma - 0.5;
  double s = 0.0;
  for (int k = 0; k < terms; ++k) {
    const double lp = k * std::log(nr) - (k + 1) * std::log(nr + 1.0);
    const double lq = k * std::log(ns) - (k + 1) * std::log(ns + 1.0);
    s += std::exp(lp) * (lp - lq);
  }
  return s;
}

}  // namespace testing_support
