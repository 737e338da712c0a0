#include "cli/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace cvree::cli {

Matrix random_symplectic(int n, Rng& rng, int moves, double max_squeeze) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
  constexpr std::array<TransformKind, 6> kinds{TransformKind::local_rotation,       TransformKind::local_squeeze_Y,
                                               TransformKind::two_mode_rotation_qq, TransformKind::two_mode_squeeze_qq,
                                               TransformKind::two_mode_rotation_qp, TransformKind::two_mode_squeeze_qp};
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  for (int k = 0; k < moves; ++k) {
    const int kind = n == 1 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % kinds.size());
    const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
    ModeSelection modes{i, std::nullopt};
    if (kind >= 2) modes.second = (i + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1))) % n;
    double p = 0.0;
    switch (kind) {
      case 0:
      case 2:
      case 4: p = angle(rng); break;
      case 1: p = std::exp(2.0 * sq(rng)); break;
      default: p = sq(rng); break;
    }
    const double params[1] = {p};
    s = elementary_transform(kinds[static_cast<std::size_t>(kind)], params, modes, n).matrix() * s;
  }
  return s;
}

CovarianceMatrix random_cm(int n, Rng& rng, double gmin, double gmax) {
  std::uniform_real_distribution<double> g(gmin, gmax);
  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d[j] = d[n + j] = g(rng);
  const Matrix s = random_symplectic(n, rng);
  return CovarianceMatrix(s * d.asDiagonal() * s.transpose());
}

SqueezedThermal random_squeezed_thermal(Rng& rng, double gmax, double rmax, bool local) {
  std::uniform_real_distribution<double> g(0.55, gmax);
  std::uniform_real_distribution<double> r(-rmax, rmax);
  SqueezedThermal p;
  p.gamma_a = g(rng);
  p.gamma_b = g(rng);
  p.r = r(rng);
  p.s = local ? 0.5 * r(rng) : 0.0;
  return p;
}

CovarianceMatrix gaussian_state(const SqueezedThermal& p) {
  Vector d(4);
  d << p.gamma_a, p.gamma_b, p.gamma_a, p.gamma_b;
  const double tms[1] = {p.r};
  const double loc[1] = {std::exp(2.0 * p.s)};
  const Matrix s = elementary_transform(TransformKind::local_squeeze_Y, loc, {0, std::nullopt}, 2).matrix() *
                   elementary_transform(TransformKind::two_mode_squeeze_qq, tms, {0, 1}, 2).matrix();
  return CovarianceMatrix(s * d.asDiagonal() * s.transpose());
}

FockDensity fock_state(const SqueezedThermal& p, int dim) {
  FockDensity f = fock_thermal_product({p.gamma_a, p.gamma_b}, dim);
  f = fock_apply_squeeze(f, FockSqueeze::two_mode, p.r, {0, 1});
  if (p.s != 0.0) f = fock_apply_squeeze(f, FockSqueeze::local, p.s, {0});
  return f;
}

namespace {
// Extra levels kept while the squeezes act, so that only the final state is cut at `dim`.
constexpr int kPairMargin = 15;
}  // namespace

SqueezedPair random_squeezed_pair(Rng& rng, double gmax, double rmax, int local) {
  SqueezedPair p;
  p.sigma = random_squeezed_thermal(rng, gmax, rmax, local == 2);
  p.rho = random_squeezed_thermal(rng, gmax, rmax, local == 1);
  const double lo = std::max(-rmax, p.sigma.r - rmax);
  const double hi = std::min(rmax, p.sigma.r + rmax);
  p.rho.r = std::uniform_real_distribution<double>(lo, hi)(rng);
  return p;
}

FockEntropyResult fock_pair_relative_entropy(const SqueezedThermal& rho, const SqueezedThermal& sigma, int dim) {
  FockDensity f = fock_thermal_product({rho.gamma_a, rho.gamma_b}, dim + kPairMargin);
  f = fock_apply_squeeze(f, FockSqueeze::two_mode, rho.r, {0, 1});
  if (rho.s != sigma.s) f = fock_apply_squeeze(f, FockSqueeze::local, rho.s - sigma.s, {0});
  f = fock_apply_squeeze(f, FockSqueeze::two_mode, -sigma.r, {0, 1});
  return fock_relative_entropy(fock_truncate(f, dim), fock_thermal_product({sigma.gamma_a, sigma.gamma_b}, dim));
}

}  // namespace cvree::cli
