#include "cvree/fock.hpp"

#include "cvree/error.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cvree {

namespace {

using Sparse = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

int total_dim(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

std::vector<int> strides(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

std::vector<int> digits(int index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> components(UnionFind& uf, int n) {
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (label[r] < 0) {
      label[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[label[r]].push_back(i);
  }
  return out;
}

std::vector<std::vector<int>> nonzero_components(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  UnionFind uf(n);
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      if (m(i, j) != 0.0) uf.join(i, j);
    }
  }
  return components(uf, n);
}

Matrix gather(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) out(r, c) = m(rows[r], cols[c]);
  }
  return out;
}

void scatter(Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols, const Matrix& blk) {
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) m(rows[r], cols[c]) = blk(r, c);
  }
}

void check_state(const FockDensity& s, const char* what) {
  if (s.dims.empty()) fail_validation(std::string(what) + ": empty Fock state");
  for (int d : s.dims) {
    if (d < 1) fail_validation(std::string(what) + ": dimensions must be positive");
  }
  if (s.rho.rows() != total_dim(s.dims) || s.rho.cols() != s.rho.rows()) {
    fail_validation(std::string(what) + ": density matrix does not match dims");
  }
}

// Copies the levels n_k < new_dims[k] of every mode; returns the kept state
// (not renormalised).
Matrix reindex(const FockDensity& s, const std::vector<int>& new_dims) {
  const int n_new = total_dim(new_dims);
  const std::vector<int> old_str = strides(s.dims);
  std::vector<int> map(n_new, -1);
  for (int i = 0; i < n_new; ++i) {
    const std::vector<int> d = digits(i, new_dims);
    int idx = 0;
    bool inside = true;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d[k] >= s.dims[k]) inside = false;
      idx += d[k] * old_str[k];
    }
    map[i] = inside ? idx : -1;
  }
  Matrix out = Matrix::Zero(n_new, n_new);
  for (int j = 0; j < n_new; ++j) {
    if (map[j] < 0) continue;
    for (int i = 0; i < n_new; ++i) {
      if (map[i] >= 0) out(i, j) = s.rho(map[i], map[j]);
    }
  }
  return out;
}

FockDensity renormalised(std::vector<int> dims, Matrix rho, double prior_deficit, double defect) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) fail_guard("fock: truncation removed the whole state");
  FockDensity out;
  out.dims = std::move(dims);
  out.rho = rho / tr;
  out.rho = 0.5 * (out.rho + out.rho.transpose());
  out.unitarity_defect = defect;
  out.trace_deficit = 1.0 - (1.0 - prior_deficit) * (1.0 - defect);
  return out;
}

Sparse lowering(const std::vector<int>& dims, int mode) {
  const int n = total_dim(dims);
  const std::vector<int> str = strides(dims);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    const int level = digits(i, dims)[mode];
    if (level > 0) t.emplace_back(i - str[mode], i, std::sqrt(static_cast<double>(level)));
  }
  Sparse a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

double trace_product(const Matrix& rho, const Sparse& x) {
  double s = 0.0;
  for (int k = 0; k < x.outerSize(); ++k) {
    for (Sparse::InnerIterator it(x, k); it; ++it) s += rho(it.col(), it.row()) * it.value();
  }
  return s;
}

struct BlockSpectrum {
  std::vector<std::vector<int>> comps;
  std::vector<Vector> values;
  std::vector<Matrix> vectors;
};

BlockSpectrum block_eigen(const Matrix& m, bool with_vectors = true) {
  BlockSpectrum bs;
  bs.comps = nonzero_components(m);
  for (const auto& c : bs.comps) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gather(m, c, c), with_vectors ? Eigen::ComputeEigenvectors
                                                                           : Eigen::EigenvaluesOnly);
    bs.values.push_back(es.eigenvalues());
    if (with_vectors) bs.vectors.push_back(es.eigenvectors());
  }
  return bs;
}

double entropy_sum(const BlockSpectrum& bs) {
  double s = 0.0;
  for (const auto& v : bs.values) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (v[k] > 0.0) s -= v[k] * std::log(v[k]);
    }
  }
  return s;
}

FockEntropyResult relative_entropy_once(const FockDensity& rho, const FockDensity& sigma) {
  FockEntropyResult r;
  const double self = -entropy_sum(block_eigen(rho.rho, false));
  const BlockSpectrum sb = block_eigen(sigma.rho);
  double cross = 0.0;
  for (std::size_t b = 0; b < sb.comps.size(); ++b) {
    const Matrix rb = gather(rho.rho, sb.comps[b], sb.comps[b]);
    const Matrix& v = sb.vectors[b];
    const Vector w = (v.transpose() * rb * v).diagonal();
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      double lam = sb.values[b][k];
      // An isolated diagonal entry is its own exact eigenvalue; only values
      // from a block eigensolve carry absolute rounding noise.
      const double floor = sb.comps[b].size() == 1 ? std::numeric_limits<double>::min() : kFockEigenFloor;
      if (lam < floor) {
        ++r.floored;
        r.floored_weight += std::max(w[k], 0.0);
        lam = std::max(floor, kFockEigenFloor);
      }
      cross += w[k] * std::log(lam);
    }
  }
  r.support_mismatch = r.floored_weight > kFockMismatchWeight;
  r.value = r.support_mismatch ? std::numeric_limits<double>::infinity() : self - cross;
  return r;
}

}  // namespace

FockDensity fock_thermal(double gamma, int dim) {
  if (!std::isfinite(gamma) || gamma < 0.5) fail_validation("fock_thermal: gamma must be >= 1/2");
  if (dim < 2) fail_validation("fock_thermal: dim must be >= 2");
  const double nbar = gamma - 0.5;
  const double x = nbar / (nbar + 1.0);
  FockDensity s;
  s.dims = {dim};
  s.rho = Matrix::Zero(dim, dim);
  double kept = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double w = (1.0 - x) * std::pow(x, n);
    s.rho(n, n) = w;
    kept += w;
  }
  s.rho /= kept;
  s.trace_deficit = std::pow(x, dim);
  return s;
}

FockDensity fock_product(const FockDensity& a, const FockDensity& b) {
  check_state(a, "fock_product");
  check_state(b, "fock_product");
  FockDensity s;
  s.dims = a.dims;
  s.dims.insert(s.dims.end(), b.dims.begin(), b.dims.end());
  s.rho = Eigen::kroneckerProduct(a.rho, b.rho).eval();
  s.trace_deficit = 1.0 - (1.0 - a.trace_deficit) * (1.0 - b.trace_deficit);
  return s;
}

FockDensity fock_thermal_product(const std::vector<double>& gammas, int dim) {
  if (gammas.empty()) fail_validation("fock_thermal_product: no modes");
  FockDensity s = fock_thermal(gammas[0], dim);
  for (std::size_t k = 1; k < gammas.size(); ++k) s = fock_product(s, fock_thermal(gammas[k], dim));
  return s;
}

FockDensity fock_truncate(const FockDensity& state, int dim) {
  check_state(state, "fock_truncate");
  std::vector<int> dims = state.dims;
  for (int& d : dims) {
    if (dim > d) fail_validation("fock_truncate: cannot enlarge a mode");
    d = dim;
  }
  Matrix kept = reindex(state, dims);
  const double defect = 1.0 - kept.trace() / state.rho.trace();
  return renormalised(std::move(dims), std::move(kept), state.trace_deficit, std::max(defect, 0.0));
}

FockDensity fock_apply_squeeze(const FockDensity& state, FockSqueeze kind, double r, const std::vector<int>& modes,
                               const FockSqueezeOptions& options) {
  check_state(state, "fock_apply_squeeze");
  if (!std::isfinite(r)) fail_validation("fock_apply_squeeze: non-finite r");
  if (options.pad < 0) fail_validation("fock_apply_squeeze: negative padding");
  const int m = static_cast<int>(state.dims.size());
  for (int k : modes) {
    if (k < 0 || k >= m) fail_validation("fock_apply_squeeze: mode index out of range");
  }
  if (kind == FockSqueeze::two_mode && (modes.size() != 2 || modes[0] == modes[1])) {
    fail_validation("fock_apply_squeeze: two_mode needs two distinct modes");
  }
  if (kind == FockSqueeze::local && (modes.empty() || modes.size() > 2 || (modes.size() == 2 && modes[0] == modes[1]))) {
    fail_validation("fock_apply_squeeze: local needs one or two distinct modes");
  }
  if (r == 0.0) {
    FockDensity s = state;
    s.unitarity_defect = 0.0;
    return s;
  }

  std::vector<int> padded = state.dims;
  for (int& d : padded) d += options.pad;
  const int n = total_dim(padded);
  const std::vector<int> str = strides(padded);

  // Real antisymmetric generator on the padded space.
  std::vector<Triplet> trip;
  auto add = [&](int to, int from, double v) {
    trip.emplace_back(to, from, v);
    trip.emplace_back(from, to, -v);
  };
  for (int i = 0; i < n; ++i) {
    const std::vector<int> d = digits(i, padded);
    if (kind == FockSqueeze::two_mode) {
      const int a = modes[0];
      const int b = modes[1];
      if (d[a] + 1 < padded[a] && d[b] + 1 < padded[b]) {
        add(i + str[a] + str[b], i, r * std::sqrt((d[a] + 1.0) * (d[b] + 1.0)));
      }
    } else {
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const int a = modes[k];
        const double rk = k == 0 ? r : -r;
        if (d[a] + 2 < padded[a]) add(i + 2 * str[a], i, 0.5 * rk * std::sqrt((d[a] + 1.0) * (d[a] + 2.0)));
      }
    }
  }
  Sparse g(n, n);
  g.setFromTriplets(trip.begin(), trip.end());

  UnionFind uf(n);
  for (int k = 0; k < g.outerSize(); ++k) {
    for (Sparse::InnerIterator it(g, k); it; ++it) uf.join(static_cast<int>(it.row()), static_cast<int>(it.col()));
  }
  const auto comps = components(uf, n);
  // Only levels inside the original dims carry weight in and are kept out, so
  // each block needs U restricted to those members.
  const std::vector<int> old_str = strides(state.dims);
  std::vector<int> old(n, -1);
  for (int i = 0; i < n; ++i) {
    const std::vector<int> d = digits(i, padded);
    int idx = 0;
    bool inside = true;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d[k] >= state.dims[k]) inside = false;
      idx += d[k] * old_str[k];
    }
    if (inside) old[i] = idx;
  }
  std::vector<std::vector<int>> members;
  std::vector<Matrix> u;
  for (const auto& c : comps) {
    std::vector<int> inside;
    std::vector<int> local;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (old[c[j]] >= 0) {
        inside.push_back(old[c[j]]);
        local.push_back(static_cast<int>(j));
      }
    }
    if (inside.empty()) continue;
    Matrix blk(c.size(), c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      for (std::size_t i = 0; i < c.size(); ++i) blk(i, j) = g.coeff(c[i], c[j]);
    }
    u.push_back(gather(blk.exp(), local, local));
    members.push_back(std::move(inside));
  }

  Matrix kept = Matrix::Zero(state.rho.rows(), state.rho.cols());
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (std::size_t l = 0; l < members.size(); ++l) {
      const Matrix blk = gather(state.rho, members[k], members[l]);
      if (blk.isZero(0.0)) continue;
      scatter(kept, members[k], members[l], u[k] * blk * u[l].transpose());
    }
  }

  const double defect = std::max(1.0 - kept.trace() / state.rho.trace(), 0.0);
  if (defect > options.max_defect) {
    fail_validation("fock_apply_squeeze: truncation loss " + std::to_string(defect) + " exceeds " +
                    std::to_string(options.max_defect) + "; increase dim or reduce r");
  }
  return renormalised(state.dims, std::move(kept), state.trace_deficit, defect);
}

double fock_entropy(const FockDensity& state) {
  check_state(state, "fock_entropy");
  return entropy_sum(block_eigen(state.rho, false));
}

FockEntropyResult fock_relative_entropy(const FockDensity& rho, const FockDensity& sigma) {
  check_state(rho, "fock_relative_entropy");
  check_state(sigma, "fock_relative_entropy");
  if (rho.dims != sigma.dims) fail_validation("fock_relative_entropy: dims differ");
  FockEntropyResult r = relative_entropy_once(rho, sigma);
  const int dmin = *std::min_element(rho.dims.begin(), rho.dims.end());
  if (dmin > 7 && std::isfinite(r.value)) {
    const FockEntropyResult small = relative_entropy_once(fock_truncate(rho, dmin - 5), fock_truncate(sigma, dmin - 5));
    r.sensitivity = std::abs(r.value - small.value);
  }
  return r;
}

double fock_schmidt_entropy(double r, int dim) {
  if (!std::isfinite(r)) fail_validation("fock_schmidt_entropy: non-finite r");
  if (dim < 1) fail_validation("fock_schmidt_entropy: dim must be positive");
  if (r == 0.0) return 0.0;
  const double t2 = std::tanh(r) * std::tanh(r);
  if (std::pow(t2, dim) >= 1e-10) {
    fail_validation("fock_schmidt_entropy: dim too small, tanh^(2 dim) r = " + std::to_string(std::pow(t2, dim)));
  }
  const double c2 = std::cosh(r) * std::cosh(r);
  double s = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double p = std::pow(t2, n) / c2;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

CovarianceMatrix fock_covariance(const FockDensity& state) {
  check_state(state, "fock_covariance");
  const int m = static_cast<int>(state.dims.size());
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Sparse> q(m);
  std::vector<Sparse> pt(m);  // p = i pt
  for (int k = 0; k < m; ++k) {
    const Sparse a = lowering(state.dims, k);
    const Sparse ad = Sparse(a.transpose());
    q[k] = h * (a + ad);
    pt[k] = h * (ad - a);
  }
  const double tr = state.rho.trace();
  Vector mean_q(m);
  for (int k = 0; k < m; ++k) mean_q[k] = trace_product(state.rho, q[k]) / tr;
  Matrix alpha = Matrix::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    for (int l = k; l < m; ++l) {
      const Sparse qq = q[k] * q[l] + q[l] * q[k];
      const Sparse pp = pt[k] * pt[l] + pt[l] * pt[k];
      alpha(k, l) = alpha(l, k) = 0.5 * trace_product(state.rho, qq) / tr - mean_q[k] * mean_q[l];
      alpha(m + k, m + l) = alpha(m + l, m + k) = -0.5 * trace_product(state.rho, pp) / tr;
    }
  }
  return CovarianceMatrix(alpha);
}

double fock_occupation(const FockDensity& state, int mode) {
  check_state(state, "fock_occupation");
  if (mode < 0 || mode >= static_cast<int>(state.dims.size())) fail_validation("fock_occupation: bad mode");
  double s = 0.0;
  for (int i = 0; i < state.rho.rows(); ++i) s += state.rho(i, i) * digits(i, state.dims)[mode];
  return s / state.rho.trace();
}

}  // namespace cvree
