#include "cvree/gree.hpp"

#include "cvree/error.hpp"
#include "cvree/relent.hpp"

#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

namespace cvree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSearchFloor = 2e-6;

struct RhoData {
  Matrix alpha;
  Matrix local;  // alpha_std = local * alpha * local^T
  std::array<double, 4> alpha_sf{};
  double self_term = 0.0;
};

struct Candidate {
  double value = kInf;
  BorderParams params;
  InnerMinState inner;
  LocalReduction m_reduction;
};

int type_index(BorderType t) { return static_cast<int>(t); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double log_c_term(double ga, double gb) {
  // -log c = 1/2 sum log(gamma^2 - 1/4)
  return 0.5 * (std::log(ga - 0.5) + std::log(ga + 0.5) + std::log(gb - 0.5) + std::log(gb + 0.5));
}

Candidate evaluate_candidate(const RhoData& rd, const BorderParams& p) {
  Candidate c;
  c.params = p;
  const ExponentialMatrix m = border_em(p);
  c.m_reduction = reduce_two_mode(m.matrix());
  const auto& red = c.m_reduction;
  c.inner = inner_minimize(rd.alpha_sf, fold_em_standard_form(red.a, red.cq, red.b, red.cp));
  c.value = rd.self_term + log_c_term(p.gamma_a, p.gamma_b) + c.inner.half_trace;
  return c;
}

RhoData prepare(const CovarianceMatrix& rho) {
  RhoData rd;
  rd.alpha = rho.matrix();
  const StandardForm sf = standard_form(rho);
  rd.local = sf.local.matrix();
  rd.alpha_sf = {sf.a, sf.c1, sf.b, -sf.c2};
  rd.self_term = -von_neumann_entropy(rho);
  return rd;
}

int subfamilies(BorderType t) { return t == BorderType::IV ? 1 : 2; }
int dimension(BorderType t) { return (t == BorderType::I || t == BorderType::II) ? 3 : 2; }

BorderParams decode(BorderType t, int sub, const Eigen::VectorXd& z) {
  const double ga = 0.5 + kSearchFloor + std::exp(std::min(z[0], 30.0));
  const double gb = 0.5 + kSearchFloor + std::exp(std::min(z[1], 30.0));
  switch (t) {
    case BorderType::I: {
      const double r = type_i_max_squeeze(ga, gb) * sigmoid(z[2]);
      return make_border_params(t, ga, gb, r, sub);
    }
    case BorderType::II:
      return make_border_params(t, ga, gb, 0.5 * std::numbers::pi * sigmoid(z[2]), sub);
    case BorderType::III:
      return make_border_params(t, ga, gb, static_cast<double>(sub));
    case BorderType::IV:
      return make_border_params(t, ga, gb);
  }
  fail_validation("unknown border type");
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return std::tie(a.params.gamma_a, a.params.gamma_b, a.params.shape, a.params.branch) <
         std::tie(b.params.gamma_a, b.params.gamma_b, b.params.shape, b.params.branch);
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix assemble_em(const RhoData& rd, const InnerMinState& in) {
  const auto& m = in.m_std;
  Matrix mp = Matrix::Zero(4, 4);
  mp(0, 0) = mp(2, 2) = m[0];
  mp(1, 1) = mp(3, 3) = m[2];
  mp(0, 1) = mp(1, 0) = m[1];
  mp(2, 3) = mp(3, 2) = m[3];
  const double x = in.x_opt;
  const double y = in.y_opt;
  Vector d(4);
  d << std::sqrt(x * y), std::sqrt(y / x), 1.0 / std::sqrt(x * y), std::sqrt(x / y);
  const Matrix msig = d.asDiagonal() * mp * d.asDiagonal();
  Matrix out = rd.local.transpose() * msig * rd.local;
  return 0.5 * (out + out.transpose());
}

// Direct search over general local operations applied to the border EM's
// standard form, to compare against the reduced objective.
double direct_local_search(const RhoData& rd, const LocalReduction& red, std::uint64_t seed) {
  Matrix astd = Matrix::Zero(4, 4);
  astd(0, 0) = astd(2, 2) = rd.alpha_sf[0];
  astd(1, 1) = astd(3, 3) = rd.alpha_sf[2];
  astd(0, 1) = astd(1, 0) = rd.alpha_sf[1];
  astd(2, 3) = astd(3, 2) = rd.alpha_sf[3];
  Matrix ms = Matrix::Zero(4, 4);
  ms(0, 0) = ms(2, 2) = red.a;
  ms(1, 1) = ms(3, 3) = red.b;
  ms(0, 1) = ms(1, 0) = red.cq;
  ms(2, 3) = ms(3, 2) = red.cp;
  auto f = [&](const Eigen::VectorXd& z) {
    const double params[6] = {z[0], z[1], z[2], z[3], z[4], z[5]};
    if (std::abs(z[4]) > 20.0 || std::abs(z[5]) > 20.0) return kInf;
    const Matrix l = elementary_transform(TransformKind::general_local, params, {0, 1}, 2).matrix();
    return 0.5 * (astd * l.transpose() * ms * l).trace();
  };
  std::mt19937_64 rng(mix(seed ^ 0x5eedULL));
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> sq(-1.5, 1.5);
  double best = kInf;
  detail::SimplexOptions opts;
  opts.size_tol = 1e-9;
  opts.max_iterations = 6000;
  for (int s = 0; s < 6; ++s) {
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(6);
    if (s > 0) z0 << ang(rng), ang(rng), ang(rng), ang(rng), sq(rng), sq(rng);
    best = std::min(best, detail::simplex_minimize(f, z0, opts).value);
  }
  return best;
}

GreeResult separable_result(const CovarianceMatrix& rho) {
  GreeResult r;
  r.value = 0.0;
  r.diagnostics.separable_input = true;
  for (int t = 0; t < 4; ++t) r.per_type[t] = {static_cast<BorderType>(t), 0.0, std::nullopt};
  try {
    r.best_em = cm_to_em(rho);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical_guard) throw;
  }
  return r;
}

}  // namespace

double border_candidate_value(const CovarianceMatrix& rho, const BorderParams& p) {
  if (rho.modes() != 2) fail_validation("border_candidate_value: two-mode input required");
  return evaluate_candidate(prepare(rho), p).value;
}

GreeResult gree(const CovarianceMatrix& rho, const GreeOptions& options) {
  if (rho.modes() != 2) fail_validation("gree: two-mode input required");
  if (!is_physical(rho)) fail_validation("gree: unphysical covariance matrix");
  if (options.starts < 1) fail_validation("gree: starts must be positive");
  if (is_separable(rho).separable) return separable_result(rho);

  const RhoData rd = prepare(rho);
  GreeResult result;
  for (int t = 0; t < 4; ++t) result.per_type[t] = {static_cast<BorderType>(t), kInf, std::nullopt};

  detail::SimplexOptions nm;
  nm.size_tol = 1e-8;
  nm.value_tol = options.tol;
  nm.max_iterations = 3000;

  Candidate global;
  std::array<Candidate, 4> per_type;
  for (BorderType t : {BorderType::I, BorderType::II, BorderType::III, BorderType::IV}) {
    if (std::find(options.types.begin(), options.types.end(), t) == options.types.end()) continue;
    for (int sub = 0; sub < subfamilies(t); ++sub) {
      auto objective = [&](const Eigen::VectorXd& z) {
        try {
          return evaluate_candidate(rd, decode(t, sub, z)).value;
        } catch (const Error&) {
          return kInf;
        }
      };
      std::mt19937_64 rng(mix(options.seed + 1000003ULL * static_cast<std::uint64_t>(type_index(t)) +
                              7919ULL * static_cast<std::uint64_t>(sub)));
      std::uniform_real_distribution<double> ug(-4.0, 1.5);
      std::uniform_real_distribution<double> us(-3.0, 3.0);
      for (int s = 0; s < options.starts; ++s) {
        Eigen::VectorXd z0(dimension(t));
        z0[0] = ug(rng);
        z0[1] = ug(rng);
        if (dimension(t) == 3) z0[2] = us(rng);
        const detail::SimplexResult sr = detail::simplex_minimize(objective, z0, nm);
        result.diagnostics.evaluations += sr.evaluations;
        result.diagnostics.iterations += sr.iterations;
        ++result.diagnostics.starts;
        if (!std::isfinite(sr.value) || sr.value >= 1e99) continue;
        Candidate c;
        try {
          c = evaluate_candidate(rd, decode(t, sub, sr.x));
        } catch (const Error&) {
          continue;
        }
        if (better(c, per_type[type_index(t)])) per_type[type_index(t)] = c;
      }
    }
    const Candidate& best_t = per_type[type_index(t)];
    if (std::isfinite(best_t.value)) {
      result.per_type[type_index(t)] = {t, best_t.value, best_t.params};
      // Strict comparison keeps the earlier type on ties.
      if (best_t.value < global.value) global = best_t;
    }
  }
  if (!std::isfinite(global.value)) fail_search("gree: no feasible border state found in any family");

  result.value = std::max(global.value, 0.0);
  result.best_type = global.params.type;
  result.best_params = global.params;
  result.diagnostics.x_opt = global.inner.x_opt;
  result.diagnostics.y_opt = global.inner.y_opt;
  const ExponentialMatrix em(assemble_em(rd, global.inner));
  result.best_em = em;
  result.diagnostics.border_residual = border_residual(em_to_cm(em).matrix());
  result.diagnostics.value_check = std::abs(relative_entropy(rho, em).value - result.value);
  if (options.spot_check) {
    const double direct = direct_local_search(rd, global.m_reduction, options.seed);
    result.diagnostics.spot_check_gap = global.inner.half_trace - direct;
    result.diagnostics.spot_check_flag =
        result.diagnostics.spot_check_gap > 1e-6 * std::max(1.0, std::abs(global.inner.half_trace));
  }
  return result;
}

double symmetric_objective(const SymmetricParams& p, double ma, double mb) {
  if (!(ma > 0.0) || !(mb > 0.0)) return std::nan("");
  const double ta = std::tanh(0.5 * ma);
  const double tb = std::tanh(0.5 * mb);
  const double bracket = (p.m + p.kq) * (p.m - p.kp) * ma * ma + (p.m - p.kq) * (p.m + p.kp) * mb * mb +
                         (p.m - p.kq) * (p.m - p.kp) * ma * mb / (ta * tb) +
                         (p.m + p.kq) * (p.m + p.kp) * ma * mb * ta * tb;
  const double log_c = 0.5 * ma + std::log1p(-std::exp(-ma)) + 0.5 * mb + std::log1p(-std::exp(-mb));
  return -log_c + 0.5 * std::sqrt(bracket);
}

ExponentialMatrix symmetric_border_em(const SymmetricParams& p, double ma, double mb) {
  validate(p);
  if (!(ma > 0.0) || !(mb > 0.0) || !std::isfinite(ma) || !std::isfinite(mb)) {
    fail_validation("symmetric_border_em: symplectic eigenvalues of M must be positive");
  }
  // In the (q1 +- q2)/sqrt2 basis: M_q = diag(ma/u, mb/v), M_p = diag(ma u, mb v),
  // with v/u = tanh(ma/2) tanh(mb/2) from the border condition and the scale of
  // (u, v) chosen to minimise Tr(alpha_rho M).
  const double v0 = std::tanh(0.5 * ma) * std::tanh(0.5 * mb);
  const double qt = (p.m + p.kq) * ma + (p.m - p.kq) * mb / v0;
  const double pt = (p.m - p.kp) * ma + (p.m + p.kp) * mb * v0;
  const double lam = std::sqrt(qt / pt);
  const double u = lam;
  const double v = lam * v0;
  const double q1 = ma / u;
  const double q2 = mb / v;
  const double p1 = ma * u;
  const double p2 = mb * v;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 0.5 * (q1 + q2);
  m(0, 1) = m(1, 0) = 0.5 * (q1 - q2);
  m(2, 2) = m(3, 3) = 0.5 * (p1 + p2);
  m(2, 3) = m(3, 2) = 0.5 * (p1 - p2);
  return ExponentialMatrix(m);
}

GreeResult gree_symmetric(const SymmetricParams& p, const GreeOptions& options) {
  validate(p);
  const CovarianceMatrix rho = symmetric_cm(p);
  if (is_separable(rho).separable) return separable_result(rho);
  const double self = -von_neumann_entropy(rho);

  auto f = [&](const Eigen::VectorXd& z) {
    if (std::abs(z[0]) > 40.0 || std::abs(z[1]) > 40.0) return kInf;
    return symmetric_objective(p, std::exp(z[0]), std::exp(z[1]));
  };
  detail::SimplexOptions nm;
  nm.size_tol = 1e-12;
  nm.value_tol = 1e-14;
  nm.max_iterations = 4000;
  std::mt19937_64 rng(mix(options.seed ^ 0x53594dULL));
  std::uniform_real_distribution<double> u(-3.0, 2.5);
  GreeResult result;
  Eigen::VectorXd best;
  double best_v = kInf;
  const int starts = std::max(8, options.starts / 4);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd z0(2);
    z0 << u(rng), u(rng);
    const detail::SimplexResult sr = detail::simplex_minimize(f, z0, nm);
    result.diagnostics.evaluations += sr.evaluations;
    result.diagnostics.iterations += sr.iterations;
    ++result.diagnostics.starts;
    if (sr.value < best_v || (sr.value == best_v && std::tie(sr.x[0], sr.x[1]) < std::tie(best[0], best[1]))) {
      best_v = sr.value;
      best = sr.x;
    }
  }
  if (!std::isfinite(best_v) || best_v >= 1e99) fail_search("gree_symmetric: minimisation failed");
  const double ma = std::exp(best[0]);
  const double mb = std::exp(best[1]);
  result.value = std::max(self + best_v, 0.0);
  result.best_type = BorderType::IV;
  result.best_params = make_border_params(BorderType::IV, cm_eigenvalue(ma), cm_eigenvalue(mb));
  for (int t = 0; t < 4; ++t) result.per_type[t] = {static_cast<BorderType>(t), kInf, std::nullopt};
  result.per_type[3] = {BorderType::IV, result.value, result.best_params};
  const ExponentialMatrix em = symmetric_border_em(p, ma, mb);
  result.best_em = em;
  result.diagnostics.border_residual = border_residual(em_to_cm(em).matrix());
  result.diagnostics.value_check = std::abs(relative_entropy(rho, em).value - result.value);
  {
    const double ta = std::tanh(0.5 * ma);
    const double tb = std::tanh(0.5 * mb);
    const double bracket = (p.m + p.kq) * (p.m - p.kp) * ma * ma + (p.m - p.kq) * (p.m + p.kp) * mb * mb +
                           (p.m - p.kq) * (p.m - p.kp) * ma * mb / (ta * tb) +
                           (p.m + p.kq) * (p.m + p.kp) * ma * mb * ta * tb;
    const double log_c = 0.5 * ma + std::log1p(-std::exp(-ma)) + 0.5 * mb + std::log1p(-std::exp(-mb));
    result.diagnostics.alternative_reading_value = self - log_c + 0.5 * bracket;
  }
  return result;
}

double tmst_objective(double m, double k, double mu) {
  if (!(mu > 0.0)) return std::nan("");
  const double t = std::tanh(0.5 * mu);
  const double log_2sinh = 0.5 * mu + std::log1p(-std::exp(-mu));
  return -2.0 * log_2sinh + 0.5 * mu * ((m - k) / t + (m + k) * t);
}

GreeResult gree_tmst(double m, double k) {
  const SymmetricParams p{m, std::abs(k), std::abs(k)};
  validate(p);
  const CovarianceMatrix rho = symmetric_cm(p);
  if (is_separable(rho).separable) return separable_result(rho);
  const double self = -von_neumann_entropy(rho);
  auto f = [&](double lmu) { return tmst_objective(p.m, p.kq, std::exp(lmu)); };
  const detail::ScalarResult r = detail::grid_brent_minimize(f, -12.0, 6.0, 361, 60);
  const double mu = std::exp(r.x);

  GreeResult result;
  result.value = std::max(self + r.value, 0.0);
  result.best_type = BorderType::IV;
  const double g = cm_eigenvalue(mu);
  result.best_params = make_border_params(BorderType::IV, g, g);
  for (int t = 0; t < 4; ++t) result.per_type[t] = {static_cast<BorderType>(t), kInf, std::nullopt};
  result.per_type[3] = {BorderType::IV, result.value, result.best_params};
  const ExponentialMatrix em = symmetric_border_em(p, mu, mu);
  result.best_em = em;
  result.diagnostics.starts = 1;
  result.diagnostics.evaluations = r.evaluations;
  result.diagnostics.border_residual = border_residual(em_to_cm(em).matrix());
  result.diagnostics.value_check = std::abs(relative_entropy(rho, em).value - result.value);
  return result;
}

}  // namespace cvree
