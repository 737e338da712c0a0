#include "cvree/descent.hpp"

#include "cvree/error.hpp"
#include "cvree/relent.hpp"

#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cvree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kAsymRounds = 3;
constexpr int kBisections = 60;

Matrix move_matrix(const DescentMove& mv, int n, double t = 1.0) {
  const ModeSelection modes{mv.first, mv.second >= 0 ? std::optional<int>(mv.second) : std::nullopt};
  double p = mv.param * t;
  if (mv.kind == TransformKind::local_squeeze_X || mv.kind == TransformKind::local_squeeze_Y) {
    p = std::pow(mv.param, t);
  }
  const double params[1] = {p};
  return elementary_transform(mv.kind, params, modes, n).matrix();
}

Matrix compose(const std::vector<DescentMove>& moves, int n, double t = 1.0) {
  Matrix v = Matrix::Identity(2 * n, 2 * n);
  for (const auto& mv : moves) v = move_matrix(mv, n, t) * v;
  return v;
}

Matrix congruence(const Matrix& v, const Matrix& b) {
  Matrix out = v * b * v.transpose();
  return 0.5 * (out + out.transpose());
}

// Aligned objective without the constant self term.
double aligned_sum(const Matrix& beta) {
  const Vector bb = beta_bar(beta);
  double s = 0.0;
  for (Eigen::Index j = 0; j < bb.size(); ++j) {
    const double x = bb[j] - 0.5;
    if (!(x >= -1e-13)) return kInf;
    s += bosonic_entropy(std::max(x, 0.0));
  }
  return s;
}

double self_term(const Vector& gammas_rho) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < gammas_rho.size(); ++j) s -= bosonic_entropy(gammas_rho[j] - 0.5);
  return s;
}

struct Work {
  int n = 0;
  Matrix beta;
  std::vector<DescentMove> moves;
  double value = 0.0;  // aligned_sum(beta)
};

bool try_move(Work& w, const DescentMove& mv) {
  const Matrix b = congruence(move_matrix(mv, w.n), w.beta);
  const double v = aligned_sum(b);
  if (v < w.value) {
    w.beta = b;
    w.value = v;
    w.moves.push_back(mv);
    return true;
  }
  return false;
}

double eval_move(const Work& w, const DescentMove& mv) {
  return aligned_sum(congruence(move_matrix(mv, w.n), w.beta));
}

double bar_of(const Matrix& beta, int i) {
  const int n = static_cast<int>(beta.rows() / 2);
  return 0.5 * (beta(i, i) + beta(n + i, n + i));
}

// Rotations keep bbar_i + bbar_j fixed, so the best angle maximises the spread
// |bbar_i - bbar_j|, a sinusoid in 2 theta fitted from three samples.
void best_rotation(Work& w, TransformKind kind, int i, int j) {
  auto diff = [&](double th) {
    const Matrix b = congruence(move_matrix({kind, i, j, th}, w.n), w.beta);
    return bar_of(b, i) - bar_of(b, j);
  };
  const double q = 0.25 * std::numbers::pi;
  const double fp = diff(q);
  const double fm = diff(-q);
  const double k = 0.5 * (fp + fm);
  const double bs = 0.5 * (fp - fm);
  const double ac = diff(0.0) - k;
  if (std::hypot(ac, bs) == 0.0) return;
  const double th = 0.5 * std::atan2(bs, ac);
  DescentMove best{kind, i, j, th};
  double best_v = eval_move(w, best);
  for (double alt : {th + 0.5 * std::numbers::pi, th - 0.5 * std::numbers::pi}) {
    const DescentMove mv{kind, i, j, alt};
    const double v = eval_move(w, mv);
    if (v < best_v) {
      best_v = v;
      best = mv;
    }
  }
  try_move(w, best);
}

// Squeezes change bbar_i + bbar_j as K + A cosh 2r + B sinh 2r. Start from the
// sum-minimising r and refine on the actual objective over [0, 2 r*].
void best_squeeze(Work& w, TransformKind kind, int i, int j) {
  auto sum = [&](double r) {
    const Matrix b = congruence(move_matrix({kind, i, j, r}, w.n), w.beta);
    return bar_of(b, i) + bar_of(b, j);
  };
  constexpr double r0 = 0.25;
  const double s0 = sum(0.0);
  const double sp = sum(r0);
  const double sm = sum(-r0);
  const double bcoef = (sp - sm) / (2.0 * std::sinh(2.0 * r0));
  const double acoef = (0.5 * (sp + sm) - s0) / (std::cosh(2.0 * r0) - 1.0);
  if (!(acoef > std::abs(bcoef)) || bcoef == 0.0) return;
  const double rstar = 0.5 * std::atanh(-bcoef / acoef);
  DescentMove best{kind, i, j, rstar};
  double best_v = eval_move(w, best);
  const double lo = std::min(0.0, 2.0 * rstar);
  const double hi = std::max(0.0, 2.0 * rstar);
  if (hi > lo) {
    const detail::ScalarResult r =
        detail::brent_minimize([&](double x) { return eval_move(w, {kind, i, j, x}); }, lo, hi, 52);
    if (r.value < best_v) {
      best_v = r.value;
      best.param = r.x;
    }
  }
  try_move(w, best);
}

// Local squeeze X chosen for the value reached after the following rotation.
void best_asymmetrization(Work& w, TransformKind rotation, int i, int j) {
  auto lookahead = [&](double lx) {
    Work trial{w.n, congruence(move_matrix({TransformKind::local_squeeze_X, i, j, std::exp(lx)}, w.n), w.beta), {}, 0.0};
    trial.value = aligned_sum(trial.beta);
    best_rotation(trial, rotation, i, j);
    return trial.value;
  };
  Work rot_only = w;
  best_rotation(rot_only, rotation, i, j);
  const detail::ScalarResult r = detail::grid_brent_minimize(lookahead, -2.0, 2.0, 9, 40);
  if (r.value < rot_only.value && std::abs(r.x) > 0.0) {
    try_move(w, {TransformKind::local_squeeze_X, i, j, std::exp(r.x)});
  }
}

void apply_group(Work& w, DescentGroup g, int i, int j) {
  const TransformKind rot =
      g == DescentGroup::qq ? TransformKind::two_mode_rotation_qq : TransformKind::two_mode_rotation_qp;
  const TransformKind sq =
      g == DescentGroup::qq ? TransformKind::two_mode_squeeze_qq : TransformKind::two_mode_squeeze_qp;
  for (int round = 0; round < kAsymRounds; ++round) {
    best_asymmetrization(w, rot, i, j);
    best_rotation(w, rot, i, j);
  }
  best_squeeze(w, sq, i, j);
}

// Brings every single-mode block of beta to a multiple of the identity:
// V = sqrt(nu) B^{-1/2} = rot(-phi) Y(y) rot(phi).
void apply_local(Work& w) {
  const int n = w.n;
  for (int j = 0; j < n; ++j) {
    Eigen::Matrix2d b;
    b << w.beta(j, j), w.beta(j, n + j), w.beta(n + j, j), w.beta(n + j, n + j);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (std::abs(b(0, 0) - b(1, 1)) <= 1e-15 * scale && std::abs(b(0, 1)) <= 1e-15 * scale) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b);
    Eigen::Matrix2d r = es.eigenvectors();
    if (r.determinant() < 0) r.col(1) *= -1.0;
    const double nu = std::sqrt(std::max(b.determinant(), 0.0));
    const double phi = std::atan2(r(1, 0), r(0, 0));
    const double y = nu / es.eigenvalues()[0];
    Work trial = w;
    trial.beta = congruence(compose({{TransformKind::local_rotation, j, -1, phi},
                                     {TransformKind::local_squeeze_Y, j, -1, y},
                                     {TransformKind::local_rotation, j, -1, -phi}},
                                    n),
                            w.beta);
    trial.value = aligned_sum(trial.beta);
    if (trial.value <= w.value) {
      w.beta = trial.beta;
      w.value = trial.value;
      w.moves.push_back({TransformKind::local_rotation, j, -1, phi});
      w.moves.push_back({TransformKind::local_squeeze_Y, j, -1, y});
      w.moves.push_back({TransformKind::local_rotation, j, -1, -phi});
    }
  }
}

double pair_coupling(const Matrix& beta, int i, int j) {
  const int n = static_cast<int>(beta.rows() / 2);
  return std::max({std::abs(beta(i, j)), std::abs(beta(n + i, n + j)), std::abs(beta(i, n + j)),
                   std::abs(beta(n + i, j))});
}

DescentState finish(const DescentState& base, const Work& w) {
  DescentState s = base;
  if (!w.moves.empty()) {
    const Matrix v = compose(w.moves, w.n);
    s.s_sigma = SymplecticMatrix(s.s_sigma.matrix() * symplectic_inverse(v));
    s.beta = w.beta;
  }
  return align_gammas(s);
}

Matrix sigma_matrix(const Matrix& s, const Vector& gammas) {
  Vector d(2 * gammas.size());
  d << gammas, gammas;
  Matrix a = s * d.asDiagonal() * s.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace

std::string_view to_string(DescentGroup g) {
  switch (g) {
    case DescentGroup::local: return "local";
    case DescentGroup::qq: return "qq";
    case DescentGroup::qp: return "qp";
  }
  return "unknown";
}

Vector beta_bar(const Matrix& beta) {
  const Eigen::Index n = beta.rows() / 2;
  Vector out(n);
  for (Eigen::Index j = 0; j < n; ++j) out[j] = 0.5 * (beta(j, j) + beta(n + j, n + j));
  return out;
}

DescentState make_descent_state(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& sigma) {
  if (alpha_rho.modes() != sigma.modes()) fail_validation("descent: rho and sigma mode counts differ");
  if (!is_physical(alpha_rho)) fail_validation("descent: unphysical rho");
  DescentState s;
  s.gammas_rho = symplectic_eigenvalues(alpha_rho.matrix());
  const WilliamsonResult ws = williamson(em_to_cm(sigma).matrix());
  s.s_sigma = ws.s;
  s.gammas_sigma = ws.gammas;
  const Matrix sinv = s.s_sigma.inverse().matrix();
  s.beta = congruence(sinv, alpha_rho.matrix());
  s.objective = descent_objective(s);
  return s;
}

double descent_objective(const DescentState& state) {
  const Vector bb = beta_bar(state.beta);
  double v = self_term(state.gammas_rho);
  for (Eigen::Index j = 0; j < bb.size(); ++j) {
    if (bb[j] < 0.5 - 1e-12) fail_guard("descent_objective: beta_bar below 1/2 (uncertainty bound violated)");
    const double g = state.gammas_sigma[j];
    v += 0.5 * (std::log(g - 0.5) + std::log(g + 0.5)) + em_eigenvalue(g) * bb[j];
  }
  return v;
}

DescentState align_gammas(const DescentState& state) {
  DescentState s = state;
  const Vector bb = beta_bar(s.beta);
  for (Eigen::Index j = 0; j < bb.size(); ++j) {
    if (!(bb[j] - 0.5 > kPureGuard)) fail_guard("align_gammas: beta_bar within the pure-state guard of 1/2");
  }
  s.gammas_sigma = bb;
  s.objective = self_term(s.gammas_rho) + aligned_sum(s.beta);
  return s;
}

DescentState descent_step(const DescentState& state) {
  const int n = state.s_sigma.modes();
  Work base{n, state.beta, {}, aligned_sum(state.beta)};
  apply_local(base);

  Work best = base;
  DescentGroup best_group = DescentGroup::local;
  if (n > 1) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      return pair_coupling(base.beta, a.first, a.second) > pair_coupling(base.beta, b.first, b.second);
    });
    // Largest coupling first; the remaining pairs are a round-robin fallback.
    for (const auto& [i, j] : pairs) {
      for (DescentGroup g : {DescentGroup::qq, DescentGroup::qp}) {
        Work w = base;
        apply_group(w, g, i, j);
        apply_local(w);
        if (w.value < best.value) {
          best = w;
          best_group = g;
        }
      }
      if (best.value < base.value) break;
    }
  }
  if (best.moves.empty()) return align_gammas(state);

  DescentState next = finish(state, best);
  DescentStep rec;
  rec.iteration = static_cast<int>(state.step_log.size()) + 1;
  rec.group = best_group;
  rec.moves = best.moves;
  rec.objective = next.objective;
  rec.gain = state.objective - next.objective;
  next.step_log.push_back(rec);
  return next;
}

CovarianceMatrix sigma_cm(const DescentState& state) {
  return CovarianceMatrix(sigma_matrix(state.s_sigma.matrix(), state.gammas_sigma));
}

namespace {

struct PathPoint {
  Matrix cm;
  double ppt = 0.0;  // min PPT symplectic eigenvalue minus 1/2
};

// sigma along the step from `a` to `b`: S_a V(t)^{-1} with gammas interpolated.
PathPoint along(const DescentState& a, const DescentState& b, const std::vector<DescentMove>& moves, double t) {
  const int n = a.s_sigma.modes();
  const Matrix v = compose(moves, n, t);
  const Matrix s = a.s_sigma.matrix() * symplectic_inverse(v);
  const Vector g = (1.0 - t) * a.gammas_sigma + t * b.gammas_sigma;
  PathPoint p;
  p.cm = sigma_matrix(s, g);
  p.ppt = is_separable(CovarianceMatrix(p.cm)).min_ppt_gamma - 0.5;
  return p;
}

BorderCrossing bisect(const CovarianceMatrix& rho, const DescentState& a, const DescentState& b,
                      const std::vector<DescentMove>& moves, int iteration) {
  double lo = 0.0;
  double hi = 1.0;
  const bool lo_sep = along(a, b, moves, lo).ppt >= 0.0;
  for (int k = 0; k < kBisections; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((along(a, b, moves, mid).ppt >= 0.0) == lo_sep) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Report the separable end of the final bracket.
  const double t = lo_sep ? lo : hi;
  const PathPoint p = along(a, b, moves, t);
  BorderCrossing c;
  c.iteration = iteration;
  c.t = t;
  c.into_separable = !lo_sep;
  c.sigma = CovarianceMatrix(p.cm);
  c.border_residual = border_residual(p.cm);
  c.value = relative_entropy(rho, c.sigma).value;
  return c;
}

}  // namespace

DescentResult descend(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& sigma0, DescentStop stop,
                      const DescentOptions& options) {
  if (options.max_iterations < 1) fail_validation("descend: max_iterations must be positive");
  DescentResult res;
  const DescentState start = make_descent_state(alpha_rho, sigma0);
  const bool track = stop == DescentStop::at_border && alpha_rho.modes() == 2;

  DescentState cur = align_gammas(start);
  res.objectives.push_back(cur.objective);
  std::optional<DescentState> last_separable;
  auto separable = [](const DescentState& s) { return is_separable(sigma_cm(s)).separable; };
  bool cur_sep = false;
  if (track) {
    const bool start_sep = separable(start);
    cur_sep = separable(cur);
    if (start_sep != cur_sep) res.crossings.push_back(bisect(alpha_rho, start, cur, {}, 0));
    if (cur_sep) last_separable = cur;
  }

  for (int it = 1; it <= options.max_iterations; ++it) {
    DescentState next = descent_step(cur);
    const double gain = cur.objective - next.objective;
    const bool moved = next.step_log.size() > cur.step_log.size();
    if (moved) {
      res.objectives.push_back(next.objective);
      if (track) {
        const bool next_sep = separable(next);
        if (next_sep != cur_sep) res.crossings.push_back(bisect(alpha_rho, cur, next, next.step_log.back().moves, it));
        if (next_sep) last_separable = next;
        cur_sep = next_sep;
      }
    }
    cur = std::move(next);
    if (!moved || gain < options.tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    res.message = "descent stalled: " + std::to_string(options.max_iterations) + " iterations without convergence";
  }

  if (stop == DescentStop::at_rho) {
    res.state = cur;
    if (res.converged && cur.objective > 1e-8) {
      res.converged = false;
      res.message = "descent converged to objective " + std::to_string(cur.objective) + " > 1e-8";
    }
    return res;
  }

  res.state = last_separable ? *last_separable : cur;
  const BorderCrossing* best = nullptr;
  for (const auto& c : res.crossings) {
    if (best == nullptr || c.value < best->value) best = &c;
  }
  if (best != nullptr) {
    res.border_em = cm_to_em(best->sigma);
    res.border_value = best->value;
  }
  return res;
}

}  // namespace cvree
