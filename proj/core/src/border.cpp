#include "cvree/error.hpp"
#include "cvree/gree.hpp"

#include "optimize.hpp"

#include <cmath>
#include <string>

namespace cvree {

namespace {

void check_gamma(double g, const char* what) {
  if (!std::isfinite(g) || !(g > 0.5 + kBorderGammaFloor)) {
    fail_guard(std::string(what) + ": symplectic eigenvalue " + std::to_string(g) +
               " is outside the border domain (must exceed 1/2 + 1e-6)");
  }
}

double border_p(double ga, double gb) { return (2.0 * ga * ga - 0.5) * (2.0 * gb * gb - 0.5); }

double x_from_t(double t) {
  const double disc = std::max(t * t - 4.0, 0.0);
  return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

// q block of a q-p decorrelated symplectic S = S_q (+) S_q^{-T}.
Matrix qp_symplectic(const Eigen::Matrix2d& sq) {
  Matrix s = Matrix::Zero(4, 4);
  s.topLeftCorner(2, 2) = sq;
  s.bottomRightCorner(2, 2) = sq.inverse().transpose();
  return s;
}

}  // namespace

double type_i_max_squeeze(double gamma_a, double gamma_b) {
  check_gamma(gamma_a, "type_i_max_squeeze");
  check_gamma(gamma_b, "type_i_max_squeeze");
  return 0.5 * std::asinh(std::sqrt(border_p(gamma_a, gamma_b)) / (gamma_a + gamma_b));
}

double border_x_prime(BorderType type, double gamma_a, double gamma_b, double shape) {
  check_gamma(gamma_a, "border_x_prime");
  check_gamma(gamma_b, "border_x_prime");
  if (!std::isfinite(shape)) fail_validation("border_x_prime: non-finite shape parameter");
  const double p = border_p(gamma_a, gamma_b);
  const double sum2 = gamma_a * gamma_a + gamma_b * gamma_b;
  const double prod = gamma_a * gamma_b;
  double t = 0.0;
  if (type == BorderType::I) {
    const double sh = std::sinh(2.0 * shape);
    if (sh == 0.0) fail_validation("border_x_prime: type I needs r != 0");
    t = (p / (sh * sh) - sum2) / prod;
  } else if (type == BorderType::II) {
    const double sn = std::sin(2.0 * shape);
    if (std::abs(sn) < 1e-300) fail_validation("border_x_prime: type II needs sin(2 theta) != 0");
    t = (p / (sn * sn) + sum2) / prod;
  } else {
    fail_validation("border_x_prime: only types I and II carry x'");
  }
  if (!std::isfinite(t)) fail_guard("border_x_prime: border equality diverges (x' out of domain)");
  if (t < 2.0 - 1e-12) {
    fail_guard("border_x_prime: no border state at these parameters (x'^2 + x'^-2 = " + std::to_string(t) + " < 2)");
  }
  return x_from_t(t);
}

BorderParams make_border_params(BorderType type, double gamma_a, double gamma_b, double shape, int branch) {
  check_gamma(gamma_a, "make_border_params");
  check_gamma(gamma_b, "make_border_params");
  BorderParams p{type, gamma_a, gamma_b, shape, branch, 1.0};
  switch (type) {
    case BorderType::I:
    case BorderType::II: {
      if (branch != 0 && branch != 1) fail_validation("make_border_params: branch must be 0 or 1");
      const double xp = border_x_prime(type, gamma_a, gamma_b, shape);
      p.x_prime = branch == 0 ? xp : 1.0 / xp;
      if (type == BorderType::II) {
        const double hi = std::max(gamma_a / gamma_b, gamma_b / gamma_a);
        const double lo = 1.0 / hi;
        const double x2 = p.x_prime * p.x_prime;
        if (!(x2 >= hi * (1.0 - 1e-12) || x2 <= lo * (1.0 + 1e-12))) {
          fail_guard("make_border_params: type II x' inside the excluded range");
        }
      }
      break;
    }
    case BorderType::III:
      if (shape != 0.0 && shape != 1.0) fail_validation("make_border_params: type III kind must be 0 or 1");
      p.branch = 0;
      break;
    case BorderType::IV:
      p.shape = 0.0;
      p.branch = 0;
      break;
  }
  return p;
}

Matrix border_symplectic(const BorderParams& p) {
  check_gamma(p.gamma_a, "border_symplectic");
  check_gamma(p.gamma_b, "border_symplectic");
  const double ga = p.gamma_a;
  const double gb = p.gamma_b;
  switch (p.type) {
    case BorderType::I:
    case BorderType::II: {
      if (!(p.x_prime > 0.0) || !std::isfinite(p.x_prime)) fail_validation("border_symplectic: invalid x'");
      // X(1/x') = diag(x'^-1/2, x'^1/2, x'^1/2, x'^-1/2)
      const double rx = 1.0 / std::sqrt(p.x_prime);
      Matrix x = Matrix::Zero(4, 4);
      x(0, 0) = rx;
      x(1, 1) = 1.0 / rx;
      x(2, 2) = 1.0 / rx;
      x(3, 3) = rx;
      Eigen::Matrix2d bq;
      Eigen::Matrix2d bp;
      if (p.type == BorderType::I) {
        // R(-r) on q, R(r) on p
        const double ch = std::cosh(p.shape);
        const double sh = std::sinh(p.shape);
        bq << ch, -sh, -sh, ch;
        bp << ch, sh, sh, ch;
      } else {
        // Theta(-theta) on both
        const double c = std::cos(p.shape);
        const double s = std::sin(p.shape);
        bq << c, -s, s, c;
        bp = bq;
      }
      Matrix t = Matrix::Zero(4, 4);
      t.topLeftCorner(2, 2) = bq;
      t.bottomRightCorner(2, 2) = bp;
      return t * x;
    }
    case BorderType::III: {
      const double d = (ga * ga - 0.25) * (gb * gb - 0.25);
      Eigen::Matrix2d sq;
      if (p.shape == 0.0) {
        sq << std::pow(1.0 + d / (ga * ga), 0.25), 0.0,
            std::pow(d * d / (ga * ga * (gb * gb + d)), 0.25), std::pow(gb * gb / (gb * gb + d), 0.25);
      } else {
        sq << std::pow(ga * ga / (ga * ga + d), 0.25), std::pow(d * d / (gb * gb * (ga * ga + d)), 0.25),
            0.0, std::pow(1.0 + d / (gb * gb), 0.25);
      }
      return qp_symplectic(sq);
    }
    case BorderType::IV: {
      const double a2 = 4.0 * ga * ga;
      const double b2 = 4.0 * gb * gb;
      const double s1 = std::pow(a2 * (b2 + 1.0) / (a2 + 1.0), 0.25);
      const double s2 = std::pow((b2 + 1.0) / (b2 * (a2 + 1.0)), 0.25);
      Eigen::Matrix2d sq;
      sq << s1, s2, s1, -s2;
      return qp_symplectic(sq / std::sqrt(2.0));
    }
  }
  fail_validation("border_symplectic: unknown type");
}

ExponentialMatrix border_em(const BorderParams& p) {
  const Matrix s = border_symplectic(p);
  const double ma = em_eigenvalue(p.gamma_a);
  const double mb = em_eigenvalue(p.gamma_b);
  Vector mt(4);
  mt << ma, mb, ma, mb;
  const Matrix sinv = symplectic_inverse(s);
  Matrix m = sinv.transpose() * mt.asDiagonal() * sinv;
  m = 0.5 * (m + m.transpose());
  if (!m.allFinite() || max_abs(m) > 1e12) fail_guard("border_em: exponential matrix overflows at these parameters");
  return ExponentialMatrix(m);
}

std::array<double, 4> fold_em_standard_form(double m1, double ms2, double m3, double ms4) {
  const double sp = std::abs(ms2 + ms4);
  const double sm = std::abs(ms2 - ms4);
  return {m1, -0.5 * (sp + sm), m3, -0.5 * (sp - sm)};
}

double inner_objective(const std::array<double, 4>& al, const std::array<double, 4>& m, double x) {
  const double p = al[0] * m[0];
  const double q = al[2] * m[2];
  const double fa = p * x + q / x + 2.0 * al[1] * m[1];
  const double fb = p / x + q * x + 2.0 * al[3] * m[3];
  if (!(fa > 0.0) || !(fb > 0.0)) return std::nan("");
  return std::sqrt(fa * fb);
}

InnerMinState inner_minimize(const std::array<double, 4>& alpha_sf, const std::array<double, 4>& m_std) {
  for (double v : alpha_sf) {
    if (!std::isfinite(v)) fail_validation("inner_minimize: non-finite standard-form parameter");
  }
  for (double v : m_std) {
    if (!std::isfinite(v)) fail_validation("inner_minimize: non-finite EM parameter");
  }
  constexpr double kLo = -6.0;
  constexpr double kHi = 6.0;
  constexpr int kPoints = 49;
  auto f = [&](double lx) {
    const double v = inner_objective(alpha_sf, m_std, std::exp(lx));
    if (std::isnan(v)) {
      fail_guard("inner_minimize: factor under the square root is not positive at x = " + std::to_string(std::exp(lx)));
    }
    return v;
  };
  const detail::ScalarResult r = detail::grid_brent_minimize(f, kLo, kHi, kPoints, 50);
  InnerMinState st;
  st.alpha_sf = alpha_sf;
  st.m_std = m_std;
  st.x_opt = std::exp(r.x);
  st.half_trace = r.value;
  const double x = st.x_opt;
  const double fa = alpha_sf[0] * m_std[0] * x + alpha_sf[2] * m_std[2] / x + 2.0 * alpha_sf[1] * m_std[1];
  const double fb = alpha_sf[0] * m_std[0] / x + alpha_sf[2] * m_std[2] * x + 2.0 * alpha_sf[3] * m_std[3];
  st.y_opt = std::sqrt(fb / fa);
  return st;
}

}  // namespace cvree
