#include "cli/recipes.hpp"

#include "cli/document.hpp"

#include "cvree/error.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace cvree::cli {

namespace {

CovarianceMatrix apply(const Matrix& s, double ga, double gb) {
  Vector d(4);
  d << ga, gb, ga, gb;
  return CovarianceMatrix(s * d.asDiagonal() * s.transpose());
}

double border_p(double ga, double gb) { return (2.0 * ga * ga - 0.5) * (2.0 * gb * gb - 0.5); }

ScanRow evaluate(const ScanSettings& s, double t_a, double t_b) {
  ScanRow row;
  row.t_a = t_a;
  row.t_b = t_b;
  row.per_type.fill(std::nan(""));
  row.value = std::nan("");
  row.original_ratio = std::nan("");
  row.minimizer_ratio = std::nan("");
  try {
    row.gamma_a = gamma_from_t(t_a);
    row.gamma_b = gamma_from_t(t_b);
    if (s.recipe == Recipe::fig2) {
      row.shape = 0.5 * std::asin(s.sin_2theta);
    } else {
      row.x = s.x;
    }
    const CovarianceMatrix rho = s.recipe == Recipe::fig2
                                     ? type_ii_state(row.gamma_a, row.gamma_b, s.sin_2theta, s.x_offset, &row.x)
                                     : type_i_state(row.gamma_a, row.gamma_b, s.x, s.sinh_offset, &row.shape);
    if (is_separable(rho).separable) {
      row.status = "separable";
      return row;
    }
    const GreeResult g = gree(rho, s.gree);
    row.value = g.value;
    row.best_type = g.best_type ? std::string(to_string(*g.best_type)) : "";
    for (int k = 0; k < 4; ++k) row.per_type[k] = g.per_type[k].value;
    if (s.recipe == Recipe::fig3) {
      const StandardForm orig = standard_form(rho);
      row.original_ratio = classification_ratio(orig.a, orig.b, orig.c1, orig.c2);
      if (!g.best_em) {
        row.status = "no_minimizer";
        return row;
      }
      const StandardForm best = standard_form(em_to_cm(*g.best_em));
      row.minimizer_ratio = classification_ratio(best.a, best.b, best.c1, best.c2);
    }
  } catch (const Error& e) {
    row.status = std::string("infeasible:") + to_string(e.kind());
  }
  return row;
}

std::string csv_num(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

std::optional<Recipe> parse_recipe(const std::string& name) {
  if (name == "fig1") return Recipe::fig1;
  if (name == "fig2") return Recipe::fig2;
  if (name == "fig3") return Recipe::fig3;
  return std::nullopt;
}

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::fig1: return "fig1";
    case Recipe::fig2: return "fig2";
    case Recipe::fig3: return "fig3";
  }
  return "unknown";
}

double gamma_from_t(double t) {
  if (!(t > 0.0 && t < 1.0)) fail_validation("scan: (2 gamma - 1)/(2 gamma + 1) must lie in (0, 1)");
  return 0.5 * (1.0 + t) / (1.0 - t);
}

CovarianceMatrix type_i_state(double gamma_a, double gamma_b, double x, double sinh_offset, double* r_out) {
  if (!(x > 0.0)) fail_validation("type_i_state: x must be positive");
  const double t = x * x + 1.0 / (x * x);
  const double sinh_b = std::sqrt(border_p(gamma_a, gamma_b) / (t * gamma_a * gamma_b + gamma_a * gamma_a + gamma_b * gamma_b));
  const double r = 0.5 * std::asinh(sinh_b + sinh_offset);
  if (r_out != nullptr) *r_out = r;
  const BorderParams p{BorderType::I, gamma_a, gamma_b, r, 0, x};
  return apply(border_symplectic(p), gamma_a, gamma_b);
}

CovarianceMatrix type_ii_state(double gamma_a, double gamma_b, double sin_2theta, double x_offset, double* x_out) {
  if (!(sin_2theta > 0.0 && sin_2theta <= 1.0)) fail_validation("type_ii_state: sin 2theta must lie in (0, 1]");
  const double theta = 0.5 * std::asin(sin_2theta);
  const double xb = border_x_prime(BorderType::II, gamma_a, gamma_b, theta);
  const double x = xb + x_offset;
  if (x_out != nullptr) *x_out = x;
  const BorderParams p{BorderType::II, gamma_a, gamma_b, theta, 0, x};
  return apply(border_symplectic(p), gamma_a, gamma_b);
}

std::vector<ScanRow> run_scan(const ScanSettings& s) {
  if (s.points < 0) fail_validation("scan: points must be non-negative");
  if (s.points > 1 && !(s.hi > s.lo)) fail_validation("scan: need lo < hi");
  std::vector<std::pair<double, double>> grid;
  const std::vector<double> tbs = s.recipe == Recipe::fig3 ? s.t_b_list : std::vector<double>{s.t_b};
  for (double tb : tbs) {
    for (int i = 0; i < s.points; ++i) {
      const double ta = s.points == 1 ? s.lo : s.lo + (s.hi - s.lo) * i / (s.points - 1);
      grid.emplace_back(ta, tb);
    }
  }
  std::vector<ScanRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) rows[i] = evaluate(s, grid[i].first, grid[i].second);
  };
  const int jobs = std::max(1, s.jobs);
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string scan_csv(const ScanSettings& s, const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "# recipe: " << to_string(s.recipe) << '\n';
  os << "# abscissa t_a = (2 gamma_a - 1)/(2 gamma_a + 1), " << s.points << " points on [" << format_double(s.lo)
     << ", " << format_double(s.hi) << "]\n";
  switch (s.recipe) {
    case Recipe::fig1:
      os << "# type I input: sinh(2r) = sinh(2r_border) + " << format_double(s.sinh_offset)
         << ", x = " << format_double(s.x) << ", t_b = " << format_double(s.t_b) << '\n';
      break;
    case Recipe::fig2:
      os << "# type II input: sin(2theta) = " << format_double(s.sin_2theta) << ", x = x_border + "
         << format_double(s.x_offset) << ", t_b = " << format_double(s.t_b) << '\n';
      break;
    case Recipe::fig3:
      os << "# type I input as fig1 (sinh offset " << format_double(s.sinh_offset) << ", x = " << format_double(s.x)
         << ") for each t_b in the list\n";
      break;
  }
  os << "# values in nats; per-type columns are the minimum relative entropy over each border family\n";
  os << "# ratio columns: (a/b + b/a)/(c1/c2 + c2/c1) of the input and of the minimising border state\n";
  os << "# status: ok, separable (input not entangled), infeasible:<error kind>\n";
  os << "t_a,t_b,gamma_a,gamma_b,shape,x,status,value,best_type";
  if (s.recipe == Recipe::fig3) {
    os << ",original_ratio,minimizer_ratio\n";
  } else {
    os << ",type_I,type_II,type_III,type_IV\n";
  }
  for (const auto& r : rows) {
    os << csv_num(r.t_a) << ',' << csv_num(r.t_b) << ',' << csv_num(r.gamma_a) << ',' << csv_num(r.gamma_b) << ','
       << csv_num(r.shape) << ',' << csv_num(r.x) << ',' << r.status << ',' << csv_num(r.value) << ',' << r.best_type;
    if (s.recipe == Recipe::fig3) {
      os << ',' << csv_num(r.original_ratio) << ',' << csv_num(r.minimizer_ratio);
    } else {
      for (double v : r.per_type) os << ',' << csv_num(v);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cvree::cli
