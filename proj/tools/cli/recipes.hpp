#pragma once

// Parameter scans behind the three figure recipes.

#include "cvree/gree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cvree::cli {

enum class Recipe { fig1, fig2, fig3 };
std::optional<Recipe> parse_recipe(const std::string& name);
std::string to_string(Recipe r);

/// The abscissa is t_A = (2 gamma_A - 1) / (2 gamma_A + 1), sampled evenly on
/// [lo, hi]; mode B is fixed through t_B in the same way.
struct ScanSettings {
  Recipe recipe = Recipe::fig1;
  int points = 40;
  double lo = 0.05;
  double hi = 0.95;
  double t_b = 0.5;                                   // fig1, fig2
  std::vector<double> t_b_list{0.2, 0.4, 0.6, 0.8};  // fig3
  double sinh_offset = 5.0;                           // fig1, fig3: sinh 2r = sinh 2r_border + offset
  double x = 1.1;                                     // fig1, fig3
  double sin_2theta = 0.5;                            // fig2
  double x_offset = 1.5;                              // fig2: x = x_border + offset
  GreeOptions gree;
  int jobs = 1;
};

double gamma_from_t(double t);

/// Type I state: [R(-r) on q, R(r) on p] X(1/x) applied to diag(gamma_a, gamma_b, gamma_a, gamma_b)
/// with sinh 2r = sinh 2r_border + offset. Returns r through `r_out` when given.
CovarianceMatrix type_i_state(double gamma_a, double gamma_b, double x, double sinh_offset, double* r_out = nullptr);
/// Type II state: [Theta(-theta) on q and p] X(1/x) with x = x_border + offset.
CovarianceMatrix type_ii_state(double gamma_a, double gamma_b, double sin_2theta, double x_offset,
                               double* x_out = nullptr);

struct ScanRow {
  double t_a = 0.0;
  double t_b = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double shape = 0.0;  // r (fig1, fig3) or theta (fig2)
  double x = 0.0;
  std::string status = "ok";
  double value = 0.0;
  std::string best_type;
  std::array<double, 4> per_type{};
  double original_ratio = 0.0;
  double minimizer_ratio = 0.0;
};

std::vector<ScanRow> run_scan(const ScanSettings& s);
std::string scan_csv(const ScanSettings& s, const std::vector<ScanRow>& rows);

}  // namespace cvree::cli
