#pragma once

// Gaussian relative entropy of entanglement for two-mode states.

#include "cvree/gaussian.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace cvree {

/// Parameters of a border (PPT-boundary) separable state of one of the four types.
struct BorderParams {
  BorderType type = BorderType::IV;
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double shape = 0.0;    // r for I, theta for II, kind (0 or 1) for III, unused for IV
  int branch = 0;        // I and II: 0 uses the root x' >= 1, 1 uses its reciprocal
  double x_prime = 1.0;  // derived from the border equality for I and II
};

/// Border constructions refuse symplectic eigenvalues within this distance of 1/2.
inline constexpr double kBorderGammaFloor = 1e-6;

/// Largest two-mode squeeze r for which a type I border state exists at (gamma_a, gamma_b).
double type_i_max_squeeze(double gamma_a, double gamma_b);

/// Solves the border equality for t = x'^2 + x'^-2 and returns the root x' >= 1.
double border_x_prime(BorderType type, double gamma_a, double gamma_b, double shape);

/// Validates the parameters and fills in x_prime.
BorderParams make_border_params(BorderType type, double gamma_a, double gamma_b, double shape = 0.0,
                                int branch = 0);

/// S with alpha_sigma = S diag(gamma_a, gamma_b, gamma_a, gamma_b) S^T.
Matrix border_symplectic(const BorderParams& p);
ExponentialMatrix border_em(const BorderParams& p);

/// y-eliminated local minimisation of 1/2 Tr(alpha_rho M_sigma) for standard-form inputs.
struct InnerMinState {
  std::array<double, 4> alpha_sf{};  // alpha_1..alpha_4 = a, c1, b, -c2
  std::array<double, 4> m_std{};     // M_1..M_4 after folding
  double x_opt = 1.0;
  double y_opt = 1.0;
  double half_trace = 0.0;  // minimised 1/2 Tr(alpha M)
};

/// (M1, Ms2, M3, Ms4) -> (M1, M2, M3, M4) with
/// M2 = -(|Ms2 + Ms4| + |Ms2 - Ms4|)/2, M4 = -(|Ms2 + Ms4| - |Ms2 - Ms4|)/2.
std::array<double, 4> fold_em_standard_form(double m1, double ms2, double m3, double ms4);

/// sqrt((a1 M1 x + a3 M3/x + 2 a2 M2)(a1 M1/x + a3 M3 x + 2 a4 M4)); NaN if a factor is not positive.
double inner_objective(const std::array<double, 4>& alpha_sf, const std::array<double, 4>& m_std, double x);

InnerMinState inner_minimize(const std::array<double, 4>& alpha_sf, const std::array<double, 4>& m_std);

struct GreeOptions {
  int starts = 32;
  std::uint64_t seed = 20060101;
  double tol = 1e-10;
  std::vector<BorderType> types{BorderType::I, BorderType::II, BorderType::III, BorderType::IV};
  bool spot_check = true;
};

struct FamilyMinimum {
  BorderType type = BorderType::I;
  double value = 0.0;  // +inf when no feasible candidate was found
  std::optional<BorderParams> params;
};

struct GreeDiagnostics {
  int starts = 0;
  long evaluations = 0;
  long iterations = 0;
  bool separable_input = false;
  double border_residual = 0.0;  // of the returned border state
  double value_check = 0.0;      // |value - relative_entropy(rho, best_em)|
  double x_opt = 1.0;
  double y_opt = 1.0;
  // Reduced (all cosines at +-1) objective minus a direct search over local operations.
  // Positive values mean the direct search found a lower value and set the flag.
  double spot_check_gap = 0.0;
  bool spot_check_flag = false;
  // Symmetric route only: the objective with the square root dropped.
  std::optional<double> alternative_reading_value;
};

struct GreeResult {
  double value = 0.0;  // nats
  std::optional<BorderType> best_type;
  std::optional<BorderParams> best_params;
  std::optional<ExponentialMatrix> best_em;
  std::array<FamilyMinimum, 4> per_type{};
  GreeDiagnostics diagnostics;
};

GreeResult gree(const CovarianceMatrix& rho, const GreeOptions& options = {});

/// Relative entropy of rho against the locally optimised border state with parameters p.
double border_candidate_value(const CovarianceMatrix& rho, const BorderParams& p);

/// -sum log(2 sinh(Mt_j/2)) + 1/2 sqrt[(m+kq)(m-kp) Ma^2 + (m-kq)(m+kp) Mb^2
///   + (m-kq)(m-kp) Ma Mb coth(Ma/2) coth(Mb/2) + (m+kq)(m+kp) Ma Mb tanh(Ma/2) tanh(Mb/2)]
double symmetric_objective(const SymmetricParams& p, double ma, double mb);
/// Border EM of the symmetric family at (Ma, Mb), scaled optimally for rho.
ExponentialMatrix symmetric_border_em(const SymmetricParams& p, double ma, double mb);

GreeResult gree_symmetric(const SymmetricParams& p, const GreeOptions& options = {});

/// -2 log(2 sinh(mu/2)) + mu/2 [(m-k) coth(mu/2) + (m+k) tanh(mu/2)]
double tmst_objective(double m, double k, double mu);
GreeResult gree_tmst(double m, double k);

}  // namespace cvree
