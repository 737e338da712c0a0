#include "cvree/relent.hpp"

#include "cvree/error.hpp"

#include <cmath>
#include <string>

namespace cvree {

namespace {

double log_two_sinh_half(double mt) { return 0.5 * mt + std::log1p(-std::exp(-mt)); }

double self_term(const CovarianceMatrix& alpha_rho) { return -von_neumann_entropy(alpha_rho); }

}  // namespace

double log_normalization(const ExponentialMatrix& m_sigma) {
  double s = 0.0;
  for (double mt : symplectic_eigenvalues(m_sigma.matrix())) {
    if (!(mt > 0.0)) fail_guard("log_normalization: non-positive symplectic eigenvalue of M");
    s += log_two_sinh_half(mt);
  }
  return s;
}

double cross_term(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& m_sigma) {
  if (alpha_rho.modes() != m_sigma.modes()) fail_validation("cross_term: mode count mismatch");
  return -log_normalization(m_sigma) + 0.5 * (alpha_rho.matrix() * m_sigma.matrix()).trace();
}

RelEntResult relative_entropy(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& m_sigma) {
  if (alpha_rho.modes() != m_sigma.modes()) fail_validation("relative_entropy: mode count mismatch");
  RelEntResult r;
  r.self_term = self_term(alpha_rho);
  r.cross_term = cross_term(alpha_rho, m_sigma);
  r.value = r.self_term + r.cross_term;
  if (r.value < 0.0) {
    const double slack = 1e-10 * std::max(1.0, std::abs(r.cross_term));
    if (r.value < -slack) fail_guard("relative_entropy: negative value " + std::to_string(r.value));
    r.value = 0.0;
  }
  return r;
}

RelEntResult relative_entropy(const CovarianceMatrix& alpha_rho, const CovarianceMatrix& alpha_sigma) {
  if (alpha_rho.modes() != alpha_sigma.modes()) fail_validation("relative_entropy: mode count mismatch");
  return relative_entropy(alpha_rho, cm_to_em(alpha_sigma));
}

double displacement_penalty(const ExponentialMatrix& m_sigma, const Vector& z) {
  if (z.size() != m_sigma.matrix().rows()) fail_validation("displacement_penalty: dimension mismatch");
  if (!z.allFinite()) fail_validation("displacement_penalty: non-finite displacement");
  const Vector dz = delta_matrix(m_sigma.modes()) * z;
  return 0.5 * dz.dot(m_sigma.matrix() * dz);
}

}  // namespace cvree
