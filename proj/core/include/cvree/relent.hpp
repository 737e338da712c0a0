#pragma once

#include "cvree/gaussian.hpp"

namespace cvree {

struct RelEntResult {
  double value = 0;       // S(rho || sigma), nats
  double self_term = 0;   // Tr rho log rho
  double cross_term = 0;  // -Tr rho log sigma
};

/// log c = sum_j log(2 sinh(Mt_j / 2)) from the symplectic spectrum of M.
double log_normalization(const ExponentialMatrix& m_sigma);

/// -Tr rho log sigma = -log c + 1/2 Tr(alpha_rho M_sigma)
double cross_term(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& m_sigma);

/// Values in [-1e-10 max(1, |cross|), 0) are reported as 0; anything more
/// negative throws numerical_guard.
RelEntResult relative_entropy(const CovarianceMatrix& alpha_rho, const ExponentialMatrix& m_sigma);
RelEntResult relative_entropy(const CovarianceMatrix& alpha_rho, const CovarianceMatrix& alpha_sigma);

/// Extra relative entropy from displacing sigma by z: 1/2 (Delta z)^T M (Delta z).
double displacement_penalty(const ExponentialMatrix& m_sigma, const Vector& z);

}  // namespace cvree
