#pragma once

// Thin wrappers over GSL's simplex minimiser and Boost's Brent search.

#include <Eigen/Dense>

#include <functional>

namespace cvree::detail {

struct SimplexOptions {
  double initial_step = 0.5;
  double size_tol = 1e-8;   // simplex characteristic size
  double value_tol = 1e-10; // stop when best value changed less than this over a restart cycle
  int max_iterations = 4000;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Non-finite objective values are replaced by a large finite penalty.
SimplexResult simplex_minimize(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                               const SimplexOptions& opts = {});

struct ScalarResult {
  double x = 0;
  double value = 0;
  int evaluations = 0;
};

/// Brent's method on [lo, hi].
ScalarResult brent_minimize(const std::function<double(double)>& f, double lo, double hi, int bits = 40,
                            int max_iterations = 200);

/// Grid scan with `points` samples on [lo, hi] followed by Brent on the
/// bracket around the best sample.
ScalarResult grid_brent_minimize(const std::function<double(double)>& f, double lo, double hi, int points,
                                 int bits = 40);

}  // namespace cvree::detail
