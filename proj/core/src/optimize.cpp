#include "optimize.hpp"

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>

namespace cvree::detail {

namespace {

constexpr double kPenalty = 1e100;

struct Closure {
  const std::function<double(const Eigen::VectorXd&)>* f;
  Eigen::VectorXd buf;
  int evaluations = 0;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* c = static_cast<Closure*>(params);
  for (Eigen::Index i = 0; i < c->buf.size(); ++i) c->buf[i] = gsl_vector_get(v, static_cast<std::size_t>(i));
  ++c->evaluations;
  const double y = (*c->f)(c->buf);
  return std::isfinite(y) ? std::min(y, kPenalty) : kPenalty;
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

void quiet_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace

SimplexResult simplex_minimize(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                               const SimplexOptions& opts) {
  quiet_gsl();
  const auto n = static_cast<std::size_t>(x0.size());
  Closure closure{&f, Eigen::VectorXd(x0.size()), 0};
  gsl_multimin_function fn{&trampoline, n, &closure};

  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));

  SimplexResult out;
  out.x = x0;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[static_cast<Eigen::Index>(i)]);

  // Restart from the best vertex until a full run no longer improves the value.
  for (int cycle = 0; cycle < 4 && out.iterations < opts.max_iterations; ++cycle) {
    gsl_vector_set_all(step.get(), opts.initial_step / (1 << cycle));
    if (gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) break;
    const double before = out.value;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && out.iterations < opts.max_iterations) {
      ++out.iterations;
      if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
      status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), opts.size_tol);
    }
    const double value = gsl_multimin_fminimizer_minimum(m.get());
    const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
    if (value <= out.value) {
      out.value = value;
      for (std::size_t i = 0; i < n; ++i) out.x[static_cast<Eigen::Index>(i)] = gsl_vector_get(best, i);
    }
    gsl_vector_memcpy(x.get(), best);
    out.converged = status == GSL_SUCCESS;
    if (std::isfinite(before) && std::abs(before - out.value) <= opts.value_tol) break;
  }
  out.evaluations = closure.evaluations;
  return out;
}

ScalarResult brent_minimize(const std::function<double(double)>& f, double lo, double hi, int bits,
                            int max_iterations) {
  int evaluations = 0;
  auto g = [&](double t) {
    ++evaluations;
    const double y = f(t);
    return std::isfinite(y) ? y : kPenalty;
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
  const auto [x, v] = boost::math::tools::brent_find_minima(g, lo, hi, bits, iters);
  return {x, v, evaluations};
}

ScalarResult grid_brent_minimize(const std::function<double(double)>& f, double lo, double hi, int points,
                                 int bits) {
  const double h = (hi - lo) / (points - 1);
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double v = f(lo + h * i);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = lo + h * std::max(best - 1, 0);
  const double b = lo + h * std::min(best + 1, points - 1);
  ScalarResult r = brent_minimize(f, a, b, bits);
  r.evaluations += points;
  if (!(r.value <= best_v)) {
    r.x = lo + h * best;
    r.value = best_v;
  }
  return r;
}

}  // namespace cvree::detail
