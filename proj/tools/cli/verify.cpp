#include "cli/verify.hpp"

#include "cli/sampling.hpp"

#include "cvree/descent.hpp"
#include "cvree/error.hpp"
#include "cvree/relent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvree::cli {

namespace {

void record(SuiteReport& r, bool ok, double residual, const std::string& what) {
  r.max_residual = std::max(r.max_residual, residual);
  if (ok) {
    ++r.passed;
  } else {
    ++r.failed;
    r.failures.push_back(what);
  }
}

}  // namespace

SuiteReport verify_roundtrip(const VerifyOptions& o) {
  SuiteReport r{"roundtrip", 0, 0, 0.0, "max |em_to_cm(cm_to_em(alpha)) - alpha|", {}};
  Rng rng(o.seed);
  const int cases = o.cases > 0 ? o.cases : 200;
  for (int k = 0; k < cases; ++k) {
    const int n = 1 + k % 3;
    const CovarianceMatrix a = random_cm(n, rng);
    try {
      const ExponentialMatrix m = cm_to_em(a);
      const double err = max_abs(em_to_cm(m).matrix() - a.matrix());
      const double comm = commutation_residual(m.matrix(), a.matrix());
      std::ostringstream what;
      what << "case " << k << ": roundtrip " << err << ", commutation " << comm;
      record(r, err <= 1e-8 && comm <= 1e-8, std::max(err, comm), what.str());
    } catch (const Error& e) {
      record(r, false, 0.0, "case " + std::to_string(k) + ": " + e.what());
    }
  }
  return r;
}

SuiteReport verify_oracle(const VerifyOptions& o) {
  SuiteReport r{"oracle", 0, 0, 0.0, "max |relent - fock relative entropy|", {}};
  Rng rng(o.seed);
  const int cases = o.cases > 0 ? o.cases : 10;
  for (int k = 0; k < cases; ++k) {
    const SqueezedPair p = random_squeezed_pair(rng, 1.5, 0.6, k % 3);
    try {
      const double g = relative_entropy(gaussian_state(p.rho), gaussian_state(p.sigma)).value;
      const FockEntropyResult f = fock_pair_relative_entropy(p.rho, p.sigma, o.dim);
      const double err = std::abs(g - f.value);
      std::ostringstream what;
      what << "case " << k << ": gaussian " << g << ", fock " << f.value;
      record(r, err <= 1e-3, err, what.str());
    } catch (const Error& e) {
      record(r, false, 0.0, "case " + std::to_string(k) + ": " + e.what());
    }
  }
  return r;
}

SuiteReport verify_descent(const VerifyOptions& o) {
  SuiteReport r{"descent", 0, 0, 0.0, "max terminal objective", {}};
  Rng rng(o.seed);
  const int cases = o.cases > 0 ? o.cases : 50;
  for (int k = 0; k < cases; ++k) {
    const int n = 1 + k % 3;
    const CovarianceMatrix rho = random_cm(n, rng, 0.55, 2.0);
    const CovarianceMatrix sigma = random_cm(n, rng, 0.55, 2.0);
    try {
      const DescentResult d = descend(rho, cm_to_em(sigma), DescentStop::at_rho);
      bool monotone = true;
      for (std::size_t i = 1; i < d.objectives.size(); ++i) {
        if (d.objectives[i] > d.objectives[i - 1] + 1e-12) monotone = false;
      }
      std::ostringstream what;
      what << "case " << k << ": converged " << d.converged << ", monotone " << monotone << ", objective "
           << d.state.objective << (d.message.empty() ? "" : ", " + d.message);
      record(r, d.converged && monotone, std::abs(d.state.objective), what.str());
    } catch (const Error& e) {
      record(r, false, 0.0, "case " + std::to_string(k) + ": " + e.what());
    }
  }
  return r;
}

std::vector<std::string> suite_names() { return {"roundtrip", "oracle", "descent"}; }

SuiteReport run_suite(const std::string& name, const VerifyOptions& o) {
  if (name == "roundtrip") return verify_roundtrip(o);
  if (name == "oracle") return verify_oracle(o);
  if (name == "descent") return verify_descent(o);
  fail_validation("verify: unknown suite '" + name + "'");
}

}  // namespace cvree::cli
