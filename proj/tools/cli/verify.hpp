#pragma once

// Self-check suites run by `cvree verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace cvree::cli {

struct SuiteReport {
  std::string suite;
  int passed = 0;
  int failed = 0;
  double max_residual = 0.0;
  std::string residual_name;
  std::vector<std::string> failures;
};

struct VerifyOptions {
  int dim = 30;
  std::uint64_t seed = 1;
  int cases = 0;  // 0 keeps each suite's default count
};

/// roundtrip: CM -> EM -> CM on random states.
SuiteReport verify_roundtrip(const VerifyOptions& o);
/// oracle: Gaussian relative entropy against the truncated Fock computation.
SuiteReport verify_oracle(const VerifyOptions& o);
/// descent: monotone descent to rho from random starting states.
SuiteReport verify_descent(const VerifyOptions& o);

std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const VerifyOptions& o);

}  // namespace cvree::cli
