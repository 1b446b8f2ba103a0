#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmet {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelfCheckOptions {
  int n_max = 4;          // brute-force qubit cap, <= kMaxBruteQubits
  double rel_tol = 1e-8;  // relative tolerance for the oracle comparisons
  std::uint64_t seed = 20240811;
};

/// Runs the closed-form-vs-brute-force oracle suites over qcore, channel,
/// probes, bounds and allocator. Every entry reports pass/fail plus the
/// worst observed deviation.
std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& opts);

}  // namespace qmet
