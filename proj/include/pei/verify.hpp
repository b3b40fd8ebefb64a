// Desk-scale verification suite: each check pits a closed-form result against
// the independent numerical oracles at a pinned tolerance. Shared by the
// `verify` CLI subcommand and the acceptance runner.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pei::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double margin = 0.0;  // distance to the tightest failing constraint
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 12345;
  // Replaces each check's primary agreement tolerance when set.
  std::optional<double> tol_override;
  // Check ids to run; empty means all.
  std::vector<int> only;
};

// Topic filters accepted by `verify --only`.
std::vector<int> checks_for_topic(const std::string& topic);

std::vector<CheckResult> run_acceptance_checks(const VerifyOptions& opts = {});

}  // namespace pei::verify
