#pragma once

#include <string>
#include <vector>

namespace tontine {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast end-to-end invariant sweep over the built-in bases: survival model
// identities, binomial moment bounds, budget constraints, optimality
// conditions, welfare orderings. Used by the `validate` subcommand.
std::vector<CheckResult> run_validation();

}  // namespace tontine
