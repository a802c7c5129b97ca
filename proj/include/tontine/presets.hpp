#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tontine/mortality.hpp"

namespace tontine {

// Built-in parameter sets behind the CLI defaults, selectable by name.
struct Preset {
  std::string name;
  MortalityBasis mortality;
  double r = 0.04;
  std::vector<double> gammas;
  std::vector<double> ages;     // payout-table / ce-table age columns
  std::vector<int> pool_sizes;  // loading-table columns
  int n = 100;                  // default single pool size
};

// known names: table1, table2, table3, figure1
const Preset& preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace tontine
