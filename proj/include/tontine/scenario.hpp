#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tontine/binomial.hpp"
#include "tontine/mortality.hpp"
#include "tontine/quadrature.hpp"

namespace tontine {

struct FanConfig {
  std::vector<double> levels = {0.1, 0.5, 0.9};
  double t_max = 35.0;
  double step = 1.0;
  std::uint64_t paths = 0;  // 0: exact fan only
};

// Declarative run description: one mortality/economic basis, a list of pools,
// product and output selections.
struct Scenario {
  std::string name;
  MortalityBasis mortality;
  double r = 0.04;
  std::optional<double> cap_age;
  std::vector<PoolSpec> pools;
  std::vector<std::string> products = {"optimal", "natural", "flat", "annuity"};
  std::vector<std::string> outputs = {"payout_table", "welfare"};
  double step = 1.0;
  double t_max = 35.0;
  std::uint64_t seed = 20240801;
  FanConfig fan;

  EconomicBasis economic() const;
};

// YAML parsing with strict key checking; errors carry the offending field path.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string to_yaml(const Scenario& s);

struct Artifact {
  enum class Type { csv, json };
  std::string name;  // file stem, e.g. "<scenario>_welfare"
  Type type = Type::csv;
  std::string content;
};

struct ResultBundle {
  std::string scenario_name;
  std::vector<Artifact> artifacts;
};

ResultBundle run_scenario(const Scenario& s);

}  // namespace tontine
