#include "tontine/presets.hpp"

#include <array>

#include "tontine/errors.hpp"

namespace tontine {

namespace {

const std::array<Preset, 4>& all_presets() {
  static const std::array<Preset, 4> presets = {{
      {"table1", {65.0, 88.72, 10.0}, 0.04,
       {0.5, 1.0, 1.5, 2.0, 4.0, 9.0}, {65.0, 80.0, 95.0}, {25}, 25},
      {"table2", {60.0, 87.25, 9.5}, 0.03,
       {0.5, 1.0, 1.5, 2.0, 3.0, 9.0}, {60.0}, {20, 100, 500, 1000, 5000}, 100},
      {"table3", {60.0, 87.25, 9.5}, 0.03,
       {0.5, 1.0, 2.0}, {30.0, 40.0, 50.0, 60.0, 70.0, 80.0}, {100}, 100},
      {"figure1", {65.0, 88.721, 10.0}, 0.04,
       {1.0}, {65.0}, {400}, 400},
  }};
  return presets;
}

}  // namespace

const Preset& preset(std::string_view name) {
  for (const Preset& p : all_presets())
    if (p.name == name) return p;
  throw invalid_parameter("unknown preset: " + std::string(name));
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : all_presets()) names.push_back(p.name);
  return names;
}

}  // namespace tontine
