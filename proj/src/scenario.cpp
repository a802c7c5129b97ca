#include "tontine/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "tontine/csv.hpp"
#include "tontine/pool_outcomes.hpp"
#include "tontine/products.hpp"
#include "tontine/welfare.hpp"

namespace tontine {

namespace {

using nlohmann::json;

const std::set<std::string> kProducts = {"flat", "natural", "optimal", "annuity"};
const std::set<std::string> kOutputs = {"payout_table", "fan", "welfare", "depletion"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw invalid_parameter("scenario." + path + ": " + what);
}

void expect_keys(const YAML::Node& node, const std::string& path,
                 const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }
}

double num_field(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail(path, "expected a number");
  }
}

int int_field(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail(path, "expected an integer");
  }
}

std::uint64_t uint_field(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    fail(path, "expected a nonnegative integer");
  }
}

std::string str_field(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<std::string>();
  } catch (const YAML::Exception&) {
    fail(path, "expected a string");
  }
}

}  // namespace

EconomicBasis Scenario::economic() const {
  EconomicBasis econ;
  econ.r = r;
  if (cap_age) econ.horizon = Horizon::capped(*cap_age - mortality.age);
  return econ;
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw invalid_parameter(std::string("scenario: malformed YAML: ") + e.what());
  }
  expect_keys(root, "", {"name", "mortality", "economic", "pools", "products", "outputs",
                         "step", "t_max", "seed", "fan"});

  Scenario s;
  if (!root["name"]) fail("name", "required");
  s.name = str_field(root["name"], "name");
  if (s.name.empty()) fail("name", "must be nonempty");

  if (!root["mortality"]) fail("mortality", "required");
  const auto mort = root["mortality"];
  expect_keys(mort, "mortality", {"age", "m", "b"});
  if (!mort["age"] || !mort["m"] || !mort["b"]) fail("mortality", "needs age, m, b");
  s.mortality.age = num_field(mort["age"], "mortality.age");
  s.mortality.m = num_field(mort["m"], "mortality.m");
  s.mortality.b = num_field(mort["b"], "mortality.b");
  try {
    GompertzLaw check(s.mortality);
  } catch (const invalid_parameter& e) {
    fail("mortality", e.what());
  }

  if (!root["economic"]) fail("economic", "required");
  const auto econ = root["economic"];
  expect_keys(econ, "economic", {"r", "cap_age"});
  if (!econ["r"]) fail("economic.r", "required");
  s.r = num_field(econ["r"], "economic.r");
  if (!(s.r > 0.0)) fail("economic.r", "must be > 0");
  if (econ["cap_age"]) {
    s.cap_age = num_field(econ["cap_age"], "economic.cap_age");
    if (!(*s.cap_age > s.mortality.age))
      fail("economic.cap_age", "must exceed the starting age");
  }

  if (!root["pools"] || !root["pools"].IsSequence() || root["pools"].size() == 0)
    fail("pools", "must be a nonempty list");
  s.pools.clear();
  for (std::size_t i = 0; i < root["pools"].size(); ++i) {
    const auto item = root["pools"][i];
    const std::string path = "pools[" + std::to_string(i) + "]";
    expect_keys(item, path, {"n", "gamma"});
    if (!item["n"] || !item["gamma"]) fail(path, "needs n and gamma");
    PoolSpec pool;
    pool.n = int_field(item["n"], path + ".n");
    pool.gamma = num_field(item["gamma"], path + ".gamma");
    if (pool.n < 1) fail(path + ".n", "must be >= 1");
    if (!(pool.gamma > 0.0)) fail(path + ".gamma", "must be > 0");
    s.pools.push_back(pool);
  }

  if (root["products"]) {
    if (!root["products"].IsSequence() || root["products"].size() == 0)
      fail("products", "must be a nonempty list");
    s.products.clear();
    for (const auto& item : root["products"]) {
      const auto name = str_field(item, "products");
      if (!kProducts.count(name)) fail("products", "unknown product '" + name + "'");
      s.products.push_back(name);
    }
  }
  if (root["outputs"]) {
    if (!root["outputs"].IsSequence() || root["outputs"].size() == 0)
      fail("outputs", "must be a nonempty list");
    s.outputs.clear();
    for (const auto& item : root["outputs"]) {
      const auto name = str_field(item, "outputs");
      if (!kOutputs.count(name)) fail("outputs", "unknown output '" + name + "'");
      s.outputs.push_back(name);
    }
  }

  if (root["step"]) s.step = num_field(root["step"], "step");
  if (!(s.step > 0.0)) fail("step", "must be > 0");
  if (root["t_max"]) s.t_max = num_field(root["t_max"], "t_max");
  if (!(s.t_max >= 0.0)) fail("t_max", "must be >= 0");
  if (root["seed"]) s.seed = uint_field(root["seed"], "seed");

  if (root["fan"]) {
    const auto fan = root["fan"];
    expect_keys(fan, "fan", {"levels", "t_max", "step", "paths"});
    if (fan["levels"]) {
      s.fan.levels.clear();
      for (const auto& lv : fan["levels"]) {
        const double q = num_field(lv, "fan.levels");
        if (!(q > 0.0) || !(q < 1.0)) fail("fan.levels", "levels must lie in (0, 1)");
        s.fan.levels.push_back(q);
      }
      if (s.fan.levels.empty()) fail("fan.levels", "must be nonempty");
    }
    if (fan["t_max"]) s.fan.t_max = num_field(fan["t_max"], "fan.t_max");
    if (fan["step"]) s.fan.step = num_field(fan["step"], "fan.step");
    if (!(s.fan.step > 0.0)) fail("fan.step", "must be > 0");
    if (fan["paths"]) s.fan.paths = uint_field(fan["paths"], "fan.paths");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_parameter("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_yaml(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "mortality" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "age" << YAML::Value << s.mortality.age
      << YAML::Key << "m" << YAML::Value << s.mortality.m
      << YAML::Key << "b" << YAML::Value << s.mortality.b << YAML::EndMap;
  out << YAML::Key << "economic" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "r" << YAML::Value << s.r;
  if (s.cap_age) out << YAML::Key << "cap_age" << YAML::Value << *s.cap_age;
  out << YAML::EndMap;
  out << YAML::Key << "pools" << YAML::Value << YAML::BeginSeq;
  for (const PoolSpec& p : s.pools)
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "n" << YAML::Value << p.n
        << YAML::Key << "gamma" << YAML::Value << p.gamma << YAML::EndMap;
  out << YAML::EndSeq;
  out << YAML::Key << "products" << YAML::Value << YAML::Flow << s.products;
  out << YAML::Key << "outputs" << YAML::Value << YAML::Flow << s.outputs;
  out << YAML::Key << "step" << YAML::Value << s.step;
  out << YAML::Key << "t_max" << YAML::Value << s.t_max;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "fan" << YAML::Value << YAML::BeginMap
      << YAML::Key << "levels" << YAML::Value << YAML::Flow << s.fan.levels
      << YAML::Key << "t_max" << YAML::Value << s.fan.t_max
      << YAML::Key << "step" << YAML::Value << s.fan.step
      << YAML::Key << "paths" << YAML::Value << s.fan.paths << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

namespace {

bool wants(const Scenario& s, const std::string& what) {
  for (const auto& x : s.outputs)
    if (x == what) return true;
  return false;
}

bool has_product(const Scenario& s, const std::string& what) {
  for (const auto& x : s.products)
    if (x == what) return true;
  return false;
}

// curves for one pool; flat/natural do not depend on the pool
std::vector<std::pair<std::string, PayoutCurve>> build_curves(const Scenario& s,
                                                              const GompertzLaw& law,
                                                              const EconomicBasis& econ,
                                                              const PoolSpec& pool) {
  std::vector<std::pair<std::string, PayoutCurve>> out;
  if (has_product(s, "flat")) out.emplace_back("flat", flat_tontine(econ));
  if (has_product(s, "natural")) out.emplace_back("natural", natural_tontine(law, econ));
  if (has_product(s, "optimal")) out.emplace_back("optimal", optimal_tontine(law, econ, pool));
  return out;
}

json report_to_json(const Scenario& s, const WelfareReport& rep, double c0) {
  json j;
  j["scenario"] = s.name;
  j["age"] = s.mortality.age;
  j["m"] = s.mortality.m;
  j["b"] = s.mortality.b;
  j["r"] = s.r;
  if (s.cap_age) j["cap_age"] = *s.cap_age;
  j["n"] = rep.pool.n;
  j["gamma"] = rep.pool.gamma;
  j["c0"] = c0;
  j["u_annuity"] = rep.u_annuity;
  j["u_loaded_annuity"] = rep.u_loaded_annuity;
  j["u_optimal_tontine"] = rep.u_optimal_tontine;
  j["u_natural_tontine"] =
      rep.u_natural_tontine ? json(*rep.u_natural_tontine) : json(nullptr);
  j["ce_ratio"] = rep.ce_ratio ? json(*rep.ce_ratio) : json(nullptr);
  if (!rep.divergence_note.empty()) j["divergence_note"] = rep.divergence_note;
  j["indifference_loading"] = rep.indifference_loading;
  j["indifference_loading_bp"] = rep.indifference_loading * 1e4;
  j["loading_bound"] = rep.loading_bound;
  j["loading_input"] = rep.loading_input;
  return j;
}

}  // namespace

ResultBundle run_scenario(const Scenario& s) {
  const GompertzLaw law(s.mortality);
  const EconomicBasis econ = s.economic();
  ResultBundle bundle;
  bundle.scenario_name = s.name;

  // flat and natural schedules do not depend on the pool; emit them once
  const auto for_each_curve = [&](auto&& emit) {
    if (has_product(s, "flat")) emit("flat", flat_tontine(econ), PoolSpec{0, 0.0});
    if (has_product(s, "natural"))
      emit("natural", natural_tontine(law, econ), PoolSpec{0, 0.0});
    if (has_product(s, "optimal"))
      for (const PoolSpec& pool : s.pools)
        emit("optimal", optimal_tontine(law, econ, pool), pool);
  };

  if (wants(s, "payout_table")) {
    csv::Table table({"scenario", "product", "n", "gamma", "t", "age", "survival", "rate",
                      "depleted"});
    for_each_curve([&](const std::string& product, const PayoutCurve& curve,
                       const PoolSpec& pool) {
      const bool pooled = pool.n > 0;
      for (const CurveSample& row : tabulate(curve, law, s.step, s.t_max))
        table.add_row({s.name, product, pooled ? std::to_string(pool.n) : "",
                       pooled ? csv::full(pool.gamma) : "", csv::full(row.t),
                       csv::full(s.mortality.age + row.t), csv::full(row.survival),
                       csv::full(row.rate), csv::full(row.depleted)});
    });
    bundle.artifacts.push_back({s.name + "_payout", Artifact::Type::csv, table.str()});
  }

  if (wants(s, "depletion")) {
    csv::Table table({"scenario", "product", "n", "gamma", "t", "delta"});
    for_each_curve([&](const std::string& product, const PayoutCurve& curve,
                       const PoolSpec& pool) {
      const bool pooled = pool.n > 0;
      for (double t = 0.0; t <= s.t_max + 1e-9; t += s.step)
        table.add_row({s.name, product, pooled ? std::to_string(pool.n) : "",
                       pooled ? csv::full(pool.gamma) : "", csv::full(t),
                       csv::full(depletion(curve, law, t))});
    });
    bundle.artifacts.push_back({s.name + "_depletion", Artifact::Type::csv, table.str()});
  }

  if (wants(s, "welfare")) {
    const double c0 = fair_annuity(law, econ).c0;
    json reports = json::array();
    for (const PoolSpec& pool : s.pools) {
      WelfareReport rep = welfare_report(law, econ, pool);
      rep.mortality = s.mortality;
      reports.push_back(report_to_json(s, rep, c0));
    }
    bundle.artifacts.push_back(
        {s.name + "_welfare", Artifact::Type::json, reports.dump(2) + "\n"});
  }

  if (wants(s, "fan")) {
    std::vector<double> times;
    for (double t = 0.0; t <= s.fan.t_max + 1e-9; t += s.fan.step) times.push_back(t);
    csv::Table table({"scenario", "product", "n", "gamma", "t", "level", "dividend",
                      "source"});
    for (const PoolSpec& pool : s.pools) {
      for (const auto& [product, curve] : build_curves(s, law, econ, pool)) {
        const PayoutFan fan = dividend_fan(curve, law, pool.n, s.fan.levels, times);
        for (std::size_t i = 0; i < fan.times.size(); ++i) {
          for (std::size_t j = 0; j < fan.levels.size(); ++j)
            table.add_row({s.name, product, std::to_string(pool.n), csv::full(pool.gamma),
                           csv::full(fan.times[i]), csv::full(fan.levels[j]),
                           csv::full(fan.quantiles[i][j]), "exact"});
          table.add_row({s.name, product, std::to_string(pool.n), csv::full(pool.gamma),
                         csv::full(fan.times[i]), "central", csv::full(fan.central[i]),
                         "exact"});
        }
        if (s.fan.paths > 0) {
          const CohortStats mc =
              simulate_cohort(curve, law, pool.n, s.fan.paths, s.seed, s.fan.levels, times);
          for (std::size_t i = 0; i < mc.times.size(); ++i) {
            for (std::size_t j = 0; j < mc.levels.size(); ++j)
              table.add_row({s.name, product, std::to_string(pool.n), csv::full(pool.gamma),
                             csv::full(mc.times[i]), csv::full(mc.levels[j]),
                             csv::full(mc.quantiles[i][j]), "mc"});
            table.add_row({s.name, product, std::to_string(pool.n), csv::full(pool.gamma),
                           csv::full(mc.times[i]), "central", csv::full(mc.mean[i]), "mc"});
          }
        }
      }
    }
    bundle.artifacts.push_back({s.name + "_fan", Artifact::Type::csv, table.str()});
  }
  return bundle;
}

}  // namespace tontine
