// Command-line front end: table reproduction, fan/depletion/welfare exports,
// scenario runs, and the invariant suite.

#include <CLI11.hpp>

#include <cfenv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tontine/csv.hpp"
#include "tontine/pool_outcomes.hpp"
#include "tontine/presets.hpp"
#include "tontine/products.hpp"
#include "tontine/scenario.hpp"
#include "tontine/validation.hpp"
#include "tontine/welfare.hpp"

namespace {

using nlohmann::json;
using namespace tontine;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitAccuracy = 4;

struct TableData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string emit(const TableData& t, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json obj;
      for (std::size_t i = 0; i < t.header.size(); ++i) {
        const std::string& cell = row[i];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end && *end == '\0')
          obj[t.header[i]] = v;
        else
          obj[t.header[i]] = cell;
      }
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }
  csv::Table table(t.header);
  for (const auto& row : t.rows) table.add_row(row);
  return table.str();
}

// half-even rounding at the table's printed precision
std::string bp_cell(double bp) {
  const int old = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const int decimals = bp >= 10.0 ? 1 : 2;
  const double scale = decimals == 1 ? 10.0 : 100.0;
  const double rounded = std::nearbyint(bp * scale) / scale;
  std::fesetround(old);
  return csv::fixed(rounded, decimals);
}

void write_output(const std::string& content, const std::string& out_path,
                  const std::string& default_name) {
  std::string target = out_path;
  if (target.empty()) {
    if (const char* dir = std::getenv("TONTINE_OUT_DIR")) {
      std::filesystem::create_directories(dir);
      target = std::string(dir) + "/" + default_name;
    }
  }
  if (target.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw invalid_parameter("cannot open output file '" + target + "'");
  out << content;
  std::cerr << "wrote " << target << "\n";
}

struct BasisOpts {
  std::string preset_name;
  std::optional<double> age, r, m, b, cap_age;

  void attach(CLI::App* cmd, const std::string& default_preset) {
    preset_name = default_preset;
    cmd->add_option("--basis", preset_name, "named parameter preset")
        ->check(CLI::IsMember(preset_names()));
    cmd->add_option("--age", age, "starting age x (years)");
    cmd->add_option("--r", r, "risk-free / discount rate (per year)");
    cmd->add_option("--m", m, "Gompertz modal age m (years)");
    cmd->add_option("--b", b, "Gompertz dispersion b (years)");
    cmd->add_option("--cap-age", cap_age, "cap payments at this age");
  }

  MortalityBasis mortality() const {
    MortalityBasis basis = preset(preset_name).mortality;
    if (age) basis.age = *age;
    if (m) basis.m = *m;
    if (b) basis.b = *b;
    return basis;
  }

  EconomicBasis economic() const {
    EconomicBasis econ;
    econ.r = r.value_or(preset(preset_name).r);
    if (cap_age) {
      const double T = *cap_age - mortality().age;
      econ.horizon = Horizon::capped(T);
    }
    return econ;
  }
};

// ---- payout-table ----------------------------------------------------------

int cmd_payout_table(const BasisOpts& basis, std::vector<double> gammas,
                     std::vector<double> ages, int n, const std::string& out,
                     const std::string& format) {
  if (gammas.empty()) gammas = preset(basis.preset_name).gammas;
  if (ages.empty()) ages = preset(basis.preset_name).ages;
  const MortalityBasis mort = basis.mortality();
  const GompertzLaw law(mort);
  const EconomicBasis econ = basis.economic();

  TableData t;
  t.header = {"gamma"};
  for (double a : ages) t.header.push_back("payout_pct_age" + csv::fixed(a, 0));
  for (double a : ages) t.header.push_back("payout_raw_age" + csv::fixed(a, 0));

  for (double g : gammas) {
    const PayoutCurve curve = optimal_tontine(law, econ, {n, g});
    std::vector<std::string> row = {csv::full(g)};
    std::vector<double> vals;
    for (double a : ages) vals.push_back(curve.rate(a - mort.age));
    for (double v : vals) row.push_back(csv::fixed(100.0 * v, 3));
    for (double v : vals) row.push_back(csv::full(v));
    t.rows.push_back(row);
  }
  // survival footer
  std::vector<std::string> footer = {"survival"};
  std::vector<double> survs;
  for (double a : ages) survs.push_back(law.survival(a - mort.age));
  for (double v : survs) footer.push_back(csv::fixed(100.0 * v, 1));
  for (double v : survs) footer.push_back(csv::full(v));
  t.rows.push_back(footer);

  write_output(emit(t, format), out, "payout_table." + format);
  return 0;
}

// ---- loading-table ---------------------------------------------------------

int cmd_loading_table(const BasisOpts& basis, std::vector<double> gammas,
                      std::vector<int> ns, bool report_bound, const std::string& out,
                      const std::string& format) {
  if (gammas.empty()) gammas = preset(basis.preset_name).gammas;
  if (ns.empty()) ns = preset(basis.preset_name).pool_sizes;
  const GompertzLaw law(basis.mortality());
  const EconomicBasis econ = basis.economic();

  TableData t;
  t.header = {"gamma"};
  for (int n : ns) t.header.push_back("loading_bp_n" + std::to_string(n));
  for (int n : ns) t.header.push_back("loading_raw_n" + std::to_string(n));
  if (report_bound)
    for (int n : ns) t.header.push_back("bound_bp_n" + std::to_string(n));

  for (double g : gammas) {
    std::vector<std::string> row = {csv::full(g)};
    std::vector<double> deltas;
    for (int n : ns) deltas.push_back(indifference_loading(law, econ, {n, g}));
    for (double d : deltas) row.push_back(bp_cell(d * 1e4));
    for (double d : deltas) row.push_back(csv::full(d));
    if (report_bound)
      for (int n : ns) row.push_back(csv::full(loading_bound(law, econ, {n, g}) * 1e4));
    t.rows.push_back(row);
  }
  write_output(emit(t, format), out, "loading_table." + format);
  return 0;
}

// ---- ce-table --------------------------------------------------------------

int cmd_ce_table(const BasisOpts& basis, std::vector<double> gammas,
                 std::vector<double> ages, int n, const std::string& out,
                 const std::string& format) {
  if (gammas.empty()) gammas = preset("table3").gammas;
  if (ages.empty()) ages = preset("table3").ages;
  for (double g : gammas)
    if (g > 2.0 && !basis.cap_age)
      throw divergence_error(
          "gamma > 2 requires --cap-age (natural-tontine utility diverges)");

  TableData t;
  t.header = {"age"};
  for (double g : gammas) t.header.push_back("ce_gamma" + csv::full(g));
  for (double g : gammas) t.header.push_back("ce_raw_gamma" + csv::full(g));

  for (double a : ages) {
    MortalityBasis mort = basis.mortality();
    mort.age = a;
    const GompertzLaw law(mort);
    EconomicBasis econ = basis.economic();
    if (basis.cap_age) econ.horizon = Horizon::capped(*basis.cap_age - a);
    std::vector<std::string> row = {csv::fixed(a, 0)};
    std::vector<double> vals;
    for (double g : gammas) vals.push_back(certainty_equivalent_ratio(law, econ, {n, g}));
    for (double v : vals) row.push_back(csv::fixed(v, 6));
    for (double v : vals) row.push_back(csv::full(v));
    t.rows.push_back(row);
  }
  write_output(emit(t, format), out, "ce_table." + format);
  return 0;
}

// ---- fan -------------------------------------------------------------------

int cmd_fan(const BasisOpts& basis, const std::string& product, double gamma, int n,
            std::vector<double> levels, double t_max, double step, std::uint64_t paths,
            std::uint64_t seed, const std::string& out, const std::string& format) {
  const GompertzLaw law(basis.mortality());
  const EconomicBasis econ = basis.economic();
  if (levels.empty()) levels = {0.1, 0.5, 0.9};

  PayoutCurve curve = flat_tontine(econ);
  if (product == "natural") curve = natural_tontine(law, econ);
  else if (product == "optimal") curve = optimal_tontine(law, econ, {n, gamma});
  else if (product != "flat") throw domain_error("unknown product '" + product + "'");

  std::vector<double> times;
  for (double t = 0.0; t <= t_max + 1e-9; t += step) times.push_back(t);

  TableData t;
  t.header = {"t", "age", "level", "dividend", "source"};
  const PayoutFan fan = dividend_fan(curve, law, n, levels, times);
  const double age0 = basis.mortality().age;
  for (std::size_t i = 0; i < fan.times.size(); ++i) {
    for (std::size_t j = 0; j < levels.size(); ++j)
      t.rows.push_back({csv::full(fan.times[i]), csv::full(age0 + fan.times[i]),
                        csv::full(levels[j]), csv::full(fan.quantiles[i][j]), "exact"});
    t.rows.push_back({csv::full(fan.times[i]), csv::full(age0 + fan.times[i]), "central",
                      csv::full(fan.central[i]), "exact"});
  }
  if (paths > 0) {
    const CohortStats mc = simulate_cohort(curve, law, n, paths, seed, levels, times);
    for (std::size_t i = 0; i < mc.times.size(); ++i) {
      for (std::size_t j = 0; j < levels.size(); ++j)
        t.rows.push_back({csv::full(mc.times[i]), csv::full(age0 + mc.times[i]),
                          csv::full(levels[j]), csv::full(mc.quantiles[i][j]), "mc"});
      t.rows.push_back({csv::full(mc.times[i]), csv::full(age0 + mc.times[i]), "central",
                        csv::full(mc.mean[i]), "mc"});
    }
  }
  write_output(emit(t, format), out, "fan." + format);
  return 0;
}

// ---- depletion -------------------------------------------------------------

int cmd_depletion(const BasisOpts& basis, std::vector<double> gammas, int n, double t_max,
                  double step, const std::string& out, const std::string& format) {
  const GompertzLaw law(basis.mortality());
  const EconomicBasis econ = basis.economic();
  if (gammas.empty()) gammas = {1.0, 2.0};

  TableData t;
  t.header = {"t", "gamma", "delta"};
  for (double g : gammas) {
    const PayoutCurve curve = optimal_tontine(law, econ, {n, g});
    for (double tt = 0.0; tt <= t_max + 1e-9; tt += step)
      t.rows.push_back({csv::full(tt), csv::full(g), csv::full(depletion(curve, law, tt))});
  }
  write_output(emit(t, format), out, "depletion." + format);
  return 0;
}

// ---- welfare ---------------------------------------------------------------

int cmd_welfare(const BasisOpts& basis, double gamma, int n, std::optional<double> loading,
                const std::string& out, const std::string& format) {
  const MortalityBasis mort = basis.mortality();
  const GompertzLaw law(mort);
  const EconomicBasis econ = basis.economic();
  WelfareReport rep = welfare_report(law, econ, {n, gamma}, loading);
  rep.mortality = mort;

  json j;
  j["age"] = mort.age;
  j["m"] = mort.m;
  j["b"] = mort.b;
  j["r"] = econ.r;
  if (basis.cap_age) j["cap_age"] = *basis.cap_age;
  j["n"] = n;
  j["gamma"] = gamma;
  j["c0"] = fair_annuity(law, econ).c0;
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

  if (format == "csv") {
    TableData t;
    for (auto& [key, value] : j.items()) {
      t.header.push_back(key);
    }
    std::vector<std::string> row;
    for (auto& [key, value] : j.items()) {
      if (value.is_number())
        row.push_back(csv::full(value.get<double>()));
      else if (value.is_string())
        row.push_back(value.get<std::string>());
      else
        row.push_back(value.dump());
    }
    t.rows.push_back(row);
    write_output(emit(t, "csv"), out, "welfare.csv");
  } else {
    write_output(j.dump(2) + "\n", out, "welfare.json");
  }
  return 0;
}

// ---- validate / run --------------------------------------------------------

int cmd_validate() {
  int failures = 0;
  for (const CheckResult& res : run_validation()) {
    std::cout << (res.passed ? "[ ok ] " : "[FAIL] ") << res.name;
    if (!res.detail.empty()) std::cout << " (" << res.detail << ")";
    std::cout << "\n";
    if (!res.passed) ++failures;
  }
  std::cout << (failures ? "validation FAILED" : "validation passed") << "\n";
  return failures ? 1 : 0;
}

int cmd_run(const std::string& path, std::string out_dir) {
  const Scenario s = load_scenario(path);
  const ResultBundle bundle = run_scenario(s);
  if (out_dir.empty()) {
    if (const char* dir = std::getenv("TONTINE_OUT_DIR")) out_dir = dir;
    else out_dir = ".";
  }
  std::filesystem::create_directories(out_dir);
  for (const Artifact& a : bundle.artifacts) {
    const std::string ext = a.type == Artifact::Type::csv ? ".csv" : ".json";
    const std::string file = out_dir + "/" + a.name + ext;
    std::ofstream out(file, std::ios::binary);
    if (!out) throw invalid_parameter("cannot open output file '" + file + "'");
    out << a.content;
    std::cout << file << "\n";
  }
  return 0;
}

void error_record(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tontine payout design engine: optimal/natural/flat tontine schedules, "
               "annuity pricing, and welfare comparisons"};
  app.require_subcommand(1);
  std::string out, format = "csv";

  // payout-table
  auto* payout = app.add_subcommand("payout-table", "optimal payout rates by gamma and age");
  BasisOpts payout_basis;
  payout_basis.attach(payout, "table1");
  std::vector<double> payout_gammas, payout_ages;
  int payout_n = 25;
  payout->add_option("--gamma", payout_gammas, "risk aversion values (repeatable)");
  payout->add_option("--ages", payout_ages, "age columns")->delimiter(',');
  payout->add_option("--n", payout_n, "pool size");

  // loading-table
  auto* loading = app.add_subcommand("loading-table", "indifference loadings in basis points");
  BasisOpts loading_basis;
  loading_basis.attach(loading, "table2");
  std::vector<double> loading_gammas;
  std::vector<int> loading_ns;
  bool report_bound = false;
  loading->add_option("--gamma", loading_gammas, "risk aversion values (repeatable)");
  loading->add_option("--n", loading_ns, "pool sizes (repeatable)");
  loading->add_flag("--report-bound", report_bound, "append the (1/n)(c0/r - 1) bound");

  // ce-table
  auto* ce = app.add_subcommand("ce-table", "natural vs optimal certainty-equivalent ratios");
  BasisOpts ce_basis;
  ce_basis.attach(ce, "table3");
  std::vector<double> ce_gammas, ce_ages;
  int ce_n = 100;
  ce->add_option("--gamma", ce_gammas, "risk aversion values (repeatable)");
  ce->add_option("--ages", ce_ages, "starting ages (rows)")->delimiter(',');
  ce->add_option("--n", ce_n, "pool size");

  // fan
  auto* fan = app.add_subcommand("fan", "dividend percentile fan over time");
  BasisOpts fan_basis;
  fan_basis.attach(fan, "figure1");
  std::string fan_product = "flat";
  double fan_gamma = 1.0, fan_tmax = 35.0, fan_step = 1.0;
  int fan_n = 400;
  std::vector<double> fan_levels;
  std::uint64_t fan_paths = 0, fan_seed = 20240801;
  fan->add_option("--product", fan_product, "flat | natural | optimal");
  fan->add_option("--gamma", fan_gamma, "risk aversion for the optimal product");
  fan->add_option("--n", fan_n, "pool size");
  fan->add_option("--levels", fan_levels, "percentile levels in (0,1)")->delimiter(',');
  fan->add_option("--t-max", fan_tmax, "last time on the grid (years)");
  fan->add_option("--step", fan_step, "grid step (years)");
  fan->add_option("--paths", fan_paths, "Monte Carlo paths (0: exact fan only)");
  fan->add_option("--seed", fan_seed, "Monte Carlo seed");

  // depletion
  auto* depl = app.add_subcommand("depletion", "cumulative discounted payout through time");
  BasisOpts depl_basis;
  depl_basis.attach(depl, "table1");
  std::vector<double> depl_gammas;
  int depl_n = 100;
  double depl_tmax = 60.0, depl_step = 1.0;
  depl->add_option("--gamma", depl_gammas, "risk aversion values (repeatable)");
  depl->add_option("--n", depl_n, "pool size");
  depl->add_option("--t-max", depl_tmax, "last time on the grid (years)");
  depl->add_option("--step", depl_step, "grid step (years)");

  // welfare
  auto* welf = app.add_subcommand("welfare", "utilities, indifference loading, CE ratio");
  BasisOpts welf_basis;
  welf_basis.attach(welf, "table2");
  double welf_gamma = 1.0;
  int welf_n = 100;
  std::optional<double> welf_loading;
  welf->add_option("--gamma", welf_gamma, "risk aversion");
  welf->add_option("--n", welf_n, "pool size");
  welf->add_option("--loading", welf_loading, "annuity loading (default: indifference)");

  // validate / run
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  auto* run = app.add_subcommand("run", "execute a scenario file");
  std::string run_path, run_out;
  run->add_option("scenario", run_path, "scenario YAML path")->required();
  run->add_option("--out", run_out, "output directory");

  for (CLI::App* sub : {payout, loading, ce, fan, depl, welf}) {
    sub->add_option("--out", out, "output file (default: stdout or $TONTINE_OUT_DIR)");
    sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
    if (payout->parsed())
      return cmd_payout_table(payout_basis, payout_gammas, payout_ages, payout_n, out, format);
    if (loading->parsed())
      return cmd_loading_table(loading_basis, loading_gammas, loading_ns, report_bound, out,
                               format);
    if (ce->parsed()) return cmd_ce_table(ce_basis, ce_gammas, ce_ages, ce_n, out, format);
    if (fan->parsed())
      return cmd_fan(fan_basis, fan_product, fan_gamma, fan_n, fan_levels, fan_tmax, fan_step,
                     fan_paths, fan_seed, out, format);
    if (depl->parsed())
      return cmd_depletion(depl_basis, depl_gammas, depl_n, depl_tmax, depl_step, out, format);
    if (welf->parsed())
      return cmd_welfare(welf_basis, welf_gamma, welf_n, welf_loading, out, format);
    if (validate->parsed()) return cmd_validate();
    if (run->parsed()) return cmd_run(run_path, run_out);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("usage", e.what());
    return kExitUsage;
  } catch (const divergence_error& e) {
    error_record("divergence", e.what());
    return kExitAccuracy;
  } catch (const accuracy_error& e) {
    error_record("accuracy", e.what());
    return kExitAccuracy;
  } catch (const invalid_parameter& e) {
    error_record("domain", e.what());
    return kExitDomain;
  } catch (const domain_error& e) {
    error_record("domain", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    error_record("internal", e.what());
    return 1;
  }
}
