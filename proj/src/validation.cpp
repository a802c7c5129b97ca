#include "tontine/validation.hpp"

#include <cmath>
#include <sstream>

#include "tontine/pool_outcomes.hpp"
#include "tontine/presets.hpp"
#include "tontine/products.hpp"
#include "tontine/welfare.hpp"

namespace tontine {

namespace {

struct Suite {
  std::vector<CheckResult> results;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    results.push_back({name, ok, detail});
  }

  template <class F>
  void guarded(const std::string& name, F&& body) {
    try {
      body(*this, name);
    } catch (const std::exception& e) {
      check(name, false, std::string("exception: ") + e.what());
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_validation() {
  Suite suite;

  const GompertzLaw law1(preset("table1").mortality);
  const GompertzLaw law2(preset("table2").mortality);
  const EconomicBasis econ1{0.04, Horizon::infinite()};
  const EconomicBasis econ2{0.03, Horizon::infinite()};
  const EconomicBasis econ1c{0.04, Horizon::capped(40.0)};

  suite.guarded("survival.roundtrip", [&](Suite& s, const std::string& name) {
    double worst = 0.0;
    for (double p : {1.0, 0.9, 0.5, 0.1, 1e-3, 1e-6}) {
      const double t = law1.time_for_survival(p);
      worst = std::max(worst, std::abs(law1.survival(t) - p) / p);
    }
    s.check(name, worst < 1e-10, "max rel " + fmt(worst));
  });

  suite.guarded("survival.monotone", [&](Suite& s, const std::string& name) {
    bool ok = true;
    double prev = law1.log_survival(0.0);
    for (double t = 0.5; t <= 60.0; t += 0.5) {
      const double cur = law1.log_survival(t);
      ok = ok && cur < prev;
      prev = cur;
    }
    s.check(name, ok && law1.log_survival(0.0) == 0.0);
  });

  suite.guarded("survival.hazard_integral", [&](Suite& s, const std::string& name) {
    // closed form vs composite Simpson on the hazard
    double worst = 0.0;
    for (double t : {5.0, 20.0, 45.0, 60.0}) {
      const int steps = 4000;
      const double h = t / steps;
      long double acc = law1.hazard(0.0) + law1.hazard(t);
      for (int i = 1; i < steps; ++i)
        acc += law1.hazard(i * h) * (i % 2 ? 4.0 : 2.0);
      const double integral = static_cast<double>(acc * h / 3.0L);
      worst = std::max(worst,
                       std::abs(-integral - law1.log_survival(t)) / std::abs(integral));
    }
    s.check(name, worst < 1e-8, "max rel " + fmt(worst));
  });

  suite.guarded("binomial.theta_at_one", [&](Suite& s, const std::string& name) {
    bool ok = true;
    for (int n : {1, 2, 25, 400})
      for (double g : {0.5, 1.0, 2.0, 9.0}) ok = ok && binomial::theta(n, g, 1.0) == 1.0;
    s.check(name, ok);
  });

  suite.guarded("binomial.closed_forms", [&](Suite& s, const std::string& name) {
    double worst = 0.0;
    for (int n : {2, 5, 25, 400})
      for (double p : {0.05, 0.3, 0.7, 0.95}) {
        const double b2 = p * (1.0 + (n - 1) * p) / n;
        const double b3 = p * (1.0 + 3.0 * (n - 1) * p + (n - 1.0) * (n - 2.0) * p * p) / (n * n);
        worst = std::max(worst, std::abs(binomial::beta(n, 2.0, p) - b2) / b2);
        worst = std::max(worst, std::abs(binomial::beta(n, 3.0, p) - b3) / b3);
        worst = std::max(worst, std::abs(binomial::beta(n, 1.0, p) - p) / p);
      }
    s.check(name, worst < 1e-13, "max rel " + fmt(worst));
  });

  suite.guarded("binomial.derivative_fd", [&](Suite& s, const std::string& name) {
    double worst = 0.0;
    for (int n : {4, 25})
      for (double g : {0.5, 2.0, 5.0})
        for (double p : {0.2, 0.6, 0.9}) {
          const double h = 1e-6;
          const double fd = (binomial::beta(n, g, p + h) - binomial::beta(n, g, p - h)) / (2 * h);
          const double an = binomial::beta_derivative(n, g, p);
          worst = std::max(worst, std::abs(an - fd) / std::abs(fd));
        }
    s.check(name, worst < 1e-6, "max rel " + fmt(worst));
  });

  suite.guarded("binomial.moment_bounds", [&](Suite& s, const std::string& name) {
    bool ok = true;
    for (int n : {2, 10, 100})
      for (double p : {0.1, 0.5, 0.9}) {
        ok = ok && binomial::beta(n, 0.5, p) < std::pow(p, 0.5);
        ok = ok && binomial::beta(n, 3.0, p) > std::pow(p, 3.0);
        const double er = binomial::expected_reciprocal(n, p);
        // the gap (1-p)^n / p drops below one ulp for large n
        ok = ok && (n * std::log1p(-p) > -60.0 ? er < 1.0 / p : er <= 1.0 / p);
        ok = ok && binomial::expected_log_ratio(n, p) + std::log(n) > std::log(n * p);
      }
    s.check(name, ok);
  });

  suite.guarded("quadrature.perpetuity", [&](Suite& s, const std::string& name) {
    const double v = discounted_integral(econ1, law1, [](double) { return 1.0; });
    s.check(name, std::abs(v - 25.0) < 1e-9, fmt(v));
  });

  suite.guarded("products.c0_above_r", [&](Suite& s, const std::string& name) {
    const double c1 = fair_annuity(law1, econ1).c0;
    const double c2 = fair_annuity(law2, econ2).c0;
    s.check(name, c1 > econ1.r && c2 > econ2.r, fmt(c1) + ", " + fmt(c2));
  });

  suite.guarded("products.budget", [&](Suite& s, const std::string& name) {
    double worst = 0.0;
    for (const EconomicBasis& econ : {econ1, econ1c}) {
      worst = std::max(worst, flat_tontine(econ).budget_residual());
      worst = std::max(worst, natural_tontine(law1, econ).budget_residual());
      for (double g : {0.5, 1.0, 2.0, 9.0})
        worst = std::max(worst, optimal_tontine(law1, econ, {25, g}).budget_residual());
    }
    s.check(name, worst <= 1e-8, "max residual " + fmt(worst));
  });

  suite.guarded("products.optimal_decreasing", [&](Suite& s, const std::string& name) {
    bool ok = true;
    for (double g : {0.5, 2.0, 9.0}) {
      const PayoutCurve c = optimal_tontine(law1, econ1, {25, g});
      double prev = c.rate(0.0);
      for (double t = 1.0; t <= 40.0; t += 1.0) {
        const double cur = c.rate(t);
        ok = ok && cur < prev;
        prev = cur;
      }
    }
    s.check(name, ok);
  });

  suite.guarded("products.euler_lagrange", [&](Suite& s, const std::string& name) {
    const PoolSpec pool{25, 2.0};
    const double r_opt =
        euler_lagrange_residual(optimal_tontine(law1, econ1, pool), law1, econ1, pool);
    const double r_nat =
        euler_lagrange_residual(natural_tontine(law1, econ1), law1, econ1, pool);
    s.check(name, r_opt <= 1e-8 && r_nat > 1e-3,
            "optimal " + fmt(r_opt) + ", natural " + fmt(r_nat));
  });

  suite.guarded("products.initial_rate_order", [&](Suite& s, const std::string& name) {
    const double c0 = fair_annuity(law1, econ1).c0;
    const double lo = optimal_tontine(law1, econ1, {25, 2.0}).rate(0.0);
    const double hi = optimal_tontine(law1, econ1, {25, 0.5}).rate(0.0);
    const double eq = optimal_tontine(law1, econ1, {25, 1.0}).rate(0.0);
    s.check(name, lo < c0 && hi > c0 && std::abs(eq - c0) < 1e-12);
  });

  suite.guarded("welfare.tontine_below_annuity", [&](Suite& s, const std::string& name) {
    bool ok = true;
    for (int n : {2, 20, 400})
      for (double g : {0.5, 1.0, 2.0, 9.0})
        ok = ok && utility_optimal_tontine(law2, econ2, {n, g}) <
                       utility_annuity(law2, econ2, g);
    s.check(name, ok);
  });

  suite.guarded("welfare.loading_bound", [&](Suite& s, const std::string& name) {
    bool ok = true;
    for (int n : {20, 100, 1000})
      for (double g : {1.5, 2.0})
        ok = ok && indifference_loading(law2, econ2, {n, g}) <
                       loading_bound(law2, econ2, {n, g});
    s.check(name, ok);
  });

  suite.guarded("welfare.ce_ratio", [&](Suite& s, const std::string& name) {
    const double at_one = certainty_equivalent_ratio(law2, econ2, {100, 1.0});
    const double at_two = certainty_equivalent_ratio(law2, econ2, {100, 2.0});
    s.check(name, at_one == 1.0 && at_two > 1.0, fmt(at_two));
  });

  suite.guarded("fan.at_inception", [&](Suite& s, const std::string& name) {
    const PayoutCurve flat = flat_tontine(econ1);
    const double levels[] = {0.1, 0.5, 0.9};
    const double times[] = {0.0, 10.0};
    const PayoutFan fan = dividend_fan(flat, law1, 400, levels, times);
    bool ok = true;
    for (double q : fan.quantiles[0]) ok = ok && q == flat.rate(0.0);
    s.check(name, ok);
  });

  suite.guarded("simulation.determinism", [&](Suite& s, const std::string& name) {
    const PayoutCurve flat = flat_tontine(econ1);
    const double levels[] = {0.5};
    const double times[] = {0.0, 15.0, 30.0};
    const CohortStats a = simulate_cohort(flat, law1, 50, 2000, 7, levels, times);
    const CohortStats b = simulate_cohort(flat, law1, 50, 2000, 7, levels, times,
                                          Exec::serial);
    bool ok = true;
    for (std::size_t i = 0; i < a.mean.size(); ++i)
      ok = ok && a.mean[i] == b.mean[i] && a.quantiles[i] == b.quantiles[i];
    s.check(name, ok);
  });

  return suite.results;
}

}  // namespace tontine
