#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tontine/presets.hpp"
#include "tontine/welfare.hpp"

using namespace tontine;

namespace {

const GompertzLaw& table2_law() {
  static const GompertzLaw law(preset("table2").mortality);
  return law;
}
const EconomicBasis kOpen{0.03, Horizon::infinite()};

double c0_table2() {
  static const double c0 = fair_annuity(table2_law(), kOpen).c0;
  return c0;
}

}  // namespace

TEST_CASE("annuity utility closed forms") {
  const double c0 = c0_table2();
  CHECK(utility_annuity(table2_law(), kOpen, 2.0) ==
        doctest::Approx(-1.0 / (c0 * c0)).epsilon(1e-12));
  CHECK(utility_annuity(table2_law(), kOpen, 1.0) ==
        doctest::Approx(std::log(c0) / c0).epsilon(1e-12));

  // strictly decreasing in the loading
  for (double g : {0.5, 1.0, 3.0}) {
    double prev = utility_annuity(table2_law(), kOpen, g, 0.0);
    for (double delta : {0.05, 0.2, 0.5, 0.9}) {
      const double cur = utility_annuity(table2_law(), kOpen, g, delta);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(utility_annuity(table2_law(), kOpen, 2.0, 1.0), tontine::domain_error);
  CHECK_THROWS_AS(utility_annuity(table2_law(), kOpen, 2.0, -0.1), tontine::domain_error);
}

TEST_CASE("sign conventions") {
  CHECK(utility_annuity(table2_law(), kOpen, 0.5) > 0.0);
  CHECK(utility_annuity(table2_law(), kOpen, 2.0) < 0.0);
  CHECK(utility_optimal_tontine(table2_law(), kOpen, {50, 0.5}) > 0.0);
  CHECK(utility_optimal_tontine(table2_law(), kOpen, {50, 2.0}) < 0.0);
}

TEST_CASE("optimal tontine utility sits strictly below the fair annuity") {
  // both branches, including the one-person pool (which wastes the
  // post-death residual and is therefore also strictly worse)
  for (int n : {1, 2, 20, 400, 5000})
    for (double g : {0.5, 1.0, 2.0, 9.0})
      CHECK(utility_optimal_tontine(table2_law(), kOpen, {n, g}) <
            utility_annuity(table2_law(), kOpen, g));
}

TEST_CASE("closed-form optimal utility equals the mixed-curve integral") {
  const PoolSpec pool{10, 2.0};
  const PayoutCurve opt = optimal_tontine(table2_law(), kOpen, pool);
  const double closed = utility_optimal_tontine(table2_law(), kOpen, pool);
  const double mixed = utility_curve(opt, table2_law(), kOpen, pool);
  CHECK(closed == doctest::Approx(mixed).epsilon(1e-8));

  // independent check: dense trapezoid over the enumerated binomial mixture
  const double oracle = oracles::trapezoid_discounted(
      table2_law(), kOpen.r,
      [&](double p) {
        if (p <= 0.0) return 0.0;
        const double d = opt.rate_from_log_survival(std::log(p));
        return p * static_cast<double>(oracles::enumerate_expectation(
                       pool.n, p,
                       [&](int live) {
                         const double c = pool.n * d / live;
                         return powl(c, 1.0L - 2.0L) / (1.0L - 2.0L);
                       }));
      },
      85.0, 400'001);
  CHECK(closed == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("gamma = 1 utility branch against enumeration") {
  const PoolSpec pool{10, 1.0};
  const PayoutCurve opt = optimal_tontine(table2_law(), kOpen, pool);
  const double closed = utility_optimal_tontine(table2_law(), kOpen, pool);
  const double via_curve = utility_curve(opt, table2_law(), kOpen, pool);
  CHECK(closed == doctest::Approx(via_curve).epsilon(1e-9));
}

TEST_CASE("curve utility ordering at fixed gamma") {
  const PoolSpec pool{400, 1.0};
  const GompertzLaw law(preset("table1").mortality);
  const EconomicBasis econ{0.04, Horizon::infinite()};
  const double u_opt = utility_curve(optimal_tontine(law, econ, pool), law, econ, pool);
  const double u_nat = utility_curve(natural_tontine(law, econ), law, econ, pool);
  const double u_flat = utility_curve(flat_tontine(econ), law, econ, pool);
  CHECK(u_flat < u_nat);
  CHECK(u_nat == doctest::Approx(u_opt).epsilon(1e-10));  // natural optimal at gamma 1

  const PoolSpec pool2{400, 2.0};
  const double v_opt = utility_curve(optimal_tontine(law, econ, pool2), law, econ, pool2);
  const double v_nat = utility_curve(natural_tontine(law, econ), law, econ, pool2);
  const double v_flat = utility_curve(flat_tontine(econ), law, econ, pool2);
  CHECK(v_flat < v_nat);
  CHECK(v_nat < v_opt);
}

TEST_CASE("natural-tontine utility diverges for gamma above 2 on the open horizon") {
  const PayoutCurve nat = natural_tontine(table2_law(), kOpen);
  CHECK_THROWS_AS(utility_curve(nat, table2_law(), kOpen, {100, 2.5}), divergence_error);
  // capped horizon is fine
  const EconomicBasis capped{0.03, Horizon::capped(40.0)};
  const PayoutCurve nat_c = natural_tontine(table2_law(), capped);
  CHECK(std::isfinite(utility_curve(nat_c, table2_law(), capped, {100, 4.0})));
  // flat curves never diverge
  CHECK(std::isfinite(utility_curve(flat_tontine(kOpen), table2_law(), kOpen, {100, 4.0})));
}

TEST_CASE("indifference loading reproduces printed basis points") {
  // x=60, r=3%, m=87.25, b=9.5
  const double bp_20_1 = 1e4 * indifference_loading(table2_law(), kOpen, {20, 1.0});
  CHECK(bp_20_1 == doctest::Approx(129.8).epsilon(0.005));
  const double bp_5000_2 = 1e4 * indifference_loading(table2_law(), kOpen, {5000, 2.0});
  CHECK(bp_5000_2 == doctest::Approx(1.18).epsilon(0.02));

  // high-precision frozen values from an independent 40-digit evaluation
  CHECK(bp_20_1 == doctest::Approx(129.899).epsilon(1e-4));
  CHECK(1e4 * indifference_loading(table2_law(), kOpen, {100, 0.5}) ==
        doctest::Approx(14.57677474).epsilon(1e-6));
}

TEST_CASE("loading equals the utility-equality root") {
  for (double g : {0.5, 1.0, 2.0, 9.0}) {
    const PoolSpec pool{50, g};
    const double closed = indifference_loading(table2_law(), kOpen, pool);
    const double u_target = utility_optimal_tontine(table2_law(), kOpen, pool);
    const double root = oracles::bisect(
        [&](double delta) {
          return utility_annuity(table2_law(), kOpen, g, delta) - u_target;
        },
        0.0, 0.999);
    CHECK(closed == doctest::Approx(root).epsilon(1e-9));
  }
}

TEST_CASE("one-person pool still pays a positive loading") {
  // a lone subscriber funds payments in perpetuity but only collects while
  // alive, so the fair annuity strictly dominates
  const double delta = indifference_loading(table2_law(), kOpen, {1, 2.0});
  CHECK(delta > 0.0);
  CHECK(delta < 1.0);
}

TEST_CASE("loading monotone in n and gamma") {
  for (double g : {0.5, 1.0, 2.0}) {
    double prev = 1.0;
    for (int n : {20, 100, 500, 1000, 5000}) {
      const double delta = indifference_loading(table2_law(), kOpen, {n, g});
      CHECK(delta < prev);
      prev = delta;
    }
  }
  for (int n : {20, 500}) {
    double prev = 0.0;
    for (double g : {0.5, 1.0, 1.5, 2.0, 3.0, 9.0}) {
      const double delta = indifference_loading(table2_law(), kOpen, {n, g});
      CHECK(delta > prev);
      prev = delta;
    }
  }
}

TEST_CASE("loading bound") {
  for (int n : {20, 100, 1000}) {
    CHECK(loading_bound(table2_law(), kOpen, {n, 2.0}) > 0.0);
    for (double g : {1.5, 2.0})
      CHECK(indifference_loading(table2_law(), kOpen, {n, g}) <
            loading_bound(table2_law(), kOpen, {n, g}));
  }
}

TEST_CASE("loading scaling and its limit (x = 50 basis)") {
  const GompertzLaw law50({50.0, 87.25, 9.5});
  const EconomicBasis econ{0.03, Horizon::infinite()};
  CHECK(loading_scaling_limit(law50, econ, 2.0) == doctest::Approx(0.6593).epsilon(8e-4));

  const int ns[] = {10, 100, 1000};
  const auto scaled = loading_scaling(law50, econ, 2.0, ns);
  REQUIRE(scaled.size() == 3);
  CHECK(scaled[0].second == doctest::Approx(0.2858).epsilon(2e-3));
  CHECK(scaled[1].second == doctest::Approx(0.3377).epsilon(2e-3));
  CHECK(scaled[2].second == doctest::Approx(0.3671).epsilon(2e-3));

  // capped at age 100
  const EconomicBasis capped{0.03, Horizon::capped(50.0)};
  const int n100[] = {100};
  CHECK(loading_scaling(law50, capped, 2.0, n100)[0].second ==
        doctest::Approx(0.2855).epsilon(2e-3));
  CHECK(loading_scaling_limit(law50, capped, 2.0) == doctest::Approx(0.2897).epsilon(2e-3));

  CHECK_THROWS_AS(loading_scaling(law50, econ, 2.0, std::span<const int>{}),
                  invalid_parameter);
}

TEST_CASE("certainty equivalent ratio") {
  for (int n : {2, 100, 1000})
    CHECK(certainty_equivalent_ratio(table2_law(), kOpen, {n, 1.0}) == 1.0);

  // frozen from the independent 40-digit evaluation of the same formulas
  CHECK(certainty_equivalent_ratio(table2_law(), kOpen, {100, 2.0}) ==
        doctest::Approx(1.005320043).epsilon(1e-8));

  CHECK(certainty_equivalent_ratio(table2_law(), kOpen, {100, 0.5}) >= 1.0);
  CHECK_THROWS_AS(certainty_equivalent_ratio(table2_law(), kOpen, {100, 2.5}),
                  divergence_error);

  // capped-age comparisons for high gamma
  const GompertzLaw law60 = table2_law();
  const EconomicBasis cap100{0.03, Horizon::capped(40.0)};
  CHECK(certainty_equivalent_ratio(law60, cap100, {50, 4.0}) ==
        doctest::Approx(1.0032).epsilon(3e-5));
  CHECK(certainty_equivalent_ratio(law60, cap100, {300, 10.0}) ==
        doctest::Approx(1.0037).epsilon(3e-5));
  const EconomicBasis cap110{0.03, Horizon::capped(50.0)};
  CHECK(certainty_equivalent_ratio(law60, cap110, {1400, 4.0}) ==
        doctest::Approx(1.0032).epsilon(6e-5));

  // monotone in age at fixed n and gamma = 2
  double prev = 1.0;
  for (double age : {30.0, 40.0, 50.0, 60.0, 70.0, 80.0}) {
    const GompertzLaw law({age, 87.25, 9.5});
    const double ce = certainty_equivalent_ratio(law, kOpen, {100, 2.0});
    CHECK(ce > prev);
    prev = ce;
  }
}

TEST_CASE("welfare report bundles the pieces coherently") {
  const WelfareReport rep = welfare_report(table2_law(), kOpen, {100, 2.0});
  CHECK(rep.u_optimal_tontine < rep.u_annuity);
  REQUIRE(rep.u_natural_tontine.has_value());
  CHECK(*rep.u_natural_tontine < rep.u_optimal_tontine);
  REQUIRE(rep.ce_ratio.has_value());
  CHECK(*rep.ce_ratio > 1.0);
  // default loading is the indifference loading, so the loaded annuity
  // matches the optimal tontine
  CHECK(rep.u_loaded_annuity == doctest::Approx(rep.u_optimal_tontine).epsilon(1e-9));
  CHECK(rep.indifference_loading < rep.loading_bound);

  const WelfareReport diverged = welfare_report(table2_law(), kOpen, {100, 4.0});
  CHECK(!diverged.ce_ratio.has_value());
  CHECK(!diverged.u_natural_tontine.has_value());
  CHECK(!diverged.divergence_note.empty());
  CHECK(std::isfinite(diverged.u_optimal_tontine));
}
