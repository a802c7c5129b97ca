#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tontine/presets.hpp"
#include "tontine/products.hpp"

using namespace tontine;

namespace {

const GompertzLaw& table1_law() {
  static const GompertzLaw law(preset("table1").mortality);
  return law;
}
const EconomicBasis kOpen{0.04, Horizon::infinite()};
const EconomicBasis kCapped{0.04, Horizon::capped(40.0)};

class ImmortalLaw final : public SurvivalLaw {
public:
  double log_survival(double) const override { return 0.0; }
  double hazard(double) const override { return 0.0; }
  double age() const override { return 65.0; }
};

}  // namespace

TEST_CASE("fair annuity rate") {
  const AnnuityQuote q = fair_annuity(table1_law(), kOpen);
  CHECK(q.c0 == doctest::Approx(0.0752).epsilon(7e-4));
  CHECK(q.c0 == doctest::Approx(0.075).epsilon(7e-3));  // "7.5% for life from 65"
  CHECK(q.loading == 0.0);
  CHECK(q.c_loaded == q.c0);
  CHECK(q.c0 > kOpen.r);

  const AnnuityQuote loaded = with_loading(q, 0.1);
  CHECK(loaded.c_loaded == doctest::Approx(0.9 * q.c0).epsilon(1e-15));
  CHECK_THROWS_AS(with_loading(q, 1.0), tontine::domain_error);

  const ImmortalLaw immortal;
  CHECK(fair_annuity(immortal, kOpen).c0 == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("flat tontine") {
  const PayoutCurve flat = flat_tontine(kOpen);
  CHECK(flat.kind() == CurveKind::flat);
  CHECK(flat.rate(0.0) == 0.04);
  CHECK(flat.rate(33.3) == 0.04);
  CHECK(flat.budget_residual() == 0.0);

  // capped rate r/(1-e^{-rT}) falls back to r as T grows
  const PayoutCurve capped = flat_tontine({0.03, Horizon::capped(30.0)});
  CHECK(capped.rate(1.0) == doctest::Approx(0.03 / -std::expm1(-0.9)).epsilon(1e-14));
  const PayoutCurve long_cap = flat_tontine({0.03, Horizon::capped(2000.0)});
  CHECK(long_cap.rate(1.0) == doctest::Approx(0.03).epsilon(1e-10));
  CHECK(capped.rate(31.0) == 0.0);  // beyond the cap

  const PayoutCurve perp = perpetuity_limit(kOpen);
  CHECK(perp.kind() == CurveKind::perpetuity_limit);
  CHECK(perp.rate(12.0) == 0.04);
}

TEST_CASE("natural tontine") {
  const PayoutCurve nat = natural_tontine(table1_law(), kOpen);
  const double c0 = fair_annuity(table1_law(), kOpen).c0;
  CHECK(nat.rate(0.0) == doctest::Approx(c0).epsilon(1e-14));
  CHECK(nat.rate(15.0) ==
        doctest::Approx(c0 * table1_law().survival(15.0)).epsilon(1e-14));
  CHECK(nat.rate(15.0) == doctest::Approx(0.0752 * 0.722).epsilon(2e-3));
  CHECK(nat.budget_residual() <= 1e-8);
}

TEST_CASE("optimal tontine reproduces the n=25 payout schedule") {
  struct Row {
    double gamma, at65, at80, at95;
  };
  // printed percent values for x=65, r=4%, m=88.72, b=10, n=25
  const Row rows[] = {
      {0.5, 7.565, 5.446, 1.200}, {1.0, 7.520, 5.435, 1.268},
      {1.5, 7.482, 5.428, 1.324}, {2.0, 7.447, 5.423, 1.374},
      {4.0, 7.324, 5.410, 1.541}, {9.0, 7.081, 5.394, 1.847},
  };
  for (const Row& row : rows) {
    const PayoutCurve c = optimal_tontine(table1_law(), kOpen, {25, row.gamma});
    CHECK(100.0 * c.rate(0.0) == doctest::Approx(row.at65).epsilon(0.0007));
    CHECK(std::abs(100.0 * c.rate(0.0) - row.at65) < 0.005);
    CHECK(std::abs(100.0 * c.rate(15.0) - row.at80) < 0.005);
    CHECK(std::abs(100.0 * c.rate(30.0) - row.at95) < 0.005);
  }
}

TEST_CASE("optimal tontine equals the natural one at gamma = 1") {
  const PayoutCurve opt = optimal_tontine(table1_law(), kOpen, {400, 1.0});
  const PayoutCurve nat = natural_tontine(table1_law(), kOpen);
  for (double t = 0.0; t <= 40.0; t += 2.5)
    CHECK(opt.rate(t) == doctest::Approx(nat.rate(t)).epsilon(1e-10));
  // near-1 gammas are snapped onto the exact branch
  const PayoutCurve snapped = optimal_tontine(table1_law(), kOpen, {400, 1.0 + 1e-9});
  CHECK(snapped.rate(10.0) == opt.rate(10.0));
}

TEST_CASE("optimal payout decreases and its starting level brackets c0") {
  const double c0 = fair_annuity(table1_law(), kOpen).c0;
  for (double g : {0.5, 1.0, 2.0, 4.0, 9.0}) {
    const PayoutCurve c = optimal_tontine(table1_law(), kOpen, {25, g});
    double prev = c.rate(0.0);
    for (double t = 1.0; t <= 55.0; t += 1.0) {
      const double cur = c.rate(t);
      CHECK(cur < prev);
      prev = cur;
    }
    // lower opening rate than the annuity iff gamma exceeds 1
    if (g > 1.0) CHECK(c.rate(0.0) < c0);
    if (g < 1.0) CHECK(c.rate(0.0) > c0);
    if (g == 1.0) CHECK(c.rate(0.0) == doctest::Approx(c0).epsilon(1e-13));
  }
}

TEST_CASE("budget residual stays within contract on both horizons") {
  for (const EconomicBasis& econ : {kOpen, kCapped}) {
    CHECK(flat_tontine(econ).budget_residual() <= 1e-8);
    CHECK(natural_tontine(table1_law(), econ).budget_residual() <= 1e-8);
    for (double g : {0.5, 1.0, 2.0, 9.0})
      CHECK(optimal_tontine(table1_law(), econ, {25, g}).budget_residual() <= 1e-8);
  }
}

TEST_CASE("depletion") {
  const PayoutCurve flat = flat_tontine(kOpen);
  CHECK(depletion(flat, table1_law(), 0.0) == 0.0);
  CHECK(depletion(flat, table1_law(), 10.0) ==
        doctest::Approx(-std::expm1(-0.4)).epsilon(1e-11));

  for (double g : {0.7, 1.0, 3.0}) {
    const PayoutCurve c = optimal_tontine(table1_law(), kOpen, {25, g});
    CHECK(depletion(c, table1_law(), 0.0) == 0.0);
    CHECK(depletion(c, table1_law(), 1e4) == doctest::Approx(1.0).epsilon(1e-8));
    // monotone in t
    CHECK(depletion(c, table1_law(), 10.0) < depletion(c, table1_law(), 20.0));
  }

  const PayoutCurve capped = optimal_tontine(table1_law(), kCapped, {25, 2.0});
  CHECK(depletion(capped, table1_law(), 40.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(depletion(capped, table1_law(), 80.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Euler-Lagrange residual identifies optimal curves") {
  const PoolSpec pool{10, 2.0};
  const PayoutCurve opt = optimal_tontine(table1_law(), kOpen, pool);
  CHECK(euler_lagrange_residual(opt, table1_law(), kOpen, pool) <= 1e-8);

  const PayoutCurve nat = natural_tontine(table1_law(), kOpen);
  CHECK(euler_lagrange_residual(nat, table1_law(), kOpen, pool) > 1e-2);

  const PayoutCurve flat = flat_tontine(kOpen);
  CHECK(euler_lagrange_residual(flat, table1_law(), kOpen, {10, 1.0}) > 1e-2);
}

TEST_CASE("discrete brute-force maximizer matches the closed-form curve") {
  // small capped case; the oracle knows nothing about beta^{1/gamma}
  const int nodes = 200;
  const auto discrete =
      oracles::discrete_optimal_curve(table1_law(), 0.04, 40.0, nodes, 10, 2.0);
  const PayoutCurve closed = optimal_tontine(table1_law(), kCapped, {10, 2.0});
  double worst = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double want = closed.rate(discrete.times[i]);
    worst = std::max(worst, std::abs(discrete.rates[i] - want) / want);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("tabulate emits the serialization grid") {
  const PayoutCurve nat = natural_tontine(table1_law(), kOpen);
  const auto rows = tabulate(nat, table1_law(), 5.0, 30.0);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].t == 0.0);
  CHECK(rows[0].survival == 1.0);
  CHECK(rows[0].depleted == 0.0);
  CHECK(rows[3].t == doctest::Approx(15.0));
  CHECK(rows[3].rate == doctest::Approx(nat.rate(15.0)));
  CHECK(rows[6].depleted > rows[3].depleted);
}

TEST_CASE("depletion ordering in gamma (uncapped and capped spot checks)") {
  const GompertzLaw& law = table1_law();
  const PayoutCurve g2 = optimal_tontine(law, kOpen, {100, 2.0});
  const PayoutCurve g1 = optimal_tontine(law, kOpen, {100, 1.0});
  for (double t : {1.0, 10.0, 30.0, 50.0})
    CHECK(depletion(g2, law, t) < depletion(g1, law, t));

  const PayoutCurve c2 = optimal_tontine(law, kCapped, {10'000, 2.0});
  const PayoutCurve c15 = optimal_tontine(law, kCapped, {10'000, 1.5});
  for (double t : {2.0, 20.0, 38.0})
    CHECK(depletion(c2, law, t) < depletion(c15, law, t));
}
