#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tontine/products.hpp"

namespace tontine {

// Discounted CRRA lifetime utilities and welfare comparisons for one
// (mortality, economic, pool) scenario. Utilities are negative for gamma > 1
// and positive for gamma < 1; they are compared directly, never by magnitude.
struct WelfareReport {
  double u_annuity = 0.0;
  double u_loaded_annuity = 0.0;
  double u_optimal_tontine = 0.0;
  std::optional<double> u_natural_tontine;  // diverges for gamma > 2, open horizon
  std::optional<double> ce_ratio;           // same divergence caveat
  std::string divergence_note;
  double indifference_loading = 0.0;
  double loading_bound = 0.0;

  // input echo
  MortalityBasis mortality;
  double rate = 0.0;
  std::optional<double> cap;
  PoolSpec pool;
  double loading_input = 0.0;
};

// Loaded life annuity paying (1 - delta) c0 for life; delta = 0 is the fair annuity.
double utility_annuity(const SurvivalLaw& law, const EconomicBasis& econ, double gamma,
                       double delta = 0.0);

double utility_optimal_tontine(const SurvivalLaw& law, const EconomicBasis& econ,
                               const PoolSpec& pool);

// Lifetime utility of an arbitrary budget-feasible payout curve, by exact
// binomial mixing inside the quadrature.
double utility_curve(const PayoutCurve& curve, const SurvivalLaw& law,
                     const EconomicBasis& econ, const PoolSpec& pool);

// One-time annuity fee fraction at which the loaded annuity and the optimal
// tontine give equal utility.
double indifference_loading(const SurvivalLaw& law, const EconomicBasis& econ,
                            const PoolSpec& pool);

// (1/n)(c0/r - 1); dominates the indifference loading for 1 < gamma <= 2
double loading_bound(const SurvivalLaw& law, const EconomicBasis& econ, const PoolSpec& pool);

// per-n rescaled loadings n * delta(n)
std::vector<std::pair<int, double>> loading_scaling(const SurvivalLaw& law,
                                                    const EconomicBasis& econ, double gamma,
                                                    std::span<const int> pool_sizes);

// n -> infinity limit of n * delta(n) for this horizon
double loading_scaling_limit(const SurvivalLaw& law, const EconomicBasis& econ, double gamma);

// Gamma >= 1: deposit in the natural tontine matching $1 in the gamma-optimal
// one. Exactly 1 at gamma = 1; gamma > 2 requires a capped horizon.
double certainty_equivalent_ratio(const SurvivalLaw& law, const EconomicBasis& econ,
                                  const PoolSpec& pool);

WelfareReport welfare_report(const SurvivalLaw& law, const EconomicBasis& econ,
                             const PoolSpec& pool,
                             std::optional<double> loading = std::nullopt);

}  // namespace tontine
