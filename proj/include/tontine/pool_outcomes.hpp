#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tontine/products.hpp"

namespace tontine {

// Distribution of the individual dividend n d(t) / N(t) over time, conditional
// on the individual being alive.
struct PayoutFan {
  std::vector<double> times;
  std::vector<double> levels;
  // quantiles[i][j]: dividend quantile at times[i] for levels[j]
  std::vector<std::vector<double>> quantiles;
  std::vector<double> central;  // E[n d / N | alive]
};

// Exact fan by binomial CDF inversion. The dividend is decreasing in the
// survivor count, so the q-quantile of the dividend uses the (1-q)-quantile
// of N.
PayoutFan dividend_fan(const PayoutCurve& curve, const SurvivalLaw& law, int n,
                       std::span<const double> levels, std::span<const double> times);

// Monte Carlo cross-check of the exact fan: iid companion lifetimes drawn
// from the law, dividends recorded for an observer who is alive throughout.
// Same statistics layout as PayoutFan plus the sample mean.
struct CohortStats {
  std::vector<double> times;
  std::vector<double> levels;
  std::vector<std::vector<double>> quantiles;
  std::vector<double> mean;
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
};

CohortStats simulate_cohort(const PayoutCurve& curve, const SurvivalLaw& law, int n,
                            std::uint64_t paths, std::uint64_t seed,
                            std::span<const double> levels, std::span<const double> times,
                            Exec exec = Exec::parallel);

}  // namespace tontine
