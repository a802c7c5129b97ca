#include "tontine/pool_outcomes.hpp"

#include <algorithm>
#include <cmath>

namespace tontine {

namespace {

void check_fan_args(int n, std::span<const double> levels, std::span<const double> times) {
  if (n < 1) throw invalid_parameter("pool size n must be >= 1");
  if (times.empty()) throw domain_error("time grid must be nonempty");
  if (levels.empty()) throw domain_error("level list must be nonempty");
  for (double q : levels)
    if (!(q > 0.0) || !(q < 1.0)) throw domain_error("levels must lie in (0, 1)");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw domain_error("times must be finite and >= 0");
}

// pmf of Bin(n-1, p) over all k, by the stable recurrence from the mode
std::vector<double> companion_pmf(int n, double p) {
  const int m = n - 1;
  std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
  if (m == 0 || p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[static_cast<std::size_t>(m)] = 1.0;
    return pmf;
  }
  const long double ratio = static_cast<long double>(p) / (1.0L - static_cast<long double>(p));
  int k0 = std::min(m, static_cast<int>(std::floor((m + 1) * p)));
  std::vector<long double> q(pmf.size(), 0.0L);
  q[static_cast<std::size_t>(k0)] = 1.0L;
  long double norm = 1.0L;
  long double v = 1.0L;
  for (int k = k0; k < m; ++k) {
    v *= ratio * static_cast<long double>(m - k) / static_cast<long double>(k + 1);
    q[static_cast<std::size_t>(k + 1)] = v;
    norm += v;
  }
  v = 1.0L;
  for (int k = k0; k > 0; --k) {
    v *= static_cast<long double>(k) / (ratio * static_cast<long double>(m - k + 1));
    q[static_cast<std::size_t>(k - 1)] = v;
    norm += v;
  }
  for (std::size_t k = 0; k < q.size(); ++k) pmf[k] = static_cast<double>(q[k] / norm);
  return pmf;
}

// (1-q)-upper-quantile of the companion count: first j with F(j) > 1 - q
int survivor_quantile_index(const std::vector<double>& pmf, double q) {
  const double target = 1.0 - q;
  long double cdf = 0.0L;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    cdf += pmf[j];
    if (static_cast<double>(cdf) > target) return static_cast<int>(j);
  }
  return static_cast<int>(pmf.size()) - 1;
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform01() {  // in (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
};

}  // namespace

PayoutFan dividend_fan(const PayoutCurve& curve, const SurvivalLaw& law, int n,
                       std::span<const double> levels, std::span<const double> times) {
  check_fan_args(n, levels, times);

  PayoutFan fan;
  fan.times.assign(times.begin(), times.end());
  fan.levels.assign(levels.begin(), levels.end());
  fan.quantiles.resize(times.size());
  fan.central.resize(times.size());

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = fan.times[i];
    const double p = law.survival(t);
    const double d = curve.rate(t);
    const auto pmf = companion_pmf(n, p);
    auto& row = fan.quantiles[i];
    row.resize(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const int k = survivor_quantile_index(pmf, fan.levels[j]);
      row[j] = n * d / (k + 1.0);
    }
    fan.central[i] = p > 0.0 ? d * binomial::expected_reciprocal(n, p) : n * d;
  }
  return fan;
}

CohortStats simulate_cohort(const PayoutCurve& curve, const SurvivalLaw& law, int n,
                            std::uint64_t paths, std::uint64_t seed,
                            std::span<const double> levels, std::span<const double> times,
                            Exec exec) {
  check_fan_args(n, levels, times);
  if (paths < 1) throw invalid_parameter("simulate_cohort: paths must be >= 1");

  const std::size_t nt = times.size();
  CohortStats stats;
  stats.times.assign(times.begin(), times.end());
  stats.levels.assign(levels.begin(), levels.end());
  stats.paths = paths;
  stats.seed = seed;

  // survival thresholds on the grid; a companion with uniform u is alive at
  // times[j] iff u < surv[j] (grid must be nondecreasing in t)
  std::vector<double> surv(nt);
  std::vector<double> rate(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    if (j > 0 && stats.times[j] < stats.times[j - 1])
      throw domain_error("simulate_cohort: time grid must be nondecreasing");
    surv[j] = law.survival(stats.times[j]);
    rate[j] = curve.rate(stats.times[j]);
  }

  // survivor count per (path, time); filled independently per path so the
  // result does not depend on the thread count
  std::vector<std::uint32_t> alive(static_cast<std::size_t>(paths) * nt);

  const auto run_path = [&](std::uint64_t path) {
    SplitMix64 rng{seed ^ (0xD1B54A32D192ED03ULL * (path + 1))};
    // deaths[j]: companions whose first dead grid index is j (nt = outlives grid)
    static thread_local std::vector<std::uint32_t> deaths;
    deaths.assign(nt + 1, 0);
    for (int c = 0; c < n - 1; ++c) {
      const double u = rng.uniform01();
      // alive at times[j] iff u < surv[j]; surv is nonincreasing
      std::size_t lo = 0, hi = nt;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < surv[mid]) lo = mid + 1; else hi = mid;
      }
      ++deaths[lo];
    }
    std::uint32_t* counts = &alive[static_cast<std::size_t>(path) * nt];
    std::uint32_t still = 0;
    for (std::size_t j = nt; j-- > 0;) {
      still += deaths[j + 1];
      counts[j] = still;
    }
  };

  const bool par = exec == Exec::parallel && paths >= 64;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
  for (std::int64_t path = 0; path < static_cast<std::int64_t>(paths); ++path)
    run_path(static_cast<std::uint64_t>(path));

  stats.quantiles.resize(nt);
  stats.mean.resize(nt);
  std::vector<double> dividends(paths);
  for (std::size_t j = 0; j < nt; ++j) {
    long double acc = 0.0L;
    for (std::uint64_t path = 0; path < paths; ++path) {
      const std::uint32_t alive_now = alive[static_cast<std::size_t>(path) * nt + j] + 1u;
      const double div = n * rate[j] / static_cast<double>(alive_now);
      dividends[path] = div;
      acc += div;
    }
    stats.mean[j] = static_cast<double>(acc / static_cast<long double>(paths));
    std::sort(dividends.begin(), dividends.end());
    auto& row = stats.quantiles[j];
    row.resize(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto idx = static_cast<std::size_t>(
          std::max<std::int64_t>(0, static_cast<std::int64_t>(
                                        std::ceil(stats.levels[l] * paths)) - 1));
      row[l] = dividends[std::min<std::size_t>(idx, paths - 1)];
    }
  }
  return stats;
}

}  // namespace tontine
