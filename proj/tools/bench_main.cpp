// Timings for the OpenMP kernels against their serial reference paths.

#include <chrono>
#include <cstdio>
#include <vector>

#include "tontine/binomial.hpp"
#include "tontine/pool_outcomes.hpp"
#include "tontine/presets.hpp"
#include "tontine/products.hpp"

using namespace tontine;

namespace {

template <class F>
double time_ms(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-34s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms);
}

double bench_theta(int n, Exec exec) {
  double sink = 0.0;
  for (int i = 1; i <= 40; ++i) sink += binomial::theta(n, 2.5, i / 41.0, exec);
  return sink;
}

}  // namespace

int main() {
  double sink = 0.0;

  sink += bench_theta(200'000, Exec::serial);  // warm up
  for (int n : {200'000, 2'000'000}) {
    const double s = time_ms([&] { sink += bench_theta(n, Exec::serial); });
    const double p = time_ms([&] { sink += bench_theta(n, Exec::parallel); });
    char name[64];
    std::snprintf(name, sizeof name, "binomial theta, n = %d", n);
    report(name, s, p);
  }

  const GompertzLaw law(preset("figure1").mortality);
  const EconomicBasis econ{0.04, Horizon::infinite()};
  const PayoutCurve curve = natural_tontine(law, econ);
  const std::vector<double> levels = {0.1, 0.5, 0.9};
  std::vector<double> times;
  for (double t = 0.0; t <= 35.0; t += 1.0) times.push_back(t);

  for (std::uint64_t paths : {20'000ULL, 100'000ULL}) {
    const double s = time_ms([&] {
      sink += simulate_cohort(curve, law, 400, paths, 1, levels, times, Exec::serial).mean[10];
    });
    const double p = time_ms([&] {
      sink +=
          simulate_cohort(curve, law, 400, paths, 1, levels, times, Exec::parallel).mean[10];
    });
    char name[64];
    std::snprintf(name, sizeof name, "cohort simulation, %llu paths",
                  static_cast<unsigned long long>(paths));
    report(name, s, p);
  }

  const double build = time_ms([&] {
    sink += optimal_tontine(law, econ, {100'000, 2.0}).rate(0.0);
  });
  std::printf("%-34s %9.2f ms\n", "optimal curve build, n = 100000", build);
  return sink == -1.0;
}
