#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tontine/errors.hpp"

namespace tontine {

// Tontine pool: n initial subscribers, longevity risk aversion gamma.
struct PoolSpec {
  int n = 100;
  double gamma = 1.0;
};

// Execution policy for the summation kernels. `parallel` enables OpenMP on
// large k-ranges; `serial` is the reference path kept for testing and
// benchmarking. Results agree to roundoff, not bit-for-bit.
enum class Exec { serial, parallel };

namespace binomial {

// Moments of the live-subscriber count N(p), where N(p) - 1 ~ Bin(n-1, p).
//
// theta(n, gamma, p)  = E[(n/N)^(1-gamma)]
// beta(n, gamma, p)   = p * theta(n, gamma, p)
// beta_root           = beta^(1/gamma), evaluated as exp(log_beta / gamma)
// beta_derivative     = n^(1-gamma) E[N^gamma - (N-1)^gamma]  (= d beta / dp)
// expected_reciprocal = E[n/N] = (1 - (1-p)^n)/p
// expected_log_ratio  = E[log(N/n)]
// r_ratio             = beta_{g1}(p)^(1/g1) / beta_{g2}(p)^(1/g2)

double theta(int n, double gamma, double p, Exec exec = Exec::parallel);
double log_theta(int n, double gamma, double p, Exec exec = Exec::parallel);
double beta(int n, double gamma, double p, Exec exec = Exec::parallel);
double log_beta(int n, double gamma, double p, Exec exec = Exec::parallel);
double beta_root(int n, double gamma, double p, Exec exec = Exec::parallel);
double beta_derivative(int n, double gamma, double p, Exec exec = Exec::parallel);
double expected_reciprocal(int n, double p);
double expected_log_ratio(int n, double p, Exec exec = Exec::parallel);
double r_ratio(int n, double gamma1, double gamma2, double p, Exec exec = Exec::parallel);

namespace detail {

// Direct summation switches to the log-sum-exp path above this pool size.
inline constexpr int kLogSpaceMinN = 10'001;

void check_pool(int n, double gamma);
void check_probability(double p);

// E[w(N(p))] for a positive weight, summed in linear space: binomial pmf by
// the multiplicative recurrence outward from the modal term, accumulating in
// extended precision. Terms are normalized to the modal pmf so nothing
// under- or overflows regardless of n.
template <class W>
long double expect_linear(int n, double p, W&& weight) {
  const int m = n - 1;  // N - 1 ~ Bin(m, p)
  if (m == 0 || p <= 0.0) return weight(0);
  if (p >= 1.0) return weight(m);

  const long double ratio = static_cast<long double>(p) / (1.0L - static_cast<long double>(p));
  int k0 = static_cast<int>(std::floor((m + 1) * p));
  if (k0 > m) k0 = m;

  constexpr long double cut = 1e-40L;
  long double norm = 1.0L;      // sum of q(k) = pmf(k)/pmf(k0)
  long double acc = weight(k0); // sum of q(k) w(k)

  long double q = 1.0L;
  for (int k = k0; k < m; ++k) {
    q *= ratio * static_cast<long double>(m - k) / static_cast<long double>(k + 1);
    if (q < cut) break;
    norm += q;
    acc += q * weight(k + 1);
  }
  q = 1.0L;
  for (int k = k0; k > 0; --k) {
    q *= static_cast<long double>(k) / (ratio * static_cast<long double>(m - k + 1));
    if (q < cut) break;
    norm += q;
    acc += q * weight(k - 1);
  }
  return acc / norm;
}

// log E[w(N(p))] for a positive weight given as log w(k+1), summed with
// log-sum-exp over a window of k where the pmf is non-negligible. The window
// covers mode +/- (16 sd + 60), so truncation error is below e^-128 relative
// for any polynomially bounded weight. Parallelized over k for large windows.
double log_expect_logspace(int n, double p, double (*log_weight)(int k, const void* ctx),
                           const void* ctx, Exec exec);

template <class LW>
double log_expect_logspace(int n, double p, LW&& log_weight, Exec exec) {
  using Fn = std::remove_reference_t<LW>;
  return log_expect_logspace(
      n, p,
      +[](int k, const void* ctx) { return (*static_cast<const Fn*>(ctx))(k); },
      static_cast<const void*>(&log_weight), exec);
}

}  // namespace detail
}  // namespace binomial
}  // namespace tontine
