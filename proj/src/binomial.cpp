#include "tontine/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tontine::binomial {

namespace detail {

void check_pool(int n, double gamma) {
  if (n < 1) throw invalid_parameter("pool size n must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw invalid_parameter("gamma must be positive and finite");
}

void check_probability(double p) {
  if (!(p >= 0.0) || p > 1.0)
    throw domain_error("survival probability must lie in [0, 1]");
}

double log_expect_logspace(int n, double p, double (*log_weight)(int, const void*),
                           const void* ctx, Exec exec) {
  const int m = n - 1;
  if (m == 0 || p <= 0.0) return log_weight(0, ctx);
  if (p >= 1.0) return log_weight(m, ctx);

  const double mean = m * p;
  const double sd = std::sqrt(m * p * (1.0 - p));
  const double half = 16.0 * sd + 60.0;
  const int lo = std::max(0, static_cast<int>(std::floor(mean - half)));
  const int hi = std::min(m, static_cast<int>(std::ceil(mean + half)));
  const int count = hi - lo + 1;

  const double logp = std::log(p);
  const double log1mp = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n));

  std::vector<double> terms(static_cast<std::size_t>(count));

  const bool par = exec == Exec::parallel && count >= 8192;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
  for (int i = 0; i < count; ++i) {
    const int k = lo + i;
    const double lpmf = lgn - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n - k)) +
                        k * logp + (m - k) * log1mp;
    terms[static_cast<std::size_t>(i)] = lpmf + log_weight(k, ctx);
  }

  double mx = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : mx) if (par)
#endif
  for (int i = 0; i < count; ++i) mx = std::max(mx, terms[static_cast<std::size_t>(i)]);
  if (!std::isfinite(mx)) return mx;

  long double sum = 0.0L;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : sum) if (par)
#endif
  for (int i = 0; i < count; ++i)
    sum += expl(static_cast<long double>(terms[static_cast<std::size_t>(i)] - mx));
  return mx + static_cast<double>(logl(sum));
}

namespace {

// log of (n/(k+1))^(1-gamma)
struct ThetaWeight {
  int n;
  double one_minus_gamma;
  double operator()(int k) const {
    return one_minus_gamma * (std::log(static_cast<double>(n)) - std::log(k + 1.0));
  }
};

double log_theta_impl(int n, double gamma, double p, Exec exec) {
  if (gamma == 1.0) return 0.0;
  if (p >= 1.0) return 0.0;
  const double one_minus_gamma = 1.0 - gamma;
  if (p <= 0.0) return one_minus_gamma * std::log(static_cast<double>(n));

  if (n < kLogSpaceMinN) {
    const long double logn = logl(static_cast<long double>(n));
    const long double omg = static_cast<long double>(one_minus_gamma);
    const long double v = expect_linear(n, p, [&](int k) {
      return expl(omg * (logn - logl(static_cast<long double>(k) + 1.0L)));
    });
    if (v > 0.0L && std::isfinite(static_cast<double>(v)))
      return static_cast<double>(logl(v));
    // fell below long-double range; redo in log space
  }
  return log_expect_logspace(n, p, ThetaWeight{n, one_minus_gamma}, exec);
}

}  // namespace
}  // namespace detail

double log_theta(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  detail::check_probability(p);
  return detail::log_theta_impl(n, gamma, p, exec);
}

double theta(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  detail::check_probability(p);
  if (gamma == 1.0 || p >= 1.0) return 1.0;
  return std::exp(detail::log_theta_impl(n, gamma, p, exec));
}

double beta(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  detail::check_probability(p);
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (gamma == 1.0) return p;
  return std::exp(std::log(p) + detail::log_theta_impl(n, gamma, p, exec));
}

double log_beta(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  detail::check_probability(p);
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return 0.0;
  return std::log(p) + detail::log_theta_impl(n, gamma, p, exec);
}

double beta_root(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  detail::check_probability(p);
  // below this the whole integrand is dead anyway
  if (p < 1e-300) return 0.0;
  if (p >= 1.0) return 1.0;
  if (gamma == 1.0) return p;
  return std::exp((std::log(p) + detail::log_theta_impl(n, gamma, p, exec)) / gamma);
}

double beta_derivative(int n, double gamma, double p, Exec exec) {
  detail::check_pool(n, gamma);
  if (!(p > 0.0) || !(p < 1.0))
    throw domain_error("beta_derivative: p must lie in (0, 1)");
  if (gamma == 1.0) return 1.0;

  // n^(1-gamma) E[N^gamma - (N-1)^gamma], weight positive for all gamma > 0
  const double scale = (1.0 - gamma) * std::log(static_cast<double>(n));
  if (n < detail::kLogSpaceMinN) {
    const long double g = static_cast<long double>(gamma);
    const long double v = detail::expect_linear(n, p, [&](int k) {
      const long double np1 = static_cast<long double>(k) + 1.0L;
      if (k == 0) return 1.0L;
      return expl(g * logl(np1)) - expl(g * logl(np1 - 1.0L));
    });
    const double out = static_cast<double>(expl(static_cast<long double>(scale)) * v);
    if (out > 0.0 && std::isfinite(out)) return out;
  }
  const auto logw = [gamma](int k) {
    if (k == 0) return 0.0;
    const double lk1 = std::log(k + 1.0);
    const double lk = std::log(static_cast<double>(k));
    return gamma * lk1 + std::log1p(-std::exp(gamma * (lk - lk1)));
  };
  return std::exp(scale + detail::log_expect_logspace(n, p, logw, exec));
}

double expected_reciprocal(int n, double p) {
  detail::check_pool(n, 1.0);
  if (!(p > 0.0) || p > 1.0)
    throw domain_error("expected_reciprocal: p must lie in (0, 1]");
  // Closed form (1 - (1-p)^n) / p, kept accurate for small p.
  return -std::expm1(n * std::log1p(-p)) / p;
}

double expected_log_ratio(int n, double p, Exec exec) {
  detail::check_pool(n, 1.0);
  if (!(p > 0.0) || p > 1.0)
    throw domain_error("expected_log_ratio: p must lie in (0, 1]");
  if (p >= 1.0 || n == 1) return 0.0;

  // E[log(N/n)] = -E[w] with w = log(n/N) >= 0
  const double logn = std::log(static_cast<double>(n));
  if (n < detail::kLogSpaceMinN) {
    const long double ln = static_cast<long double>(logn);
    const long double v = detail::expect_linear(
        n, p, [&](int k) { return ln - logl(static_cast<long double>(k) + 1.0L); });
    return -static_cast<double>(v);
  }
  const auto logw = [logn](int k) {
    const double w = logn - std::log(k + 1.0);
    return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
  };
  return -std::exp(detail::log_expect_logspace(n, p, logw, exec));
}

double r_ratio(int n, double gamma1, double gamma2, double p, Exec exec) {
  detail::check_pool(n, gamma1);
  detail::check_pool(n, gamma2);
  if (!(p > 0.0) || p > 1.0)
    throw domain_error("r_ratio: p must lie in (0, 1]");
  if (p >= 1.0 || gamma1 == gamma2) return 1.0;
  return std::exp(log_beta(n, gamma1, p, exec) / gamma1 -
                  log_beta(n, gamma2, p, exec) / gamma2);
}

}  // namespace tontine::binomial
