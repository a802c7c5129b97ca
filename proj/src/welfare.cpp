#include "tontine/welfare.hpp"

#include <cmath>

namespace tontine {

namespace {

double snap_gamma(double gamma) {
  return std::abs(gamma - 1.0) < 1e-8 ? 1.0 : gamma;
}

double annuity_value(const SurvivalLaw& law, const EconomicBasis& econ) {
  return quad_detail::discounted_integral_logp(
             econ, law, [](double log_p) { return std::exp(log_p); }, IntegratorOptions{})
      .value;
}

double beta_root_value(const SurvivalLaw& law, const EconomicBasis& econ, const PoolSpec& pool) {
  return quad_detail::discounted_integral_logp(
             econ, law,
             [&pool](double log_p) {
               return binomial::beta_root(pool.n, pool.gamma, std::exp(log_p));
             },
             IntegratorOptions{})
      .value;
}

// effective curvature of the payout in p: natural behaves like gamma = 1,
// flat like gamma = infinity; utility integrals diverge on an open horizon
// once the utility gamma exceeds 1 + curve gamma
bool utility_diverges(const PayoutCurve& curve, const EconomicBasis& econ, double gamma) {
  if (econ.horizon.is_capped()) return false;
  switch (curve.kind()) {
    case CurveKind::natural: return gamma > 2.0;
    case CurveKind::optimal: return gamma > 1.0 + curve.pool().gamma;
    case CurveKind::flat:
    case CurveKind::perpetuity_limit: return false;
  }
  return false;
}

}  // namespace

double utility_annuity(const SurvivalLaw& law, const EconomicBasis& econ, double gamma,
                       double delta) {
  gamma = snap_gamma(gamma);
  binomial::detail::check_pool(1, gamma);
  if (!(delta >= 0.0) || delta >= 1.0)
    throw domain_error("utility_annuity: loading must lie in [0, 1)");

  const double c0 = 1.0 / annuity_value(law, econ);
  if (gamma == 1.0) return (std::log(c0) + std::log1p(-delta)) / c0;
  return std::pow(c0, -gamma) / (1.0 - gamma) * std::pow(1.0 - delta, 1.0 - gamma);
}

double utility_optimal_tontine(const SurvivalLaw& law, const EconomicBasis& econ,
                               const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, pool.gamma);
  const double gamma = snap_gamma(pool.gamma);

  if (gamma == 1.0) {
    const double c0 = 1.0 / annuity_value(law, econ);
    const double log_c0 = std::log(c0);
    return quad_detail::discounted_integral_logp(
               econ, law,
               [&](double log_p) {
                 const double p = std::exp(log_p);
                 const double mix = binomial::expected_log_ratio(pool.n, p);
                 return p * (log_c0 + log_p - mix);
               },
               IntegratorOptions{})
        .value;
  }
  const double integral = beta_root_value(law, econ, {pool.n, gamma});
  return std::pow(integral, gamma) / (1.0 - gamma);
}

double utility_curve(const PayoutCurve& curve, const SurvivalLaw& law,
                     const EconomicBasis& econ, const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, pool.gamma);
  const double gamma = snap_gamma(pool.gamma);
  if (utility_diverges(curve, econ, gamma))
    throw divergence_error("curve utility diverges on an open horizon for this gamma");

  if (gamma == 1.0) {
    return quad_detail::discounted_integral_logp(
               econ, law,
               [&](double log_p) {
                 const double p = std::exp(log_p);
                 const double d = curve.rate_from_log_survival(log_p);
                 return p * (std::log(d) - binomial::expected_log_ratio(pool.n, p));
               },
               IntegratorOptions{})
        .value;
  }

  // E[u(n d / N)] = theta(p) d^(1-gamma) / (1-gamma); assembled in log space
  const double one_minus_gamma = 1.0 - gamma;
  const double integral =
      quad_detail::discounted_integral_logp(
          econ, law,
          [&](double log_p) {
            const double p = std::exp(log_p);
            const double d = curve.rate_from_log_survival(log_p);
            const double log_theta = binomial::log_theta(pool.n, gamma, p);
            return std::exp(log_p + log_theta + one_minus_gamma * std::log(d));
          },
          IntegratorOptions{})
          .value;
  return integral / one_minus_gamma;
}

double indifference_loading(const SurvivalLaw& law, const EconomicBasis& econ,
                            const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, pool.gamma);
  const double gamma = snap_gamma(pool.gamma);
  const double c0 = 1.0 / annuity_value(law, econ);

  if (gamma == 1.0) {
    const double gap =
        utility_optimal_tontine(law, econ, {pool.n, 1.0}) - utility_annuity(law, econ, 1.0);
    return -std::expm1(c0 * gap);
  }
  const double scaled = c0 * beta_root_value(law, econ, {pool.n, gamma});
  return -std::expm1(gamma / (1.0 - gamma) * std::log(scaled));
}

double loading_bound(const SurvivalLaw& law, const EconomicBasis& econ, const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, 1.0);
  const double c0 = 1.0 / annuity_value(law, econ);
  return (c0 / econ.r - 1.0) / pool.n;
}

std::vector<std::pair<int, double>> loading_scaling(const SurvivalLaw& law,
                                                    const EconomicBasis& econ, double gamma,
                                                    std::span<const int> pool_sizes) {
  if (pool_sizes.empty())
    throw invalid_parameter("loading_scaling: pool size list must be nonempty");
  std::vector<std::pair<int, double>> out;
  out.reserve(pool_sizes.size());
  for (int n : pool_sizes)
    out.emplace_back(n, n * indifference_loading(law, econ, {n, gamma}));
  return out;
}

double loading_scaling_limit(const SurvivalLaw& law, const EconomicBasis& econ, double gamma) {
  binomial::detail::check_pool(1, gamma);
  const double c0 = 1.0 / annuity_value(law, econ);
  if (econ.horizon.is_capped()) {
    const double T = econ.horizon.cap();
    return 0.5 * gamma * ((c0 / econ.r) * -std::expm1(-econ.r * T) - 1.0);
  }
  return 0.5 * gamma * (c0 / econ.r - 1.0);
}

double certainty_equivalent_ratio(const SurvivalLaw& law, const EconomicBasis& econ,
                                  const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, pool.gamma);
  const double gamma = snap_gamma(pool.gamma);
  if (gamma == 1.0) return 1.0;  // natural tontine is the optimum
  if (gamma > 2.0 && !econ.horizon.is_capped())
    throw divergence_error(
        "natural-tontine utility diverges for gamma > 2 on an open horizon; cap the age");

  const double u_opt = utility_optimal_tontine(law, econ, {pool.n, gamma});
  const PayoutCurve natural = natural_tontine(law, econ);
  const double u_nat = utility_curve(natural, law, econ, {pool.n, gamma});
  return std::pow(u_opt / u_nat, 1.0 / (1.0 - gamma));
}

WelfareReport welfare_report(const SurvivalLaw& law, const EconomicBasis& econ,
                             const PoolSpec& pool, std::optional<double> loading) {
  WelfareReport rep;
  rep.rate = econ.r;
  if (econ.horizon.is_capped()) rep.cap = econ.horizon.cap();
  rep.pool = pool;

  rep.u_annuity = utility_annuity(law, econ, pool.gamma);
  rep.u_optimal_tontine = utility_optimal_tontine(law, econ, pool);
  rep.indifference_loading = indifference_loading(law, econ, pool);
  rep.loading_bound = loading_bound(law, econ, pool);
  rep.loading_input = loading.value_or(rep.indifference_loading);
  rep.u_loaded_annuity = utility_annuity(law, econ, pool.gamma, rep.loading_input);
  try {
    const PayoutCurve natural = natural_tontine(law, econ);
    rep.u_natural_tontine = utility_curve(natural, law, econ, pool);
    rep.ce_ratio = certainty_equivalent_ratio(law, econ, pool);
  } catch (const divergence_error& e) {
    rep.divergence_note = e.what();
  }
  return rep;
}

}  // namespace tontine
