#include "tontine/products.hpp"

#include <cmath>

namespace tontine {

namespace {

// Budget residual |E[discounted payouts] - 1|; construction fails above 1e-6.
double checked_budget_residual(const PayoutCurve& curve, const SurvivalLaw& law) {
  const auto res = quad_detail::discounted_integral_logp(
      curve.economic(), law,
      [&curve](double log_p) { return curve.rate_from_log_survival(log_p); },
      IntegratorOptions{});
  const double residual = std::abs(res.value - 1.0);
  if (residual > 1e-6)
    throw accuracy_error("payout curve violates the budget constraint", res.value, residual);
  return residual;
}

double capped_flat_rate(const EconomicBasis& econ) {
  if (!econ.horizon.is_capped()) return econ.r;
  return econ.r / -std::expm1(-econ.r * econ.horizon.cap());
}

}  // namespace

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::flat: return "flat";
    case CurveKind::natural: return "natural";
    case CurveKind::optimal: return "optimal";
    case CurveKind::perpetuity_limit: return "perpetuity-limit";
  }
  return "?";
}

double PayoutCurve::rate_from_log_survival(double log_p) const {
  switch (kind_) {
    case CurveKind::flat:
    case CurveKind::perpetuity_limit:
      return scale_;
    case CurveKind::natural:
      return scale_ * std::exp(log_p);
    case CurveKind::optimal:
      return scale_ * binomial::beta_root(pool_.n, pool_.gamma, std::exp(log_p));
  }
  return 0.0;
}

double PayoutCurve::rate(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw invalid_parameter("PayoutCurve::rate: t must be finite and >= 0");
  if (econ_.horizon.is_capped() && t > econ_.horizon.cap()) return 0.0;
  if (kind_ == CurveKind::flat || kind_ == CurveKind::perpetuity_limit) return scale_;
  return rate_from_log_survival(law_->log_survival(t));
}

AnnuityQuote fair_annuity(const SurvivalLaw& law, const EconomicBasis& econ) {
  quad_detail::check_economic(econ);
  const double apv = quad_detail::discounted_integral_logp(
                         econ, law, [](double log_p) { return std::exp(log_p); },
                         IntegratorOptions{})
                         .value;
  AnnuityQuote q;
  q.c0 = 1.0 / apv;
  q.c_loaded = q.c0;
  return q;
}

AnnuityQuote with_loading(const AnnuityQuote& quote, double delta) {
  if (!(delta >= 0.0) || delta >= 1.0)
    throw domain_error("annuity loading must lie in [0, 1)");
  AnnuityQuote q = quote;
  q.loading = delta;
  q.c_loaded = (1.0 - delta) * q.c0;
  return q;
}

PayoutCurve flat_tontine(const EconomicBasis& econ) {
  quad_detail::check_economic(econ);
  PayoutCurve c;
  c.kind_ = CurveKind::flat;
  c.econ_ = econ;
  c.scale_ = capped_flat_rate(econ);
  c.budget_residual_ = 0.0;  // integral of e^{-rt} d0 is 1 identically
  return c;
}

PayoutCurve perpetuity_limit(const EconomicBasis& econ) {
  PayoutCurve c = flat_tontine(econ);
  c.kind_ = CurveKind::perpetuity_limit;
  return c;
}

PayoutCurve natural_tontine(const SurvivalLaw& law, const EconomicBasis& econ) {
  PayoutCurve c;
  c.kind_ = CurveKind::natural;
  c.econ_ = econ;
  c.law_ = &law;
  c.scale_ = fair_annuity(law, econ).c0;
  c.budget_residual_ = checked_budget_residual(c, law);
  return c;
}

PayoutCurve optimal_tontine(const SurvivalLaw& law, const EconomicBasis& econ,
                            const PoolSpec& pool) {
  quad_detail::check_economic(econ);
  binomial::detail::check_pool(pool.n, pool.gamma);

  PayoutCurve c;
  c.kind_ = CurveKind::optimal;
  c.econ_ = econ;
  c.law_ = &law;
  c.pool_ = pool;
  // beta^(1/gamma) has a removable 1/(gamma-1) sensitivity near gamma = 1;
  // the natural curve is exact there
  if (std::abs(pool.gamma - 1.0) < 1e-8) c.pool_.gamma = 1.0;

  const double denom =
      quad_detail::discounted_integral_logp(
          econ, law,
          [&c](double log_p) {
            return binomial::beta_root(c.pool_.n, c.pool_.gamma, std::exp(log_p));
          },
          IntegratorOptions{})
          .value;
  c.scale_ = 1.0 / denom;
  c.budget_residual_ = checked_budget_residual(c, law);
  return c;
}

double depletion(const PayoutCurve& curve, const SurvivalLaw& law, double t) {
  if (!(t >= 0.0))
    throw invalid_parameter("depletion: t must be >= 0");
  if (t == 0.0) return 0.0;
  return quad_detail::discounted_integral_logp(
             curve.economic(), law,
             [&curve](double log_p) { return curve.rate_from_log_survival(log_p); },
             IntegratorOptions{}, t)
      .value;
}

double euler_lagrange_residual(const PayoutCurve& curve, const SurvivalLaw& law,
                               const EconomicBasis& econ, const PoolSpec& pool) {
  binomial::detail::check_pool(pool.n, pool.gamma);
  const double lambda = std::pow(curve.scale(), -pool.gamma);
  const double t_max = econ.horizon.is_capped() ? econ.horizon.cap() : 60.0;

  double worst = 0.0;
  const int steps = 120;
  for (int i = 0; i <= steps; ++i) {
    const double t = t_max * i / steps;
    const double log_p = law.log_survival(t);
    const double p = std::exp(log_p);
    const double d = curve.rate_from_log_survival(log_p);
    if (!(d > 0.0)) continue;
    const double lhs =
        std::pow(d, -pool.gamma) * p * binomial::theta(pool.n, pool.gamma, p);
    worst = std::max(worst, std::abs(lhs - lambda) / lambda);
  }
  return worst;
}

std::vector<CurveSample> tabulate(const PayoutCurve& curve, const SurvivalLaw& law,
                                  double step, double t_max) {
  if (!(step > 0.0) || !(t_max >= 0.0))
    throw invalid_parameter("tabulate: step must be > 0 and t_max >= 0");
  std::vector<CurveSample> rows;
  for (double t = 0.0; t <= t_max + 1e-9; t += step) {
    CurveSample s;
    s.t = t;
    s.survival = law.survival(t);
    s.rate = curve.rate(t);
    s.depleted = depletion(curve, law, t);
    rows.push_back(s);
  }
  return rows;
}

}  // namespace tontine
