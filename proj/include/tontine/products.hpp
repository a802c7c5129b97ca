#pragma once

#include <string>
#include <vector>

#include "tontine/binomial.hpp"
#include "tontine/mortality.hpp"
#include "tontine/quadrature.hpp"

namespace tontine {

// Fair life annuity quote per initial dollar.
struct AnnuityQuote {
  double c0 = 0.0;       // fair payout rate, 1 / E[discounted survival]
  double loading = 0.0;  // one-time deduction fraction delta
  double c_loaded = 0.0; // (1 - delta) * c0
};

enum class CurveKind { flat, natural, optimal, perpetuity_limit };

const char* to_string(CurveKind kind);

// A tontine payout-rate schedule d(t) per initial dollar, satisfying the
// budget constraint E[discounted payouts] = 1. Closed-form evaluator plus a
// cached scale; the mortality law is referenced, not owned, and must outlive
// the curve.
class PayoutCurve {
public:
  CurveKind kind() const { return kind_; }
  double scale() const { return scale_; }           // d(0): D(1), c0, or d0
  const EconomicBasis& economic() const { return econ_; }
  const PoolSpec& pool() const { return pool_; }    // meaningful for optimal curves
  double budget_residual() const { return budget_residual_; }

  // payout rate at time t; zero beyond a capped horizon
  double rate(double t) const;

  // payout rate as a function of log survival (flat curves ignore it)
  double rate_from_log_survival(double log_p) const;

private:
  friend PayoutCurve flat_tontine(const EconomicBasis&);
  friend PayoutCurve perpetuity_limit(const EconomicBasis&);
  friend PayoutCurve natural_tontine(const SurvivalLaw&, const EconomicBasis&);
  friend PayoutCurve optimal_tontine(const SurvivalLaw&, const EconomicBasis&, const PoolSpec&);
  PayoutCurve() = default;

  CurveKind kind_ = CurveKind::flat;
  double scale_ = 0.0;
  EconomicBasis econ_;
  PoolSpec pool_{};
  const SurvivalLaw* law_ = nullptr;
  double budget_residual_ = 0.0;
};

AnnuityQuote fair_annuity(const SurvivalLaw& law, const EconomicBasis& econ);
AnnuityQuote with_loading(const AnnuityQuote& quote, double delta);

PayoutCurve flat_tontine(const EconomicBasis& econ);
// gamma -> infinity limit of the optimal curve; identical schedule to flat
PayoutCurve perpetuity_limit(const EconomicBasis& econ);
PayoutCurve natural_tontine(const SurvivalLaw& law, const EconomicBasis& econ);
PayoutCurve optimal_tontine(const SurvivalLaw& law, const EconomicBasis& econ,
                            const PoolSpec& pool);

// cumulative discounted payout through time t, in [0, 1]
double depletion(const PayoutCurve& curve, const SurvivalLaw& law, double t);

// Max relative departure of d(p)^-gamma * p * theta(p) from the constant
// multiplier scale^-gamma across a p-grid; ~0 only for optimal curves.
double euler_lagrange_residual(const PayoutCurve& curve, const SurvivalLaw& law,
                               const EconomicBasis& econ, const PoolSpec& pool);

struct CurveSample {
  double t = 0.0;
  double survival = 1.0;
  double rate = 0.0;
  double depleted = 0.0;
};

// (t, survival, d(t), depletion) records at a fixed step, for export
std::vector<CurveSample> tabulate(const PayoutCurve& curve, const SurvivalLaw& law,
                                  double step, double t_max);

}  // namespace tontine
