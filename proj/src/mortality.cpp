#include "tontine/mortality.hpp"

#include <cmath>

#include "tontine/roots.hpp"

namespace tontine {

double SurvivalLaw::survival(double t) const { return std::exp(log_survival(t)); }

double SurvivalLaw::time_for_survival(double p) const {
  if (!(p > 0.0) || p > 1.0 || !std::isfinite(p))
    throw domain_error("time_for_survival: p must lie in (0, 1]");
  if (p == 1.0) return 0.0;

  const double target = std::log(p);
  double hi = 1.0;
  while (log_survival(hi) > target) {
    hi *= 2.0;
    if (hi > 1e9)
      throw domain_error("time_for_survival: survival never reaches p");
  }
  const double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  return detail::brent_root([&](double t) { return log_survival(t) - target; },
                            lo, hi, 1e-12);
}

GompertzLaw::GompertzLaw(const MortalityBasis& basis) : basis_(basis) {
  if (!(basis.b > 0.0) || !std::isfinite(basis.b))
    throw invalid_parameter("GompertzLaw: dispersion b must be positive");
  if (!(basis.age >= 0.0) || !std::isfinite(basis.age) || !std::isfinite(basis.m))
    throw invalid_parameter("GompertzLaw: age must be finite and >= 0");
  scale_ = std::exp((basis.age - basis.m) / basis.b);
}

double GompertzLaw::log_survival(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw invalid_parameter("log_survival: t must be finite and >= 0");
  // -integral of the hazard in closed form
  return scale_ * (1.0 - std::exp(t / basis_.b));
}

double GompertzLaw::hazard(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw invalid_parameter("hazard: t must be finite and >= 0");
  return scale_ * std::exp(t / basis_.b) / basis_.b;
}

}  // namespace tontine
