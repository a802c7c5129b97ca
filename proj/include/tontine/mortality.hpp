#pragma once

#include "tontine/errors.hpp"

namespace tontine {

// Gompertz parameters: attained age x, modal age m, dispersion b (all in years).
struct MortalityBasis {
  double age = 65.0;
  double m = 88.72;
  double b = 10.0;
};

// Abstract survival law. Downstream code works with log survival and
// exponentiates as late as possible; Gompertz is the only shipped law but the
// integrals and products only rely on this interface.
class SurvivalLaw {
public:
  virtual ~SurvivalLaw() = default;

  // log of the t-year survival probability from the current age; 0 at t = 0.
  virtual double log_survival(double t) const = 0;

  // instantaneous hazard rate at time t (per year)
  virtual double hazard(double t) const = 0;

  // attained age at t = 0; integration horizons are capped at age 150
  virtual double age() const = 0;

  double survival(double t) const;

  // Inverse of survival: the t with survival(t) = p. Bracketed root find on
  // log p, tolerance 1e-12 in t.
  double time_for_survival(double p) const;
};

class GompertzLaw final : public SurvivalLaw {
public:
  explicit GompertzLaw(const MortalityBasis& basis);

  double log_survival(double t) const override;
  double hazard(double t) const override;
  double age() const override { return basis_.age; }

  const MortalityBasis& basis() const { return basis_; }

private:
  MortalityBasis basis_;
  double scale_;  // exp((age - m)/b)
};

}  // namespace tontine
