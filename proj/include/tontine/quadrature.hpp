#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "tontine/errors.hpp"
#include "tontine/mortality.hpp"

namespace tontine {

// Payment horizon: open-ended, or capped T years after inception.
class Horizon {
public:
  static Horizon infinite() { return Horizon(); }
  static Horizon capped(double T) {
    if (!(T > 0.0) || !std::isfinite(T))
      throw invalid_parameter("Horizon: cap must be positive and finite");
    Horizon h;
    h.cap_ = T;
    return h;
  }

  bool is_capped() const { return cap_ != std::numeric_limits<double>::infinity(); }
  double cap() const { return cap_; }

private:
  Horizon() = default;
  double cap_ = std::numeric_limits<double>::infinity();
};

// Constant risk-free rate r, which is also the subjective discount rate.
struct EconomicBasis {
  double r = 0.04;
  Horizon horizon = Horizon::infinite();
};

struct IntegratorOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 20'000;
  int seed_panels = 8;
};

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// integral_0^H e^{-rt} f(tpx) dt with H the cap, or for the open horizon the
// age where survival falls below 1e-16 plus a guard decade (never past age
// 150), plus the geometric tail of the frozen integrand beyond that point.
double discounted_integral(const EconomicBasis& econ, const SurvivalLaw& law,
                           const std::function<double(double)>& f,
                           const IntegratorOptions& opts = {});

IntegralResult discounted_integral_result(const EconomicBasis& econ, const SurvivalLaw& law,
                                          const std::function<double(double)>& f,
                                          const IntegratorOptions& opts = {});

namespace quad_detail {

void check_economic(const EconomicBasis& econ);

// effective upper integration limit in years
double truncation_time(const EconomicBasis& econ, const SurvivalLaw& law);

// as discounted_integral but the callback receives log tpx, and the range may
// be limited to [0, t_hi] (partial tail included when t_hi exceeds the
// truncation point of an open horizon)
IntegralResult discounted_integral_logp(const EconomicBasis& econ, const SurvivalLaw& law,
                                        const std::function<double(double)>& f_logp,
                                        const IntegratorOptions& opts,
                                        double t_hi = std::numeric_limits<double>::infinity());

// adaptive composite Gauss-Legendre on [a, b]
IntegralResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                  const IntegratorOptions& opts);

}  // namespace quad_detail
}  // namespace tontine
