#include "tontine/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tontine/roots.hpp"

namespace tontine {
namespace quad_detail {

void check_economic(const EconomicBasis& econ) {
  if (!(econ.r > 0.0) || !std::isfinite(econ.r))
    throw invalid_parameter("EconomicBasis: rate r must be positive and finite");
}

namespace {

// 15-point Gauss-Legendre on [-1, 1]
constexpr int kGlPoints = 15;
constexpr double kGlNode[kGlPoints] = {
    0.0,
    -0.201194093997435, 0.201194093997435,
    -0.394151347077563, 0.394151347077563,
    -0.570972172608539, 0.570972172608539,
    -0.724417731360170, 0.724417731360170,
    -0.848206583410427, 0.848206583410427,
    -0.937273392400706, 0.937273392400706,
    -0.987992518020485, 0.987992518020485,
};
constexpr double kGlWeight[kGlPoints] = {
    0.202578241925561,
    0.198431485327112, 0.198431485327112,
    0.186161000015562, 0.186161000015562,
    0.166269205816994, 0.166269205816994,
    0.139570677926154, 0.139570677926154,
    0.107159220467172, 0.107159220467172,
    0.070366047488108, 0.070366047488108,
    0.030753241996117, 0.030753241996117,
};

double gl15(const std::function<double(double)>& g, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  long double acc = 0.0L;
  for (int i = 0; i < kGlPoints; ++i) acc += kGlWeight[i] * g(c + h * kGlNode[i]);
  return static_cast<double>(acc * h);
}

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel make_panel(const std::function<double(double)>& g, double a, double b) {
  const double whole = gl15(g, a, b);
  const double mid = 0.5 * (a + b);
  const double refined = gl15(g, a, mid) + gl15(g, mid, b);
  return Panel{a, b, refined, std::abs(refined - whole)};
}

}  // namespace

IntegralResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                  const IntegratorOptions& opts) {
  if (!(b > a)) return {0.0, 0.0};

  std::vector<Panel> heap;
  heap.reserve(64);
  const int seeds = std::max(1, opts.seed_panels);
  for (int i = 0; i < seeds; ++i) {
    const double pa = a + (b - a) * i / seeds;
    const double pb = a + (b - a) * (i + 1) / seeds;
    heap.push_back(make_panel(g, pa, pb));
  }
  std::make_heap(heap.begin(), heap.end());

  const auto totals = [&heap] {
    long double v = 0.0L, e = 0.0L;
    for (const Panel& p : heap) {
      v += p.value;
      e += p.err;
    }
    return std::pair<double, double>(static_cast<double>(v), static_cast<double>(e));
  };

  auto [value, err] = totals();
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (static_cast<int>(heap.size()) >= opts.max_panels)
      throw accuracy_error("quadrature failed to converge", value, err);
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    if (worst.b - worst.a < 1e-14 * (b - a))
      throw accuracy_error("quadrature interval collapsed", value, err);
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(make_panel(g, worst.a, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(make_panel(g, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());
    std::tie(value, err) = totals();
  }
  return {value, err};
}

double truncation_time(const EconomicBasis& econ, const SurvivalLaw& law) {
  if (econ.horizon.is_capped()) return econ.horizon.cap();

  const double age_cap = std::max(1.0, 150.0 - law.age());
  const double target = std::log(1e-16);
  if (law.log_survival(age_cap) > target) return age_cap;
  double hi = 1.0;
  while (law.log_survival(hi) > target) hi *= 2.0;
  const double t_star = detail::brent_root(
      [&](double t) { return law.log_survival(t) - target; }, 0.0, hi, 1e-6);
  return std::min(t_star + 10.0, age_cap);
}

IntegralResult discounted_integral_logp(const EconomicBasis& econ, const SurvivalLaw& law,
                                        const std::function<double(double)>& f_logp,
                                        const IntegratorOptions& opts, double t_hi) {
  check_economic(econ);
  const double H = truncation_time(econ, law);
  const double r = econ.r;
  const double upper = std::min(H, t_hi);

  auto g = [&](double t) { return std::exp(-r * t) * f_logp(law.log_survival(t)); };
  IntegralResult out = integrate_adaptive(g, 0.0, upper, opts);

  // Geometric tail with the integrand frozen at the truncation point. For
  // genuine mortality this is below the tolerance unless f tends to a
  // positive constant at p = 0, in which case it is exactly the missing mass.
  if (!econ.horizon.is_capped() && t_hi > H) {
    const double fH = f_logp(law.log_survival(H));
    const double hi_disc = std::isfinite(t_hi) ? std::exp(-r * t_hi) : 0.0;
    out.value += fH * (std::exp(-r * H) - hi_disc) / r;
  }
  return out;
}

}  // namespace quad_detail

IntegralResult discounted_integral_result(const EconomicBasis& econ, const SurvivalLaw& law,
                                          const std::function<double(double)>& f,
                                          const IntegratorOptions& opts) {
  return quad_detail::discounted_integral_logp(
      econ, law, [&f](double logp) { return f(std::exp(logp)); }, opts);
}

double discounted_integral(const EconomicBasis& econ, const SurvivalLaw& law,
                           const std::function<double(double)>& f,
                           const IntegratorOptions& opts) {
  return discounted_integral_result(econ, law, f, opts).value;
}

}  // namespace tontine
