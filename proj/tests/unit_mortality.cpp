#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tontine/mortality.hpp"

using namespace tontine;

namespace {
const MortalityBasis kTable1{65.0, 88.72, 10.0};
}

TEST_CASE("hazard closed form") {
  // exponent vanishes at x = m, so the hazard is 1/b
  const GompertzLaw at_mode({88.72, 88.72, 10.0});
  CHECK(at_mode.hazard(0.0) == doctest::Approx(0.1).epsilon(1e-14));

  const GompertzLaw law(kTable1);
  CHECK(law.hazard(0.0) ==
        doctest::Approx(0.1 * std::exp(-2.372)).epsilon(1e-14));
}

TEST_CASE("hazard is strictly increasing") {
  const GompertzLaw law(kTable1);
  for (double t = 0.0; t < 60.0; t += 1.0) CHECK(law.hazard(t + 1.0) > law.hazard(t));
}

TEST_CASE("log survival closed form and footer probabilities") {
  const GompertzLaw law(kTable1);
  CHECK(law.log_survival(0.0) == 0.0);
  CHECK(law.survival(0.0) == 1.0);
  // 15- and 30-year survival from 65 on this basis
  CHECK(law.survival(15.0) == doctest::Approx(0.722).epsilon(8e-4));
  CHECK(law.survival(30.0) == doctest::Approx(0.168).epsilon(4e-3));
  CHECK(law.survival(15.0) == doctest::Approx(0.72265703593946).epsilon(1e-12));
  CHECK(law.survival(30.0) == doctest::Approx(0.16854286680139).epsilon(1e-12));
}

TEST_CASE("survival strictly decreases to zero") {
  const GompertzLaw law(kTable1);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 80.0);
  for (int i = 0; i < 200; ++i) {
    double s = uni(rng), t = uni(rng);
    if (s > t) std::swap(s, t);
    if (s == t) continue;
    CHECK(law.survival(s) > law.survival(t));
  }
  CHECK(law.survival(200.0) < 1e-300);
}

TEST_CASE("log survival matches the integrated hazard") {
  const GompertzLaw law(kTable1);
  for (double t : {1.0, 10.0, 25.0, 40.0, 60.0}) {
    const std::size_t nodes = 200'001;
    const double h = t / static_cast<double>(nodes - 1);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double v = law.hazard(h * static_cast<double>(i));
      acc += (i == 0 || i == nodes - 1) ? 0.5L * v : v;
    }
    const double integral = static_cast<double>(acc * h);
    CHECK(law.log_survival(t) == doctest::Approx(-integral).epsilon(1e-8));
  }
}

TEST_CASE("time_for_survival inverts survival") {
  const GompertzLaw law(kTable1);
  CHECK(law.time_for_survival(1.0) == 0.0);
  CHECK(law.time_for_survival(0.722) == doctest::Approx(15.0).epsilon(2e-3));

  for (double p : {1.0, 0.9999, 0.722, 0.5, 0.1, 1e-3, 1e-6}) {
    const double t = law.time_for_survival(p);
    CHECK(law.survival(t) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("parameter and domain errors") {
  CHECK_THROWS_AS(GompertzLaw({65.0, 88.72, 0.0}), invalid_parameter);
  CHECK_THROWS_AS(GompertzLaw({65.0, 88.72, -1.0}), invalid_parameter);
  CHECK_THROWS_AS(GompertzLaw({-2.0, 88.72, 10.0}), invalid_parameter);

  const GompertzLaw law(kTable1);
  CHECK_THROWS_AS(law.hazard(-1.0), invalid_parameter);
  CHECK_THROWS_AS(law.hazard(std::nan("")), invalid_parameter);
  CHECK_THROWS_AS(law.log_survival(-0.5), invalid_parameter);
  CHECK_THROWS_AS(law.time_for_survival(0.0), tontine::domain_error);
  CHECK_THROWS_AS(law.time_for_survival(1.5), tontine::domain_error);
  CHECK_THROWS_AS(law.time_for_survival(-0.1), tontine::domain_error);
}
