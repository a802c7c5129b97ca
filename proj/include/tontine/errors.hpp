#pragma once

#include <stdexcept>
#include <string>

namespace tontine {

// Base for all engine errors.
class error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed model parameters (b <= 0, non-finite inputs, n < 1, ...).
class invalid_parameter : public error {
  using error::error;
};

// Arguments outside an operation's mathematical domain (p outside [0,1], ...).
class domain_error : public error {
  using error::error;
};

// Quadrature failed to reach the requested tolerance. Carries the best
// estimate achieved so callers can decide whether it is still usable.
class accuracy_error : public error {
public:
  accuracy_error(const std::string& what, double estimate, double error_bound)
      : error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

private:
  double estimate_;
  double error_bound_;
};

// A requested quantity is infinite (e.g. natural-tontine utility with
// gamma > 2 on an uncapped horizon).
class divergence_error : public error {
  using error::error;
};

}  // namespace tontine
