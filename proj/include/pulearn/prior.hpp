#pragma once

#include <algorithm>

#include "pulearn/error.hpp"

namespace pulearn {

// Positive-class prior pi_p; the negative prior is 1 - pi_p by construction.
struct ClassPrior {
  double pi_p = 0.5;
  double pi_n() const { return 1.0 - pi_p; }
};

inline void check_prior(const ClassPrior& prior) {
  if (!(prior.pi_p > 0.0 && prior.pi_p < 1.0))
    fail(Errc::invalid_argument, "class prior must lie strictly in (0, 1)");
}

// Clamp an arbitrary estimate (e.g. a misspecified multiple of the true
// ratio) into the open interval so it is always a usable prior.
inline ClassPrior clamped_prior(double value) {
  return ClassPrior{std::min(std::max(value, 1e-6), 1.0 - 1e-6)};
}

}  // namespace pulearn
