#include "annulus/types.hpp"

#include <cmath>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {

ProblemParams::ProblemParams(double nu, double kappa, double beta) : nu_(nu), kappa_(kappa), beta_(beta) {
  if (!std::isfinite(nu) || nu < 0.0) throw DomainError("ProblemParams: nu must be finite and >= 0, got " + std::to_string(nu));
  if (!std::isfinite(kappa) || kappa <= 1.0) throw DomainError("ProblemParams: kappa must be finite and > 1, got " + std::to_string(kappa));
  if (!std::isfinite(beta) || beta < 0.0) throw DomainError("ProblemParams: beta must be finite and >= 0, got " + std::to_string(beta));
}

ProblemParams ProblemParams::with_beta(double beta) const {
  if (checked_) return ProblemParams(nu_, kappa_, beta);
  return unchecked(nu_, kappa_, beta);
}

}  // namespace annulus
