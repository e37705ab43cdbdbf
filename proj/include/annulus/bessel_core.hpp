#pragma once

// Bessel functions J_nu, Y_nu of real order nu >= 0 and complex argument,
// with first and second derivatives.
//
// Evaluation paths (Re z >= 0; Re z < 0 is mapped back by analytic
// continuation across the imaginary axis):
//   * |z| >= kHankelRadius and the Hankel expansion at order nu reaches
//     double precision: direct Hankel expansion of J, Y, J', Y'.
//   * |z| >= kHankelRadius, nu <= kRecurrenceRatio |z| and z not too close
//     to the imaginary axis: Hankel expansion at the fractional orders mu,
//     mu + 1 followed by forward recurrence.
//   * otherwise: ascending series accumulated in __float128.
//
// Validated box: |z| <= 50, nu <= 20. Outside the box the Hankel paths stay
// accurate while nu^2 << |z|; the series path degrades like e^{|Re z|}.

#include <optional>

#include "annulus/types.hpp"

namespace annulus {

struct BesselEval {
  Complex j;
  Complex y;
  Complex j_prime;
  Complex y_prime;
};

struct BesselSecond {
  Complex j_second;
  Complex y_second;
};

/// Partial sums of the large-argument auxiliary series. phi and phi_tilde
/// include the even coefficients up to index 2*order, psi and psi_tilde the
/// odd ones up to 2*order - 1.
struct AsymptoticAux {
  Complex phi;
  Complex psi;
  Complex phi_tilde;
  Complex psi_tilde;
  Complex omega;  // z - pi nu / 2 - pi / 4
  int truncation_order;
};

inline constexpr double kHankelRadius = 18.0;
inline constexpr double kRecurrenceRatio = 0.9;
/// Recurrence is skipped when nu^2 |Im z| / |z|^2 exceeds this.
inline constexpr double kRecurrenceGrowthLimit = 3.0;
/// Orders closer than this to an integer use the integer-order series for Y.
inline constexpr double kIntegerOrderGuard = 1e-13;
inline constexpr int kMaxAuxOrder = 8;

/// J, Y, J', Y' at (nu, z). Throws DomainError for nu < 0, z = 0, z on the
/// negative real axis or non-finite input; OverflowError when a value does
/// not fit in a double.
BesselEval eval_bessel(double nu, Complex z);

/// Second derivatives from Bessel's equation: C'' = (nu^2/z^2 - 1) C - C'/z.
BesselSecond eval_second_derivs(double nu, Complex z, const BesselEval& e);

AsymptoticAux asymptotic_aux(double nu, Complex z, int order);

namespace detail {

/// Ascending-series path only (no region selection). Requires Re z >= 0.
BesselEval eval_bessel_series(double nu, Complex z);

/// Direct Hankel path at order nu; empty when the divergent expansion does
/// not reach ~1e-15 before its terms start growing. Requires Re z > 0 or
/// a nonzero imaginary part.
std::optional<BesselEval> eval_bessel_hankel(double nu, Complex z);

/// Hankel at mu = nu - floor(nu) and mu + 1, then forward recurrence. Empty
/// outside nu <= kRecurrenceRatio |z| or where the recurrence is unstable.
std::optional<BesselEval> eval_bessel_hankel_recurrence(double nu, Complex z);

}  // namespace detail

}  // namespace annulus
