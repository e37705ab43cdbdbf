#pragma once

// Bessel cross-products on the annulus 1 < r < kappa.
//
//   G^{m,k}(kappa, z) = J^{(m)}(z) Y^{(k)}(kappa z) - J^{(k)}(kappa z) Y^{(m)}(z)
//
//   dirichlet  f = G^{0,0}
//   neumann    g = G^{1,1}
//   oblique    g = G^{1,1} - i(beta nu / z) G^{0,1} - i(beta nu / (kappa z)) G^{1,0}
//                  - (beta^2 nu^2 / (kappa z^2)) G^{0,0}
//
// Derivative orders refer to the function at its own argument, not d/dz.

#include "annulus/bessel_core.hpp"
#include "annulus/types.hpp"

namespace annulus {

/// The four G^{m,k} built from one BesselEval at z and one at kappa z.
struct CrossTerms {
  Complex g00, g01, g10, g11;
};

/// A cross-product value together with its analytic z-derivative.
struct CrossValue {
  Complex value;
  Complex dz;
};

enum class CrossKind { dirichlet, neumann, oblique };

/// Builds the four cross terms from Bessel data at z (inner) and kappa z (outer).
CrossTerms cross_terms(const BesselEval& inner, const BesselEval& outer);

/// G^{m,k}_nu(kappa, z) for m, k in {0, 1}.
Complex cross_g(int m, int k, const ProblemParams& p, Complex z);

Complex dirichlet_cross(const ProblemParams& p, Complex z);
Complex neumann_cross(const ProblemParams& p, Complex z);
Complex oblique_cross(const ProblemParams& p, Complex z);
Complex oblique_cross_dz(const ProblemParams& p, Complex z);

/// kappa z^2 g: removes the 1/z^2 pole without moving any nonzero zero.
Complex oblique_cross_scaled(const ProblemParams& p, Complex z);

/// Value and analytic derivative from a single pair of Bessel evaluations.
CrossValue evaluate_cross(CrossKind kind, const ProblemParams& p, Complex z);
CrossValue evaluate_oblique_scaled(const ProblemParams& p, Complex z);

}  // namespace annulus
