#pragma once

// Closed-form series for the zeros of the annulus cross-products:
// Hankel coefficient sequences, McMahon expansions of the large zeros and the
// regular perturbation series of the exceptional (finite-in-the-limit) zero.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "annulus/cross_products.hpp"
#include "annulus/types.hpp"

namespace annulus {

enum class CoeffKind { a, b, c };

/// a_k(nu), b_k(nu) or c_k(beta, nu) for k = 0..upto. a and b are real.
struct CoeffSeq {
  CoeffKind kind;
  double nu;
  double beta;  // only used for kind c
  std::vector<Complex> values;
};

/// McMahon pair for z = u + p/u + (q - p^2)/u^3, u = s pi / (kappa - 1).
struct McMahonPQ {
  CrossKind problem;
  Complex p;
  Complex q;
};

/// Coefficients of z = z0 + z1 eps + z2 eps^2, eps = kappa - 1.
struct PerturbationResult {
  Complex z0;
  Complex z1;
  Complex z2;
};

struct PhaseShift {
  double exact;  // nu beta log kappa
  double thin;   // nu beta (kappa - 1)
};

inline constexpr int kMaxCoeffIndex = 8;
inline constexpr int kMaxThetaOrder = 3;

CoeffSeq coeff_seq(CoeffKind kind, double nu, double beta, int upto);

McMahonPQ mcmahon_pq(CrossKind problem, const ProblemParams& p);

/// Three-term McMahon truncation for branch s >= 1.
Complex mcmahon_zero(int s, const ProblemParams& p, const McMahonPQ& pq);

/// Ordinary partial Bell polynomial: sum over compositions of k into n
/// positive parts of prod x_{part}. x[0] holds x_1.
Complex bell_hat(int k, int n, std::span<const Complex> x);

/// Solves the eps^1, eps^2, eps^3 coefficient equations of kappa z^2 g = 0.
PerturbationResult solve_perturbation(const ProblemParams& p);

/// The eps^1..eps^3 coefficients a_1, a_2, a_3 of kappa z^2 g / (2/(pi z0))
/// at the given series coefficients. All three vanish at solve_perturbation().
std::array<Complex, 3> perturbation_equations(const ProblemParams& p, Complex z0, Complex z1, Complex z2);

/// nu sqrt(beta^2+1) [1 - eps/2 + (7 - 4 i beta nu) eps^2 / 24].
Complex exceptional_zero_series(const ProblemParams& p);

/// Exceptional Neumann zero from the inverse series
/// nu / z = sqrt(kappa) [1 + eps^2/(12 kappa) + (8nu^2 - 3) eps^4 / (480 kappa^2)].
double buchholz_z0n(double nu, double kappa);

/// Coefficients theta_0..theta_order of the phase theta in powers of 1/z;
/// even entries are zero.
std::vector<Complex> theta_series(const ProblemParams& p, int order);

PhaseShift spiral_phase_shift(const ProblemParams& p);

namespace detail {

/// u_{k,j} = B_{k,j}(z1, ..., z_{k-j+1}) / j!; zs[i] holds z_i (zs[0] = z0).
Complex perturbation_u(int k, int j, std::span<const Complex> zs);

/// v_{m,n} written as the binomial double sum over Bell polynomials.
Complex perturbation_v(int m, int n, std::span<const Complex> zs);

}  // namespace detail

}  // namespace annulus
