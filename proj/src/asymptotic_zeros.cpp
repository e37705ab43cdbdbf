#include "annulus/asymptotic_zeros.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/series_coeffs.hpp"

namespace annulus {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex to_complex(const coeffs::Gaussian<double>& g) { return {g.re, g.im}; }

void require_positive_order(double nu, const char* op) {
  if (!(nu > 0.0)) throw DomainError(std::string(op) + ": nu must be > 0 (nu = 0 has no exceptional zero)");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

CoeffSeq coeff_seq(CoeffKind kind, double nu, double beta, int upto) {
  if (upto < 0 || upto > kMaxCoeffIndex) {
    throw DomainError("coeff_seq: upto must lie in [0, " + std::to_string(kMaxCoeffIndex) + "]");
  }
  CoeffSeq seq{kind, nu, beta, {}};
  seq.values.reserve(upto + 1);
  for (int k = 0; k <= upto; ++k) {
    switch (kind) {
      case CoeffKind::a:
        seq.values.emplace_back(coeffs::hankel_a(nu, k), 0.0);
        break;
      case CoeffKind::b:
        seq.values.emplace_back(coeffs::hankel_b(nu, k), 0.0);
        break;
      case CoeffKind::c:
        seq.values.push_back(to_complex(coeffs::oblique_c(nu, beta, k)));
        break;
    }
  }
  return seq;
}

McMahonPQ mcmahon_pq(CrossKind problem, const ProblemParams& p) {
  const double nu = p.nu();
  const double kappa = p.kappa();
  switch (problem) {
    case CrossKind::dirichlet:
      return {problem, coeffs::dirichlet_p(nu, kappa), coeffs::dirichlet_q(nu, kappa)};
    case CrossKind::neumann:
      return {problem, coeffs::neumann_p(nu, kappa), coeffs::neumann_q(nu, kappa)};
    case CrossKind::oblique:
      break;
  }
  return {problem, to_complex(coeffs::oblique_p(nu, p.beta(), kappa)),
          to_complex(coeffs::oblique_q(nu, p.beta(), kappa))};
}

Complex mcmahon_zero(int s, const ProblemParams& p, const McMahonPQ& pq) {
  if (s < 1) throw DomainError("mcmahon_zero: s must be >= 1 (s = 0 is the exceptional zero)");
  const double u = s * std::numbers::pi / (p.kappa() - 1.0);
  return u + pq.p / u + (pq.q - pq.p * pq.p) / (u * u * u);
}

Complex bell_hat(int k, int n, std::span<const Complex> x) {
  if (n < 0 || k < n) throw std::out_of_range("bell_hat: requires 0 <= n <= k");
  if (n == 0) return k == 0 ? Complex(1.0) : Complex(0.0);
  const int width = k - n + 1;
  if (static_cast<int>(x.size()) < width) throw std::out_of_range("bell_hat: x needs at least k - n + 1 entries");

  // prev[r] holds B_{r, c-1} while column c is built.
  std::vector<Complex> prev(k + 1, Complex(0.0));
  prev[0] = 1.0;
  for (int c = 1; c <= n; ++c) {
    std::vector<Complex> cur(k + 1, Complex(0.0));
    for (int r = c; r <= k; ++r) {
      Complex sum = 0.0;
      for (int j = 1; j <= r - c + 1 && j <= width; ++j) sum += x[j - 1] * prev[r - j];
      cur[r] = sum;
    }
    prev.swap(cur);
  }
  return prev[k];
}

std::array<Complex, 3> perturbation_equations(const ProblemParams& p, Complex z0, Complex z1, Complex z2) {
  const double nu = p.nu();
  const double beta = p.beta();
  const double b2 = beta * beta;
  const double nu2 = nu * nu;
  const double a = nu2 * (b2 + 1.0);
  const Complex z02 = z0 * z0;

  const Complex a1 = z0 * (z02 - a);
  const Complex a2 = 0.5 * z0 * (a + z02 + 4.0 * z0 * z1);
  const Complex bracket = b2 * nu2 * nu2 - b2 * nu2 * z02 + 2.0 * b2 * nu2 - 2.0 * kI * beta * nu * z02 + nu2 * nu2 -
                          2.0 * nu2 * z02 + 2.0 * nu2 + z02 * z02 - 6.0 * z0 * z1 - 12.0 * z0 * z2 - 6.0 * z1 * z1;
  const Complex a3 = -(z0 / 6.0) * bracket;
  return {a1, a2, a3};
}

PerturbationResult solve_perturbation(const ProblemParams& p) {
  require_positive_order(p.nu(), "solve_perturbation");
  const double nu = p.nu();
  const double beta = p.beta();
  const double a = nu * nu * (beta * beta + 1.0);

  // a_1 = 0: positive root.
  const Complex z0 = std::sqrt(a);
  // a_2 = 0 is linear in z1.
  const Complex z1 = -(a + z0 * z0) / (4.0 * z0);
  // a_3 = 0 is linear in z2: evaluate at z2 = 0 and z2 = 1 to read off the line.
  const Complex at0 = perturbation_equations(p, z0, z1, 0.0)[2];
  const Complex slope = perturbation_equations(p, z0, z1, 1.0)[2] - at0;
  const Complex z2 = -at0 / slope;
  return {z0, z1, z2};
}

Complex exceptional_zero_series(const ProblemParams& p) {
  require_positive_order(p.nu(), "exceptional_zero_series");
  const double nu = p.nu();
  const double beta = p.beta();
  const double eps = p.kappa() - 1.0;
  const Complex bracket = 1.0 - eps / 2.0 + (7.0 - 4.0 * kI * beta * nu) * (eps * eps / 24.0);
  return nu * std::sqrt(beta * beta + 1.0) * bracket;
}

double buchholz_z0n(double nu, double kappa) {
  require_positive_order(nu, "buchholz_z0n");
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw DomainError("buchholz_z0n: kappa must be > 1");
  const double eps = kappa - 1.0;
  const double eps2 = eps * eps;
  const double series = 1.0 + eps2 / (12.0 * kappa) + (8.0 * nu * nu - 3.0) * eps2 * eps2 / (480.0 * kappa * kappa);
  return nu / (std::sqrt(kappa) * series);
}

std::vector<Complex> theta_series(const ProblemParams& p, int order) {
  if (order < 0 || order > kMaxThetaOrder) throw DomainError("theta_series: order must lie in [0, 3]");
  const double kappa = p.kappa();
  const double nu = p.nu();
  const double beta = p.beta();
  std::vector<Complex> theta(order + 1, Complex(0.0));
  if (order >= 1) theta[1] = (1.0 - kappa) / kappa * to_complex(coeffs::oblique_c(nu, beta, 1));
  if (order >= 3) {
    const double k3 = kappa * kappa * kappa;
    theta[3] = (k3 - 1.0) / k3 * to_complex(coeffs::oblique_cubic_bracket(nu, beta));
  }
  return theta;
}

PhaseShift spiral_phase_shift(const ProblemParams& p) {
  const double t = p.nu() * p.beta();
  return {t * std::log(p.kappa()), t * (p.kappa() - 1.0)};
}

namespace detail {

Complex perturbation_u(int k, int j, std::span<const Complex> zs) {
  if (zs.empty()) throw DomainError("perturbation_u: zs must hold z0");
  return bell_hat(k, j, zs.subspan(1)) / factorial(j);
}

Complex perturbation_v(int m, int n, std::span<const Complex> zs) {
  if (n < 0 || m < n) throw DomainError("perturbation_v: requires 0 <= n <= m");
  if (zs.empty()) throw DomainError("perturbation_v: zs must hold z0");
  Complex sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    Complex inner = 0.0;
    for (int t = 0; t <= m - n; ++t) {
      inner += bell_hat(t + k, k, zs.subspan(1)) * bell_hat(m - t - k, n - k, zs);
    }
    sum += binomial(n, k) * inner;
  }
  return sum / factorial(n);
}

}  // namespace detail

}  // namespace annulus
