#include "annulus/cross_products.hpp"

#include <array>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr Complex kI{0.0, 1.0};

/// C, C', C'' for J and Y at one argument.
struct Derivs {
  std::array<Complex, 3> j;
  std::array<Complex, 3> y;
};

Derivs derivs_at(double nu, Complex arg) {
  const BesselEval e = eval_bessel(nu, arg);
  const BesselSecond s = eval_second_derivs(nu, arg, e);
  return {{e.j, e.j_prime, s.j_second}, {e.y, e.y_prime, s.y_second}};
}

struct Pair {
  Derivs inner;  // at z
  Derivs outer;  // at kappa z
  double kappa;

  Complex g(int m, int k) const { return inner.j[m] * outer.y[k] - outer.j[k] * inner.y[m]; }

  Complex dg(int m, int k) const {
    return inner.j[m + 1] * outer.y[k] + kappa * inner.j[m] * outer.y[k + 1] -
           kappa * outer.j[k + 1] * inner.y[m] - outer.j[k] * inner.y[m + 1];
  }
};

Pair evaluate_pair(const ProblemParams& p, Complex z) {
  if (z == Complex(0.0, 0.0)) throw DomainError("cross-product: z = 0 is excluded");
  return {derivs_at(p.nu(), z), derivs_at(p.nu(), p.kappa() * z), p.kappa()};
}

bool oblique_terms_vanish(const ProblemParams& p) { return p.beta() == 0.0 || p.nu() == 0.0; }

CrossValue oblique_from_pair(const ProblemParams& p, Complex z, const Pair& pr) {
  if (oblique_terms_vanish(p)) return {pr.g(1, 1), pr.dg(1, 1)};
  const double bn = p.beta() * p.nu();
  const double kappa = p.kappa();
  const Complex g00 = pr.g(0, 0), g01 = pr.g(0, 1), g10 = pr.g(1, 0), g11 = pr.g(1, 1);
  const Complex d00 = pr.dg(0, 0), d01 = pr.dg(0, 1), d10 = pr.dg(1, 0), d11 = pr.dg(1, 1);
  const Complex inv_z = 1.0 / z;
  const Complex inv_z2 = inv_z * inv_z;
  const Complex value =
      g11 - kI * bn * inv_z * g01 - kI * (bn / kappa) * inv_z * g10 - (bn * bn / kappa) * inv_z2 * g00;
  const Complex dz = d11 - kI * bn * (d01 * inv_z - g01 * inv_z2) -
                     kI * (bn / kappa) * (d10 * inv_z - g10 * inv_z2) -
                     (bn * bn / kappa) * (d00 * inv_z2 - 2.0 * g00 * inv_z2 * inv_z);
  return {value, dz};
}

}  // namespace

CrossTerms cross_terms(const BesselEval& inner, const BesselEval& outer) {
  auto g = [&](const Complex& ji, const Complex& yo, const Complex& jo, const Complex& yi) { return ji * yo - jo * yi; };
  return {g(inner.j, outer.y, outer.j, inner.y), g(inner.j, outer.y_prime, outer.j_prime, inner.y),
          g(inner.j_prime, outer.y, outer.j, inner.y_prime),
          g(inner.j_prime, outer.y_prime, outer.j_prime, inner.y_prime)};
}

Complex cross_g(int m, int k, const ProblemParams& p, Complex z) {
  if (m < 0 || m > 1 || k < 0 || k > 1) throw DomainError("cross_g: derivative counts must be 0 or 1");
  if (z == Complex(0.0, 0.0)) throw DomainError("cross_g: z = 0 is excluded");
  const CrossTerms t = cross_terms(eval_bessel(p.nu(), z), eval_bessel(p.nu(), p.kappa() * z));
  if (m == 0) return k == 0 ? t.g00 : t.g01;
  return k == 0 ? t.g10 : t.g11;
}

Complex dirichlet_cross(const ProblemParams& p, Complex z) { return cross_g(0, 0, p, z); }

Complex neumann_cross(const ProblemParams& p, Complex z) { return cross_g(1, 1, p, z); }

Complex oblique_cross(const ProblemParams& p, Complex z) { return evaluate_cross(CrossKind::oblique, p, z).value; }

Complex oblique_cross_dz(const ProblemParams& p, Complex z) { return evaluate_cross(CrossKind::oblique, p, z).dz; }

Complex oblique_cross_scaled(const ProblemParams& p, Complex z) {
  return p.kappa() * z * z * oblique_cross(p, z);
}

CrossValue evaluate_cross(CrossKind kind, const ProblemParams& p, Complex z) {
  const Pair pr = evaluate_pair(p, z);
  switch (kind) {
    case CrossKind::dirichlet:
      return {pr.g(0, 0), pr.dg(0, 0)};
    case CrossKind::neumann:
      return {pr.g(1, 1), pr.dg(1, 1)};
    case CrossKind::oblique:
      break;
  }
  return oblique_from_pair(p, z, pr);
}

CrossValue evaluate_oblique_scaled(const ProblemParams& p, Complex z) {
  const CrossValue g = evaluate_cross(CrossKind::oblique, p, z);
  const double kappa = p.kappa();
  return {kappa * z * z * g.value, 2.0 * kappa * z * g.value + kappa * z * z * g.dz};
}

}  // namespace annulus
