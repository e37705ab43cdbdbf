#pragma once

// Coefficient formulas shared by the Hankel-type Bessel expansions and the
// McMahon zero expansions. Everything is templated on the scalar field so the
// same formulas run in double (library) and in exact rationals (tests).

#include <cassert>

namespace annulus::coeffs {

/// a + ib over an arbitrary ordered field. Only ring operations are needed.
template <class T>
struct Gaussian {
  T re{};
  T im{};

  friend Gaussian operator+(const Gaussian& x, const Gaussian& y) { return {x.re + y.re, x.im + y.im}; }
  friend Gaussian operator-(const Gaussian& x, const Gaussian& y) { return {x.re - y.re, x.im - y.im}; }
  friend Gaussian operator*(const Gaussian& x, const Gaussian& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend Gaussian operator*(const T& s, const Gaussian& x) { return {s * x.re, s * x.im}; }
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

/// a_k(nu) = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k), a_0 = 1.
template <class T>
T hankel_a(const T& nu, int k) {
  assert(k >= 0);
  const T mu = T(4) * nu * nu;
  T value(1);
  for (int j = 1; j <= k; ++j) {
    value *= mu - T((2 * j - 1) * (2 * j - 1));
    value /= T(8 * j);
  }
  return value;
}

/// b_k(nu) = a_{k-1}(nu) (4nu^2 + 4k^2 - 1) / (8k), b_0 = 1.
template <class T>
T hankel_b(const T& nu, int k) {
  assert(k >= 0);
  if (k == 0) return T(1);
  const T mu = T(4) * nu * nu;
  return hankel_a(nu, k - 1) * (mu + T(4 * k * k - 1)) / T(8 * k);
}

/// c_k(beta, nu) = b_k + i beta nu a_{k-1} for k >= 1, c_0 = 1.
template <class T>
Gaussian<T> oblique_c(const T& nu, const T& beta, int k) {
  if (k == 0) return {T(1), T(0)};
  return {hankel_b(nu, k), beta * nu * hankel_a(nu, k - 1)};
}

/// (kappa^3 - 1) / (kappa^3 (kappa - 1)), the common prefactor of every q.
template <class T>
T q_prefactor(const T& kappa) {
  const T k3 = kappa * kappa * kappa;
  return (k3 - T(1)) / (k3 * (kappa - T(1)));
}

template <class T>
T dirichlet_p(const T& nu, const T& kappa) {
  return (T(4) * nu * nu - T(1)) / (T(8) * kappa);
}

template <class T>
T dirichlet_q(const T& nu, const T& kappa) {
  const T nu2 = nu * nu;
  return q_prefactor(kappa) * (T(16) * nu2 * nu2 - T(104) * nu2 + T(25)) / T(384);
}

template <class T>
T neumann_p(const T& nu, const T& kappa) {
  return (T(4) * nu * nu + T(3)) / (T(8) * kappa);
}

template <class T>
T neumann_q(const T& nu, const T& kappa) {
  const T nu2 = nu * nu;
  return q_prefactor(kappa) * (T(16) * nu2 * nu2 + T(184) * nu2 - T(63)) / T(384);
}

/// c_1^3/3 + c_3 - c_2 c_1, the bracket shared by the 1/z^3 phase term and q.
template <class T>
Gaussian<T> oblique_cubic_bracket(const T& nu, const T& beta) {
  const auto c1 = oblique_c(nu, beta, 1);
  const auto c2 = oblique_c(nu, beta, 2);
  const auto c3 = oblique_c(nu, beta, 3);
  const auto c1_cubed = c1 * c1 * c1;
  return Gaussian<T>{c1_cubed.re / T(3), c1_cubed.im / T(3)} + c3 - c2 * c1;
}

template <class T>
Gaussian<T> oblique_p(const T& nu, const T& beta, const T& kappa) {
  const auto c1 = oblique_c(nu, beta, 1);
  return {c1.re / kappa, c1.im / kappa};
}

template <class T>
Gaussian<T> oblique_q(const T& nu, const T& beta, const T& kappa) {
  return (-q_prefactor(kappa)) * oblique_cubic_bracket(nu, beta);
}

}  // namespace annulus::coeffs
