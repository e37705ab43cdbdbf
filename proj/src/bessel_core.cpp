#include "annulus/bessel_core.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/series_coeffs.hpp"

namespace annulus {

namespace {

using quad = __float128;

const quad kPiQ = M_PIq;
const quad kEulerGammaQ = 0.5772156649015328606065120900824024Q;

struct QComplex {
  quad re = 0;
  quad im = 0;

  QComplex() = default;
  QComplex(quad r, quad i = 0) : re(r), im(i) {}
  explicit QComplex(Complex z) : re(z.real()), im(z.imag()) {}

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QComplex operator*(quad s, const QComplex& a) { return {s * a.re, s * a.im}; }
  friend QComplex operator/(const QComplex& a, quad s) { return {a.re / s, a.im / s}; }
  friend QComplex operator/(const QComplex& a, const QComplex& b) {
    // Smith's algorithm keeps the intermediate products in range.
    if (fabsq(b.re) >= fabsq(b.im)) {
      const quad r = b.im / b.re;
      const quad d = b.re + b.im * r;
      return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    const quad r = b.re / b.im;
    const quad d = b.re * r + b.im;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
  }

  quad abs() const { return hypotq(re, im); }
  Complex to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

QComplex qlog(const QComplex& w) { return {logq(w.abs()), atan2q(w.im, w.re)}; }

QComplex qexp(const QComplex& w) {
  const quad m = expq(w.re);
  return {m * cosq(w.im), m * sinq(w.im)};
}

QComplex qpow_int(QComplex base, int n) {
  QComplex out(1);
  while (n > 0) {
    if (n & 1) out = out * base;
    base = base * base;
    n >>= 1;
  }
  return out;
}

/// Stop once past the peak of the terms and below 1e-36 of the partial sum.
bool series_done(int k, quad k_peak, const QComplex& term, const QComplex& sum) {
  if (static_cast<quad>(k) < k_peak) return false;
  return term.abs() <= 1e-36Q * sum.abs();
}

constexpr int kMaxSeriesTerms = 2000;
constexpr double kHankelConditionLimit = 1e3;

/// sum_k (-z^2/4)^k / (k! (alpha+1)_k); alpha + 1 must avoid non-positive integers.
QComplex pochhammer_series(quad alpha, const QComplex& h2neg, quad k_peak) {
  QComplex term(1);
  QComplex sum(1);
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    term = term * h2neg / (static_cast<quad>(k) * (alpha + static_cast<quad>(k)));
    sum += term;
    if (series_done(k, k_peak, term, sum)) break;
  }
  return sum;
}

struct QuadPair {
  QComplex j, y, j_next, y_next;  // orders nu and nu + 1
};

QuadPair integer_order_series(int n, const QComplex& z) {
  const QComplex h = z / 2;
  const QComplex h2neg = -(h * h);
  const QComplex log_h = qlog(h);
  const quad k_peak = z.abs() / 2 + 2;

  auto j_and_y = [&](int order) {
    // J_n = h^n sum h2neg^k / (k! (n+k)!)
    // Y_n = (2/pi) J_n log h - (1/pi) sum_{k<n} (n-k-1)!/k! h^{2k-n}
    //       - (1/pi) h^n sum (psi(k+1) + psi(n+k+1)) h2neg^k / (k! (n+k)!)
    quad inv_nfact = 1;
    for (int i = 2; i <= order; ++i) inv_nfact /= static_cast<quad>(i);
    QComplex term(inv_nfact);
    quad harm_k = 0;
    quad harm_nk = 0;
    for (int i = 1; i <= order; ++i) harm_nk += 1 / static_cast<quad>(i);
    QComplex sum_j = term;
    QComplex sum_psi = (2 * (-kEulerGammaQ) + harm_k + harm_nk) * term;
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
      term = term * h2neg / (static_cast<quad>(k) * static_cast<quad>(order + k));
      harm_k += 1 / static_cast<quad>(k);
      harm_nk += 1 / static_cast<quad>(order + k);
      sum_j += term;
      const QComplex psi_term = (2 * (-kEulerGammaQ) + harm_k + harm_nk) * term;
      sum_psi += psi_term;
      if (series_done(k, k_peak, term, sum_j) && series_done(k, k_peak, psi_term, sum_psi)) break;
    }
    const QComplex h_n = qpow_int(h, order);
    const QComplex jn = h_n * sum_j;

    QComplex finite;
    if (order > 0) {
      // k = 0 term: (n-1)! h^{-n}, then ratio (h^2 k) / (n-k) ... built upward.
      quad fact_nm1 = 1;
      for (int i = 2; i < order; ++i) fact_nm1 *= static_cast<quad>(i);
      QComplex ft = fact_nm1 * (QComplex(1) / h_n);
      const QComplex hh = h * h;
      finite = ft;
      for (int k = 1; k < order; ++k) {
        ft = ft * hh / (static_cast<quad>(k) * static_cast<quad>(order - k));
        finite += ft;
      }
    }
    const QComplex yn = (2 / kPiQ) * (jn * log_h) - (1 / kPiQ) * finite - (1 / kPiQ) * (h_n * sum_psi);
    return std::pair{jn, yn};
  };

  const auto [j0, y0] = j_and_y(n);
  const auto [j1, y1] = j_and_y(n + 1);
  return {j0, y0, j1, y1};
}

QuadPair fractional_order_series(double nu, const QComplex& z) {
  const quad q_nu = nu;
  const QComplex h = z / 2;
  const QComplex h2neg = -(h * h);
  const quad k_peak = z.abs() / 2 + 2;
  const QComplex h_pow_nu = qexp(q_nu * qlog(h));
  const QComplex h_pow_nu1 = h_pow_nu * h;

  auto j_of = [&](quad alpha, const QComplex& h_pow) {
    return (1 / tgammaq(alpha + 1)) * (h_pow * pochhammer_series(alpha, h2neg, k_peak));
  };

  const QComplex j_pos = j_of(q_nu, h_pow_nu);
  const QComplex j_pos1 = j_of(q_nu + 1, h_pow_nu1);
  const QComplex j_neg = j_of(-q_nu, QComplex(1) / h_pow_nu);
  const QComplex j_neg1 = j_of(-q_nu - 1, QComplex(1) / h_pow_nu1);

  const quad c = cosq(q_nu * kPiQ);
  const quad s = sinq(q_nu * kPiQ);
  const QComplex y_pos = (c * j_pos - j_neg) / s;
  const QComplex y_pos1 = (c * j_pos1 + j_neg1) / s;
  return {j_pos, y_pos, j_pos1, y_pos1};
}

BesselEval finish_from_orders(double nu, Complex z, Complex j, Complex y, Complex j1, Complex y1) {
  const Complex nu_over_z = nu / z;
  return {j, y, nu_over_z * j - j1, nu_over_z * y - y1};
}

bool all_finite(const BesselEval& e) {
  for (const Complex& c : {e.j, e.y, e.j_prime, e.y_prime}) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

std::string describe(double nu, Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "nu=" << nu << ", z=(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

struct HankelSums {
  Complex p, q, r, s;
  bool ok;
};

/// Adaptive Hankel sums P, Q (from a_k) and R, S (from b_k).
HankelSums hankel_sums(double nu, Complex z) {
  const double mu = 4.0 * nu * nu;
  const Complex zinv = 1.0 / z;
  const double abs_z = std::abs(z);
  HankelSums out{1.0, 0.0, 1.0, 0.0, false};
  double a_prev = 1.0;
  Complex power = 1.0;
  double prev_mag = 1.0;
  double max_mag = 1.0;
  double abs_sum_a = 1.0;
  double abs_sum_b = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double a_k = a_prev * (mu - odd * odd) / (8.0 * k);
    const double b_k = a_prev * (mu + 4.0 * k * k - 1.0) / (8.0 * k);
    power *= zinv;
    const double mag = std::max(std::abs(a_k), std::abs(b_k)) / std::pow(abs_z, k);
    const bool past_turning = odd > 2.0 * nu;
    if (past_turning && mag > prev_mag) break;  // asymptotic divergence sets in
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      out.p += sign * a_k * power;
      out.r += sign * b_k * power;
    } else {
      out.q += sign * a_k * power;
      out.s += sign * b_k * power;
    }
    max_mag = std::max(max_mag, mag);
    abs_sum_a += std::abs(a_k) / std::pow(abs_z, k);
    abs_sum_b += std::abs(b_k) / std::pow(abs_z, k);
    prev_mag = mag;
    a_prev = a_k;
    if (mag < 1e-17) {
      out.ok = true;
      break;
    }
  }
  // Early growth of the terms costs digits through cancellation.
  if (!out.ok) out.ok = prev_mag < 1e-15;
  if (max_mag > 100.0) out.ok = false;

  // H1 ~ (P + iQ) e^{i omega}, H2 ~ (P - iQ) e^{-i omega}. Off the real axis one
  // of them dominates, and its sum can be far smaller than its terms.
  const double w1 = std::exp(-z.imag() - std::abs(z.imag()));
  const double w2 = std::exp(z.imag() - std::abs(z.imag()));
  const Complex i(0.0, 1.0);
  const double dom_a = std::max(std::abs(out.p + i * out.q) * w1, std::abs(out.p - i * out.q) * w2);
  const double dom_b = std::max(std::abs(out.r + i * out.s) * w1, std::abs(out.r - i * out.s) * w2);
  if (abs_sum_a * (w1 + w2) > kHankelConditionLimit * dom_a) out.ok = false;
  if (abs_sum_b * (w1 + w2) > kHankelConditionLimit * dom_b) out.ok = false;
  return out;
}

std::optional<std::pair<Complex, Complex>> hankel_jy(double nu, Complex z) {
  const HankelSums h = hankel_sums(nu, z);
  if (!h.ok) return std::nullopt;
  const Complex omega = z - (nu / 2.0 + 0.25) * std::numbers::pi;
  const Complex amp = std::sqrt(2.0 / (std::numbers::pi * z));
  const Complex c = std::cos(omega);
  const Complex s = std::sin(omega);
  return std::pair{amp * (h.p * c - h.q * s), amp * (h.p * s + h.q * c)};
}

/// Forward recurrence of J loses about nu^2 |Im z| / |z|^2 nepers towards
/// the imaginary axis, where J_nu behaves like a decaying I_nu. The series
/// covers that region well because J itself is exponentially large there.
bool recurrence_is_stable(double nu, Complex z) {
  return nu * nu * std::abs(z.imag()) <= kRecurrenceGrowthLimit * std::norm(z);
}

BesselEval eval_right_half(double nu, Complex z) {
  if (std::abs(z) >= kHankelRadius) {
    if (auto e = detail::eval_bessel_hankel(nu, z)) return *e;
    if (auto e = detail::eval_bessel_hankel_recurrence(nu, z)) return *e;
  }
  return detail::eval_bessel_series(nu, z);
}

}  // namespace

namespace detail {

BesselEval eval_bessel_series(double nu, Complex z) {
  const QComplex qz(z);
  const double n_round = std::round(nu);
  QuadPair pair;
  if (std::abs(nu - n_round) < kIntegerOrderGuard) {
    pair = integer_order_series(static_cast<int>(n_round), qz);
  } else {
    pair = fractional_order_series(nu, qz);
  }
  const QComplex nu_over_z = QComplex(static_cast<quad>(nu)) / qz;
  const QComplex jp = nu_over_z * pair.j - pair.j_next;
  const QComplex yp = nu_over_z * pair.y - pair.y_next;
  return {pair.j.to_double(), pair.y.to_double(), jp.to_double(), yp.to_double()};
}

std::optional<BesselEval> eval_bessel_hankel(double nu, Complex z) {
  const HankelSums h = hankel_sums(nu, z);
  if (!h.ok) return std::nullopt;
  const Complex omega = z - (nu / 2.0 + 0.25) * std::numbers::pi;
  const Complex amp = std::sqrt(2.0 / (std::numbers::pi * z));
  const Complex c = std::cos(omega);
  const Complex s = std::sin(omega);
  return BesselEval{amp * (h.p * c - h.q * s), amp * (h.p * s + h.q * c),
                    -amp * (h.r * s + h.s * c), amp * (h.r * c - h.s * s)};
}

std::optional<BesselEval> eval_bessel_hankel_recurrence(double nu, Complex z) {
  if (nu > kRecurrenceRatio * std::abs(z) || !recurrence_is_stable(nu, z)) return std::nullopt;
  const double base = std::floor(nu);
  const double mu = nu - base;
  auto lo = hankel_jy(mu, z);
  auto hi = hankel_jy(mu + 1.0, z);
  if (!lo || !hi) return std::nullopt;
  Complex j_prev = lo->first, y_prev = lo->second;
  Complex j_cur = hi->first, y_cur = hi->second;
  // After the loop (j_prev, j_cur) hold orders (nu, nu + 1).
  const int steps = static_cast<int>(base);
  for (int i = 0; i < steps; ++i) {
    const Complex factor = 2.0 * (mu + 1.0 + i) / z;
    const Complex j_next = factor * j_cur - j_prev;
    const Complex y_next = factor * y_cur - y_prev;
    j_prev = j_cur;
    y_prev = y_cur;
    j_cur = j_next;
    y_cur = y_next;
  }
  return finish_from_orders(nu, z, j_prev, y_prev, j_cur, y_cur);
}

}  // namespace detail

BesselEval eval_bessel(double nu, Complex z) {
  if (!std::isfinite(nu) || nu < 0.0) throw DomainError("eval_bessel: order must be finite and >= 0, got " + describe(nu, z));
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("eval_bessel: non-finite argument, " + describe(nu, z));
  if (z == Complex(0.0, 0.0)) throw DomainError("eval_bessel: z = 0 is a singular point of Y");
  if (z.imag() == 0.0 && z.real() < 0.0) throw DomainError("eval_bessel: z on the negative real axis (branch cut), " + describe(nu, z));

  BesselEval out;
  if (z.real() >= 0.0) {
    out = eval_right_half(nu, z);
  } else {
    // z = w e^{i m pi} with Re w > 0:
    //   J(z) = e^{i m nu pi} J(w),  Y(z) = e^{-i m nu pi} Y(w) + 2 i m cos(nu pi) J(w).
    const double m = z.imag() > 0.0 ? 1.0 : -1.0;
    const BesselEval w = eval_right_half(nu, -z);
    const Complex phase = std::polar(1.0, m * nu * std::numbers::pi);
    const Complex cross(0.0, 2.0 * m * std::cos(nu * std::numbers::pi));
    out.j = phase * w.j;
    out.j_prime = -(phase * w.j_prime);
    out.y = std::conj(phase) * w.y + cross * w.j;
    out.y_prime = -(std::conj(phase) * w.y_prime + cross * w.j_prime);
  }
  if (!all_finite(out)) throw OverflowError("eval_bessel: result overflows double precision, " + describe(nu, z));
  return out;
}

BesselSecond eval_second_derivs(double nu, Complex z, const BesselEval& e) {
  if (z == Complex(0.0, 0.0)) throw DomainError("eval_second_derivs: z = 0");
  const Complex coeff = nu * nu / (z * z) - 1.0;
  return {coeff * e.j - e.j_prime / z, coeff * e.y - e.y_prime / z};
}

AsymptoticAux asymptotic_aux(double nu, Complex z, int order) {
  if (order < 0 || order > kMaxAuxOrder) throw DomainError("asymptotic_aux: order must be in [0, 8]");
  if (z == Complex(0.0, 0.0)) throw DomainError("asymptotic_aux: z = 0");
  AsymptoticAux out{1.0, 0.0, 1.0, 0.0, z - (nu / 2.0 + 0.25) * std::numbers::pi, order};
  const Complex zinv = 1.0 / z;
  Complex power = 1.0;
  for (int k = 1; k <= 2 * order; ++k) {
    power *= zinv;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    const double a_k = coeffs::hankel_a(nu, k);
    const double b_k = coeffs::hankel_b(nu, k);
    if (k % 2 == 0) {
      out.phi += sign * a_k * power;
      out.phi_tilde += sign * b_k * power;
    } else {
      out.psi += sign * a_k * power;
      out.psi_tilde += sign * b_k * power;
    }
  }
  return out;
}

}  // namespace annulus
