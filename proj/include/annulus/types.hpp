#pragma once

#include <complex>

namespace annulus {

using Complex = std::complex<double>;

/// Order, thickness and oblique tangent of one annulus problem.
///
/// The checked constructor enforces nu >= 0, kappa > 1 and beta >= 0, all
/// finite. Tests that need kappa <= 1 or beta < 0 (the symmetry identities,
/// the Wronskian limit kappa -> 1) go through unchecked().
class ProblemParams {
 public:
  ProblemParams(double nu, double kappa, double beta = 0.0);

  static ProblemParams unchecked(double nu, double kappa, double beta = 0.0) noexcept {
    return ProblemParams(nu, kappa, beta, Unchecked{});
  }

  double nu() const noexcept { return nu_; }
  double kappa() const noexcept { return kappa_; }
  double beta() const noexcept { return beta_; }

  /// Same problem with another oblique tangent; validation follows the receiver.
  ProblemParams with_beta(double beta) const;

 private:
  struct Unchecked {};
  ProblemParams(double nu, double kappa, double beta, Unchecked) noexcept
      : nu_(nu), kappa_(kappa), beta_(beta), checked_(false) {}

  double nu_;
  double kappa_;
  double beta_;
  bool checked_ = true;
};

}  // namespace annulus
