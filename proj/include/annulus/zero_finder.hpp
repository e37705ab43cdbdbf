#pragma once

// Real zeros of the Dirichlet/Neumann cross-products, Newton refinement of
// complex zeros of the oblique cross-product, and continuation of the zero
// branches z_s in the parameter t = nu beta.

#include <optional>
#include <string_view>
#include <vector>

#include "annulus/cross_products.hpp"
#include "annulus/types.hpp"

namespace annulus {

struct NewtonConfig {
  double tol_newton = 1e-11;
  int max_iter = 30;
  double step_init = 0.05;  // continuation step in t
  double step_min = 1e-5;

  /// Throws DomainError unless tol_newton > 0, max_iter >= 1 and 0 < step_min < step_init.
  void validate() const;
};

/// Residual of a candidate zero: |g| / max(1, |dg/dz| |z|).
double zero_residual(const CrossValue& g, Complex z);

struct RefineResult {
  Complex z;
  double residual;
  int iterations;
};

/// Which function Newton steps on. The convergence test always uses g itself.
enum class NewtonForm { plain, scaled };

/// First `count` positive zeros, increasing. For neumann with nu > 0 the list
/// starts with the exceptional zero. Only dirichlet and neumann are accepted.
std::vector<double> find_real_zeros(CrossKind problem, const ProblemParams& p, int count);

/// Newton iteration on the oblique cross-product. A limit with Re z < 0 is
/// reflected to -z, which is also a zero.
RefineResult refine_zero(const ProblemParams& p, Complex z_guess, const NewtonConfig& cfg = {},
                         NewtonForm form = NewtonForm::plain);

enum class BranchStatus { completed, step_failed, left_domain };

std::string_view to_string(BranchStatus status);

struct BranchPoint {
  double t;
  Complex z;
  double residual;
};

struct ZeroBranch {
  int s;
  ProblemParams params;  // beta is unused; beta = t / nu along the path
  std::vector<BranchPoint> path;
  BranchStatus status;
};

/// Traces z_s from the s-th Neumann zero (t = 0) to t_max.
ZeroBranch continue_branch(int s, double nu, double kappa, double t_max, const NewtonConfig& cfg = {});

/// Radius used by the branch-jump guard around a predictor z_pred at parameter beta.
double branch_guard_radius(int s, const ProblemParams& p, Complex z_pred);

struct DerivativeSample {
  double t;
  Complex dz_dt;
};

/// Three-point differences on the (possibly nonuniform) path: central inside,
/// second-order one-sided at the ends.
std::vector<DerivativeSample> branch_derivative(const ZeroBranch& b);

enum class ExtremumKind { min, max };

struct Extremum {
  double t_star;
  double im_z;
};

/// Local extrema of Im z along the path, in t order. Wiggles smaller than
/// `prominence` times the range of Im z are discarded.
std::vector<Extremum> im_extrema(const ZeroBranch& b, ExtremumKind which, double prominence = 1e-4);

/// First extremum of the requested kind, refined by a parabola through the
/// three surrounding path points. Throws NotFoundError if there is none.
Extremum locate_im_extremum(const ZeroBranch& b, ExtremumKind which);

/// A point with t > 0 and |Im z| <= im_tol, found by bisecting t between two
/// path points where Im z changes sign. Empty if Im z never changes sign.
std::optional<BranchPoint> locate_real_crossing(const ZeroBranch& b, const NewtonConfig& cfg = {},
                                                double im_tol = 1e-6);

}  // namespace annulus
