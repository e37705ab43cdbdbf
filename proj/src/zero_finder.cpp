#include "annulus/zero_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "annulus/asymptotic_zeros.hpp"
#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDerivativeFloor = 1e-300;
constexpr double kRealZeroTol = 1e-12;
constexpr int kGrowAfter = 5;

struct RealSample {
  double f;
  double df;
};

RealSample real_cross(CrossKind problem, const ProblemParams& p, double x) {
  const CrossValue v = evaluate_cross(problem, p, Complex(x, 0.0));
  return {v.value.real(), v.dz.real()};
}

double real_scale(const RealSample& s, double x) { return std::max(1.0, std::abs(s.df) * x); }

/// Bisection down to a few ulps of x, then Newton steps kept inside the bracket.
double polish_real_zero(CrossKind problem, const ProblemParams& p, double lo, double hi, double f_lo) {
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = real_cross(problem, p, mid).f;
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  RealSample s = real_cross(problem, p, x);
  for (int i = 0; i < 4 && std::abs(s.f) > kRealZeroTol * real_scale(s, x); ++i) {
    if (std::abs(s.df) < kDerivativeFloor) break;
    const double next = x - s.f / s.df;
    if (!(next >= lo && next <= hi)) break;
    const RealSample s_next = real_cross(problem, p, next);
    if (std::abs(s_next.f) >= std::abs(s.f)) break;
    x = next;
    s = s_next;
  }
  return x;
}

struct NewtonOutcome {
  Complex z;
  double residual;
  int iterations;
  bool converged;
};

/// Newton on g (or kappa z^2 g) without reflecting into Re z >= 0.
NewtonOutcome newton(const ProblemParams& p, Complex z, const NewtonConfig& cfg, NewtonForm form) {
  const double kappa = p.kappa();
  auto evaluate = [&](Complex w) {
    if (w == Complex(0.0, 0.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
      throw NoConvergenceError("refine_zero: iterate left the evaluable region", w, 0);
    }
    try {
      return evaluate_cross(CrossKind::oblique, p, w);
    } catch (const DomainError& e) {
      throw NoConvergenceError(std::string("refine_zero: ") + e.what(), w, 0);
    } catch (const OverflowError& e) {
      throw NoConvergenceError(std::string("refine_zero: ") + e.what(), w, 0);
    }
  };
  auto step = [&](Complex w, const CrossValue& g) {
    Complex f = g.value;
    Complex df = g.dz;
    if (form == NewtonForm::scaled) {
      f = kappa * w * w * g.value;
      df = 2.0 * kappa * w * g.value + kappa * w * w * g.dz;
    }
    if (std::abs(df) < kDerivativeFloor) throw DerivativeUnderflowError("refine_zero: |dg/dz| underflow", w);
    return w - f / df;
  };

  CrossValue g = evaluate(z);
  double res = zero_residual(g, z);
  for (int it = 0; it <= cfg.max_iter; ++it) {
    if (res <= cfg.tol_newton) {
      // One extra step usually buys several more digits.
      try {
        const Complex z_next = step(z, g);
        const CrossValue g_next = evaluate(z_next);
        const double res_next = zero_residual(g_next, z_next);
        if (res_next <= res) return {z_next, res_next, it + 1, true};
      } catch (const std::exception&) {
      }
      return {z, res, it, true};
    }
    if (it == cfg.max_iter) break;
    z = step(z, g);
    g = evaluate(z);
    res = zero_residual(g, z);
  }
  return {z, res, cfg.max_iter, false};
}

/// Neumann zero number s (s = 0 is the exceptional zero, which needs nu > 0).
double neumann_start(int s, const ProblemParams& p) {
  if (p.nu() > 0.0) return find_real_zeros(CrossKind::neumann, p, s + 1).back();
  return find_real_zeros(CrossKind::neumann, p, s).back();
}

}  // namespace

void NewtonConfig::validate() const {
  if (!(tol_newton > 0.0)) throw DomainError("NewtonConfig: tol_newton must be > 0");
  if (max_iter < 1) throw DomainError("NewtonConfig: max_iter must be >= 1");
  if (!(step_min > 0.0) || !(step_min < step_init)) {
    throw DomainError("NewtonConfig: need 0 < step_min < step_init");
  }
}

double zero_residual(const CrossValue& g, Complex z) {
  return std::abs(g.value) / std::max(1.0, std::abs(g.dz) * std::abs(z));
}

std::vector<double> find_real_zeros(CrossKind problem, const ProblemParams& p, int count) {
  if (problem == CrossKind::oblique) throw DomainError("find_real_zeros: only dirichlet and neumann have real zeros");
  if (count < 1) throw DomainError("find_real_zeros: count must be >= 1");
  const double nu = p.nu();
  const double kappa = p.kappa();

  // Below nu / kappa neither J nor Y oscillates on [x, kappa x]; the exceptional
  // Neumann zero sits near nu / sqrt(kappa).
  const double period = kPi / (kappa - 1.0);
  double x = 0.05 * period;
  if (nu > 0.0) x = problem == CrossKind::neumann ? 0.25 * nu / kappa : std::max(x, 0.5 * nu / kappa);
  // The local zero spacing never drops below pi / sqrt(kappa^2 - 1).
  const double max_step = std::min(period / 32.0, kPi / (16.0 * std::sqrt(kappa * kappa - 1.0)));
  const double x_limit = (count + 2) * period + 2.0 * nu + 10.0;

  std::vector<double> zeros;
  zeros.reserve(count);
  double f = real_cross(problem, p, x).f;
  while (static_cast<int>(zeros.size()) < count) {
    if (x > x_limit || !std::isfinite(f)) {
      throw BracketError("find_real_zeros: no sign change found for zero index " + std::to_string(zeros.size()),
                         static_cast<int>(zeros.size()));
    }
    const double h = std::min(max_step, 0.05 * x);
    const double x_next = x + h;
    const double f_next = real_cross(problem, p, x_next).f;
    if (f_next == 0.0) {
      zeros.push_back(x_next);
      x = x_next + 0.5 * h;
      f = real_cross(problem, p, x).f;
      continue;
    }
    if ((f < 0.0) != (f_next < 0.0)) zeros.push_back(polish_real_zero(problem, p, x, x_next, f));
    x = x_next;
    f = f_next;
  }
  return zeros;
}

RefineResult refine_zero(const ProblemParams& p, Complex z_guess, const NewtonConfig& cfg, NewtonForm form) {
  cfg.validate();
  if (z_guess == Complex(0.0, 0.0)) throw DomainError("refine_zero: z_guess = 0 is excluded");
  if (z_guess.real() < 0.0) throw DomainError("refine_zero: z_guess must have Re z >= 0");
  const NewtonOutcome out = newton(p, z_guess, cfg, form);
  if (!out.converged) {
    throw NoConvergenceError("refine_zero: no convergence in " + std::to_string(cfg.max_iter) + " iterations",
                             out.z, out.iterations);
  }
  const Complex z = out.z.real() < 0.0 ? -out.z : out.z;
  return {z, out.residual, out.iterations};
}

std::string_view to_string(BranchStatus status) {
  switch (status) {
    case BranchStatus::completed:
      return "completed";
    case BranchStatus::step_failed:
      return "step-failed";
    case BranchStatus::left_domain:
      return "left-domain";
  }
  return "unknown";
}

double branch_guard_radius(int s, const ProblemParams& p, Complex z_pred) {
  const double fallback = 0.5 * kPi / (p.kappa() - 1.0);
  const McMahonPQ pq = mcmahon_pq(CrossKind::oblique, p);
  double nearest = std::numeric_limits<double>::infinity();
  for (int n : {s - 1, s + 1}) {
    if (n < 1) continue;
    const double u = n * kPi / (p.kappa() - 1.0);
    const double correction = std::abs(pq.p / u) + std::abs((pq.q - pq.p * pq.p) / (u * u * u));
    if (correction >= fallback) continue;  // the expansion is meaningless here
    nearest = std::min(nearest, std::abs(z_pred - mcmahon_zero(n, p, pq)));
  }
  return std::isfinite(nearest) ? 0.5 * nearest : fallback;
}

ZeroBranch continue_branch(int s, double nu, double kappa, double t_max, const NewtonConfig& cfg) {
  cfg.validate();
  if (s < 0) throw DomainError("continue_branch: s must be >= 0");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw DomainError("continue_branch: t_max must be finite and >= 0");
  const ProblemParams base(nu, kappa, 0.0);
  if (s == 0 && !(nu > 0.0)) throw DomainError("continue_branch: the exceptional branch s = 0 needs nu > 0");

  ZeroBranch branch{s, base, {}, BranchStatus::completed};
  const Complex z_start(neumann_start(s, base), 0.0);
  branch.path.push_back({0.0, z_start, zero_residual(evaluate_cross(CrossKind::oblique, base, z_start), z_start)});
  if (t_max == 0.0) return branch;
  if (nu == 0.0) {
    // t = nu beta stays 0; the zero does not move.
    branch.path.push_back({t_max, z_start, branch.path.back().residual});
    return branch;
  }

  const NewtonForm form = s == 0 ? NewtonForm::scaled : NewtonForm::plain;
  double h = cfg.step_init;
  int successes = 0;
  while (branch.path.back().t < t_max) {
    const BranchPoint& last = branch.path.back();
    // Split the last stretch evenly so no step falls far below h; a sliver of
    // a step at the end would wreck the one-sided derivative there.
    const double remaining = t_max - last.t;
    const double t_new = remaining <= h ? t_max : remaining < 2.0 * h ? last.t + 0.5 * remaining : last.t + h;
    Complex z_pred = last.z;
    if (branch.path.size() >= 2) {
      const BranchPoint& prev = branch.path[branch.path.size() - 2];
      z_pred += (last.z - prev.z) * ((t_new - last.t) / (last.t - prev.t));
    }
    const ProblemParams p = base.with_beta(t_new / nu);

    std::optional<NewtonOutcome> accepted;
    try {
      const NewtonOutcome out = newton(p, z_pred, cfg, form);
      if (out.converged && std::abs(out.z - z_pred) <= branch_guard_radius(s, p, z_pred)) accepted = out;
    } catch (const NoConvergenceError&) {
    } catch (const DerivativeUnderflowError&) {
    }

    if (!accepted) {
      h *= 0.5;
      successes = 0;
      if (h < cfg.step_min) {
        branch.status = BranchStatus::step_failed;
        return branch;
      }
      continue;
    }
    if (accepted->z.real() < 0.0) {
      branch.status = BranchStatus::left_domain;
      return branch;
    }
    branch.path.push_back({t_new, accepted->z, accepted->residual});
    if (++successes >= kGrowAfter) {
      h = std::min(2.0 * h, cfg.step_init);
      successes = 0;
    }
  }
  return branch;
}

std::vector<DerivativeSample> branch_derivative(const ZeroBranch& b) {
  const auto& path = b.path;
  const std::size_t n = path.size();
  if (n < 3) throw DomainError("branch_derivative: path needs at least 3 points");

  // Weights of the quadratic through three nodes, differentiated at node `at`.
  auto three_point = [&](std::size_t i0, std::size_t at) {
    const double t0 = path[i0].t, t1 = path[i0 + 1].t, t2 = path[i0 + 2].t;
    const double x = path[at].t;
    const double w0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
    const double w1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
    const double w2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
    // The weights sum to zero; differencing against z(at) keeps that exact.
    const Complex za = path[at].z;
    return w0 * (path[i0].z - za) + w1 * (path[i0 + 1].z - za) + w2 * (path[i0 + 2].z - za);
  };

  std::vector<DerivativeSample> out;
  out.reserve(n);
  out.push_back({path[0].t, three_point(0, 0)});
  for (std::size_t i = 1; i + 1 < n; ++i) out.push_back({path[i].t, three_point(i - 1, i)});
  out.push_back({path[n - 1].t, three_point(n - 3, n - 1)});
  return out;
}

namespace {

struct Turn {
  std::size_t index;
  bool is_max;
};

/// Alternating extrema of Im z with the endpoints as anchors. The adjacent
/// pair with the smallest swing is merged away while that swing is below
/// `threshold`; a swing touching an endpoint removes only the interior turn.
std::vector<Turn> significant_turns(const std::vector<BranchPoint>& path, double threshold) {
  const std::size_t n = path.size();
  if (n < 3) return {};
  auto im = [&](std::size_t i) { return path[i].z.imag(); };

  std::vector<std::size_t> nodes{0};
  int direction = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = im(i + 1) - im(i);
    if (d == 0.0) continue;
    const int dir = d > 0.0 ? 1 : -1;
    if (direction != 0 && dir != direction) nodes.push_back(i);
    direction = dir;
  }
  nodes.push_back(n - 1);

  while (nodes.size() > 2) {
    std::size_t weakest = 0;
    double weakest_swing = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      const double swing = std::abs(im(nodes[k + 1]) - im(nodes[k]));
      if (swing < weakest_swing) {
        weakest_swing = swing;
        weakest = k;
      }
    }
    if (weakest_swing >= threshold) break;
    const auto first = nodes.begin() + static_cast<std::ptrdiff_t>(weakest);
    if (weakest == 0) {
      nodes.erase(first + 1);
    } else if (weakest + 2 == nodes.size()) {
      nodes.erase(first);
    } else {
      nodes.erase(first, first + 2);
    }
  }

  std::vector<Turn> turns;
  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
    turns.push_back({nodes[k], im(nodes[k]) > im(nodes[k - 1])});
  }
  return turns;
}

double im_range(const std::vector<BranchPoint>& path) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& pt : path) {
    lo = std::min(lo, pt.z.imag());
    hi = std::max(hi, pt.z.imag());
  }
  return path.empty() ? 0.0 : hi - lo;
}

/// Vertex of the parabola through the three path points around index i.
Extremum parabolic_vertex(const std::vector<BranchPoint>& path, std::size_t i) {
  const double t0 = path[i - 1].t, t1 = path[i].t, t2 = path[i + 1].t;
  const double y0 = path[i - 1].z.imag(), y1 = path[i].z.imag(), y2 = path[i + 1].z.imag();
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double a = (d12 - d01) / (t2 - t0);
  if (a == 0.0) return {t1, y1};
  const double b = d01 - a * (t0 + t1);
  const double t_star = std::clamp(-b / (2.0 * a), t0, t2);
  const double y_star = y1 + (t_star - t1) * (d01 + a * (t_star - t0));
  return {t_star, y_star};
}

}  // namespace

std::vector<Extremum> im_extrema(const ZeroBranch& b, ExtremumKind which, double prominence) {
  const double threshold = prominence * im_range(b.path) + 1e-300;
  std::vector<Extremum> out;
  for (const Turn& turn : significant_turns(b.path, threshold)) {
    if (turn.is_max != (which == ExtremumKind::max)) continue;
    out.push_back({b.path[turn.index].t, b.path[turn.index].z.imag()});
  }
  return out;
}

Extremum locate_im_extremum(const ZeroBranch& b, ExtremumKind which) {
  const double threshold = 1e-4 * im_range(b.path) + 1e-300;
  for (const Turn& turn : significant_turns(b.path, threshold)) {
    if (turn.is_max != (which == ExtremumKind::max)) continue;
    return parabolic_vertex(b.path, turn.index);
  }
  throw NotFoundError(std::string("locate_im_extremum: no local ") + (which == ExtremumKind::max ? "maximum" : "minimum") +
                      " of Im z on the path");
}

std::optional<BranchPoint> locate_real_crossing(const ZeroBranch& b, const NewtonConfig& cfg, double im_tol) {
  const auto& path = b.path;
  const double nu = b.params.nu();
  if (nu == 0.0) return std::nullopt;
  const NewtonForm form = b.s == 0 ? NewtonForm::scaled : NewtonForm::plain;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (std::abs(path[i].z.imag()) <= im_tol && path[i].t > 0.0) return path[i];
    if (i < 2) continue;
    BranchPoint lo = path[i - 1];
    BranchPoint hi = path[i];
    if (lo.z.imag() == 0.0 || (lo.z.imag() < 0.0) == (hi.z.imag() < 0.0)) continue;
    for (int iter = 0; iter < 60; ++iter) {
      const double w = lo.z.imag() / (lo.z.imag() - hi.z.imag());
      const double frac = std::clamp(w, 0.1, 0.9);
      const double t = lo.t + frac * (hi.t - lo.t);
      const Complex guess = lo.z + frac * (hi.z - lo.z);
      const NewtonOutcome out = newton(b.params.with_beta(t / nu), guess, cfg, form);
      if (!out.converged) break;
      const BranchPoint mid{t, out.z, out.residual};
      if (std::abs(mid.z.imag()) <= im_tol) return mid;
      if ((mid.z.imag() < 0.0) == (lo.z.imag() < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  return std::nullopt;
}

}  // namespace annulus
