#include "annulus/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "annulus/asymptotic_zeros.hpp"
#include "annulus/cross_products.hpp"
#include "annulus/errors.hpp"
#include "annulus/zero_finder.hpp"

namespace annulus::cli {

namespace {

using nlohmann::json;

/// Bad flag values; the message names the flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double km1_min = 0.02;
  double km1_max = 0.2;
  int km1_count = 20;
  double t_min = 0.0;
  double t_max = 40.0;
  int t_count = 200;
};

struct RunConfig {
  std::string command;
  std::string kind = "oblique";
  double nu = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double z_re = 0.0;
  double z_im = 0.0;
  std::vector<int> s_list{0};
  double t_max = 10.0;
  GridSpec grid;
  std::string output;
  std::string format = "csv";
  NewtonConfig newton;
};

json config_json(const RunConfig& c) {
  json j{{"command", c.command}, {"nu", c.nu}, {"format", c.format}};
  if (c.command != "grid") j["kappa"] = c.kappa;
  if (c.command == "eval" || c.command == "zeros") j["kind"] = c.kind;
  if (c.command == "eval" || c.command == "zeros") j["beta"] = c.beta;
  if (c.command == "eval") j["z"] = {c.z_re, c.z_im};
  if (c.command != "eval") j["s"] = c.s_list;
  if (c.command == "branch") j["t_max"] = c.t_max;
  if (c.command == "grid") {
    j["grid"] = {{"kappa_minus_1", {c.grid.km1_min, c.grid.km1_max}},
                 {"kappa_minus_1_count", c.grid.km1_count},
                 {"t", {c.grid.t_min, c.grid.t_max}},
                 {"t_count", c.grid.t_count}};
  }
  if (c.command != "eval") {
    j["newton"] = {{"tol_newton", c.newton.tol_newton},
                   {"max_iter", c.newton.max_iter},
                   {"step_init", c.newton.step_init},
                   {"step_min", c.newton.step_min}};
  }
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> trailer;  // CSV comment lines after the data
  json extra = json::object();       // the same information for JSON
  bool config_line = true;
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_table(const Table& t, const RunConfig& c, std::ostream& out) {
  if (c.format == "json") {
    json doc{{"config", config_json(c)}, {"columns", t.columns}};
    json rows = json::array();
    for (const auto& row : t.rows) {
      json r = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) r[t.columns[i]] = row[i];
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    for (const auto& [key, value] : t.extra.items()) doc[key] = value;
    out << doc.dump(2) << '\n';
    return;
  }
  if (t.config_line) out << "# config: " << config_json(c).dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  for (const auto& line : t.trailer) out << "# " << line << '\n';
}

CrossKind parse_kind(const std::string& kind) {
  if (kind == "dirichlet") return CrossKind::dirichlet;
  if (kind == "neumann") return CrossKind::neumann;
  return CrossKind::oblique;
}

ProblemParams make_params(const RunConfig& c) {
  if (!std::isfinite(c.nu) || c.nu < 0.0) throw UsageError("--nu must be finite and >= 0");
  if (!std::isfinite(c.kappa) || c.kappa <= 1.0) throw UsageError("--kappa must be finite and > 1");
  if (!std::isfinite(c.beta) || c.beta < 0.0) throw UsageError("--beta must be finite and >= 0");
  return ProblemParams(c.nu, c.kappa, c.beta);
}

void check_s_list(const RunConfig& c) {
  if (c.s_list.empty()) throw UsageError("--s needs at least one branch index");
  for (int s : c.s_list) {
    if (s < 0) throw UsageError("--s: branch indices must be >= 0");
    if (s == 0 && !(c.nu > 0.0)) throw UsageError("--s: the exceptional branch s=0 needs --nu > 0");
  }
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const ProblemParams p = make_params(c);
  const Complex z(c.z_re, c.z_im);
  if (!std::isfinite(c.z_re) || !std::isfinite(c.z_im)) throw UsageError("--z-re/--z-im must be finite");
  if (z == Complex(0.0, 0.0)) throw UsageError("--z-re/--z-im: z=0 is excluded");
  const Complex v = evaluate_cross(parse_kind(c.kind), p, z).value;
  Table t{{"re", "im"}, {{v.real(), v.imag()}}, {}, json::object(), false};
  write_table(t, c, out);
  return kOk;
}

int cmd_zeros(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ProblemParams p = make_params(c);
  const CrossKind kind = parse_kind(c.kind);
  check_s_list(c);
  if (kind == CrossKind::dirichlet && std::count(c.s_list.begin(), c.s_list.end(), 0) > 0) {
    throw UsageError("--s: dirichlet has no exceptional zero, use s >= 1");
  }
  const McMahonPQ pq = mcmahon_pq(kind, p);

  // Real problems: the refined zero is the matching entry of the bracketed list.
  std::vector<double> real_zeros;
  if (kind != CrossKind::oblique) {
    const int max_s = *std::max_element(c.s_list.begin(), c.s_list.end());
    const int offset = (kind == CrossKind::neumann && p.nu() > 0.0) ? 0 : 1;
    try {
      real_zeros = find_real_zeros(kind, p, max_s + 1 - offset);
    } catch (const BracketError& e) {
      err << "error: " << e.what() << '\n';
    }
  }

  Table t{{"s", "estimate_re", "estimate_im", "refined_re", "refined_im", "residual"}, {}, {}, json::object(), true};
  bool failed = false;
  for (int s : c.s_list) {
    const Complex estimate = s == 0 ? exceptional_zero_series(p) : mcmahon_zero(s, p, pq);
    try {
      Complex refined;
      if (kind == CrossKind::oblique) {
        refined = refine_zero(p, estimate, c.newton, s == 0 ? NewtonForm::scaled : NewtonForm::plain).z;
      } else {
        const int offset = (kind == CrossKind::neumann && p.nu() > 0.0) ? 0 : 1;
        const std::size_t index = static_cast<std::size_t>(s - offset);
        if (index >= real_zeros.size()) throw BracketError("zero not bracketed", s);
        refined = real_zeros[index];
      }
      const double residual = zero_residual(evaluate_cross(kind, p, refined), refined);
      t.rows.push_back({double(s), estimate.real(), estimate.imag(), refined.real(), refined.imag(), residual});
    } catch (const std::exception& e) {
      failed = true;
      err << "error: s=" << s << ": " << e.what() << '\n';
    }
  }
  write_table(t, c, out);
  return failed ? kRefineFailed : kOk;
}

int cmd_branch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  make_params(c);
  check_s_list(c);
  if (!std::isfinite(c.t_max) || c.t_max < 0.0) throw UsageError("--t-max must be finite and >= 0");

  Table t{{"s", "t", "beta", "z_re", "z_im", "residual"}, {}, {}, json::object(), true};
  json statuses = json::array();
  bool partial = false;
  for (int s : c.s_list) {
    const ZeroBranch b = continue_branch(s, c.nu, c.kappa, c.t_max, c.newton);
    for (const BranchPoint& pt : b.path) {
      const double beta = c.nu > 0.0 ? pt.t / c.nu : 0.0;
      t.rows.push_back({double(s), pt.t, beta, pt.z.real(), pt.z.imag(), pt.residual});
    }
    const std::string status(to_string(b.status));
    t.trailer.push_back("branch s=" + std::to_string(s) + " status=" + status);
    statuses.push_back({{"s", s}, {"status", status}, {"t_end", b.path.back().t}});
    if (b.status != BranchStatus::completed) {
      partial = true;
      err << "warning: branch s=" << s << " stopped at t=" << format_number(b.path.back().t) << " (" << status << ")\n";
    }
  }
  t.extra["branches"] = std::move(statuses);
  write_table(t, c, out);
  return partial ? kPartial : kOk;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
  return v;
}

struct GridColumn {
  std::vector<std::vector<double>> rows;
  std::string failure;
};

GridColumn grid_column(int s, double nu, double km1, const std::vector<double>& ts, const NewtonConfig& cfg) {
  GridColumn col;
  try {
    const ZeroBranch b = continue_branch(s, nu, 1.0 + km1, ts.back(), cfg);
    if (b.status != BranchStatus::completed) {
      col.failure = std::string(to_string(b.status)) + " at t=" + format_number(b.path.back().t);
      return col;
    }
    const std::vector<DerivativeSample> d = branch_derivative(b);
    std::size_t k = 0;
    for (double t : ts) {
      while (k + 2 < d.size() && d[k + 1].t < t) ++k;
      const double w = std::clamp((t - d[k].t) / (d[k + 1].t - d[k].t), 0.0, 1.0);
      const Complex dz = d[k].dz_dt + w * (d[k + 1].dz_dt - d[k].dz_dt);
      col.rows.push_back({km1, t, std::abs(dz.real()), std::abs(dz.imag())});
    }
  } catch (const std::exception& e) {
    col.failure = e.what();
  }
  return col;
}

int cmd_grid(const RunConfig& c, std::ostream& out, std::ostream& err) {
  make_params(c);
  if (c.s_list.size() != 1) throw UsageError("--s: grid takes exactly one branch index");
  check_s_list(c);
  const GridSpec& g = c.grid;
  if (g.km1_count < 2) throw UsageError("--km1-count must be >= 2");
  if (g.t_count < 2) throw UsageError("--t-count must be >= 2");
  if (!(g.km1_min > 0.0) || !(g.km1_max > g.km1_min)) throw UsageError("--km1-min/--km1-max: need 0 < min < max");
  if (!(g.t_min >= 0.0) || !(g.t_max > g.t_min)) throw UsageError("--t-min/--t-max: need 0 <= min < max");

  const std::vector<double> km1s = linspace(g.km1_min, g.km1_max, g.km1_count);
  const std::vector<double> ts = linspace(g.t_min, g.t_max, g.t_count);
  std::vector<GridColumn> columns(km1s.size());

  const unsigned workers = std::min<unsigned>(thread_count_from_env(), static_cast<unsigned>(km1s.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < km1s.size(); i = next++) {
      columns[i] = grid_column(c.s_list.front(), c.nu, km1s[i], ts, c.newton);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  Table t{{"kappa_minus_1", "t", "abs_re_dzdt", "abs_im_dzdt"}, {}, {}, json::object(), true};
  json failures = json::array();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (!columns[i].failure.empty()) {
      const std::string line = "column kappa_minus_1=" + format_number(km1s[i]) + " failed: " + columns[i].failure;
      t.trailer.push_back(line);
      failures.push_back({{"kappa_minus_1", km1s[i]}, {"reason", columns[i].failure}});
      err << "warning: " << line << '\n';
      continue;
    }
    for (auto& row : columns[i].rows) t.rows.push_back(std::move(row));
  }
  t.extra["failed_columns"] = failures;
  write_table(t, c, out);
  return failures.empty() ? kOk : kPartial;
}

void add_problem_flags(CLI::App* sub, RunConfig& c, bool with_kind, bool with_kappa = true) {
  sub->add_option("--nu", c.nu, "Bessel order nu >= 0")->required();
  if (with_kappa) sub->add_option("--kappa", c.kappa, "Radius ratio kappa > 1")->required();
  if (with_kind) {
    sub->add_option("--kind", c.kind, "Cross-product")
        ->check(CLI::IsMember({"dirichlet", "neumann", "oblique"}))
        ->capture_default_str();
    sub->add_option("--beta", c.beta, "Oblique tangent beta >= 0")->capture_default_str();
  }
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--output", c.output, "Write to this file instead of stdout");
}

void add_newton_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tol", c.newton.tol_newton, "Newton residual bound")->capture_default_str();
  sub->add_option("--max-iter", c.newton.max_iter, "Newton iteration cap")->capture_default_str();
  sub->add_option("--step-init", c.newton.step_init, "Initial and largest continuation step in t")->capture_default_str();
  sub->add_option("--step-min", c.newton.step_min, "Smallest continuation step in t")->capture_default_str();
}

}  // namespace

unsigned thread_count_from_env() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("ANNULUS_ZEROS_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0) return hw;
  return n == 0 ? hw : static_cast<unsigned>(n);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeros of Bessel cross-products on an annulus", "annulus-zeros"};
  app.require_subcommand(1);
  RunConfig c;

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a cross-product at one point");
  add_problem_flags(eval, c, true);
  eval->add_option("--z-re", c.z_re, "Re z")->required();
  eval->add_option("--z-im", c.z_im, "Im z")->capture_default_str();

  CLI::App* zeros = app.add_subcommand("zeros", "Asymptotic estimates and refined zeros");
  add_problem_flags(zeros, c, true);
  zeros->add_option("--s", c.s_list, "Branch indices")->delimiter(',')->capture_default_str();
  add_newton_flags(zeros, c);

  CLI::App* branch = app.add_subcommand("branch", "Continue zero branches in t = nu beta");
  add_problem_flags(branch, c, false);
  branch->add_option("--s", c.s_list, "Branch indices")->delimiter(',')->capture_default_str();
  branch->add_option("--t-max", c.t_max, "End of the continuation")->capture_default_str();
  add_newton_flags(branch, c);

  CLI::App* grid = app.add_subcommand("grid", "|dz/dt| over (kappa - 1, t)");
  add_problem_flags(grid, c, false, false);
  grid->add_option("--s", c.s_list, "Branch index")->capture_default_str();
  grid->add_option("--km1-min", c.grid.km1_min, "Smallest kappa - 1")->capture_default_str();
  grid->add_option("--km1-max", c.grid.km1_max, "Largest kappa - 1")->capture_default_str();
  grid->add_option("--km1-count", c.grid.km1_count, "Number of kappa columns")->capture_default_str();
  grid->add_option("--t-min", c.grid.t_min, "Smallest t")->capture_default_str();
  grid->add_option("--t-max", c.grid.t_max, "Largest t")->capture_default_str();
  grid->add_option("--t-count", c.grid.t_count, "Number of t samples")->capture_default_str();
  add_newton_flags(grid, c);

  std::vector<const char*> argv{"annulus-zeros"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // grid sweeps kappa; validation uses the first column.
  if (grid->parsed()) c.kappa = 1.0 + c.grid.km1_min;
  for (CLI::App* sub : {eval, zeros, branch, grid}) {
    if (sub->parsed()) c.command = sub->get_name();
  }

  std::ofstream file;
  std::ostringstream buffer;
  try {
    if (c.command != "eval") {
      try {
        c.newton.validate();
      } catch (const DomainError& e) {
        throw UsageError(std::string("--tol/--max-iter/--step-init/--step-min: ") + e.what());
      }
    }
    int code = kOk;
    if (c.command == "eval") code = cmd_eval(c, buffer);
    if (c.command == "zeros") code = cmd_zeros(c, buffer, err);
    if (c.command == "branch") code = cmd_branch(c, buffer, err);
    if (c.command == "grid") code = cmd_grid(c, buffer, err);
    if (c.output.empty()) {
      out << buffer.str();
    } else {
      file.open(c.output);
      if (!file) throw UsageError("--output: cannot open " + c.output);
      file << buffer.str();
    }
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace annulus::cli
