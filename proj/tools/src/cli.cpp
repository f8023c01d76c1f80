#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "output.hpp"
#include "system_io.hpp"
#include "turingrad/asymptotics.hpp"
#include "turingrad/besseln.hpp"
#include "turingrad/errors.hpp"
#include "turingrad/glground.hpp"
#include "turingrad/radialpde.hpp"
#include "turingrad/rdmodel.hpp"

namespace turingrad::cli {

namespace {

using nlohmann::json;
using D = Defaults;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string system_path;
  double nu = kNaN;
  std::string csv_path;

  double n = kNaN;
  int ell = 0;
  double rmax = kNaN;
  double dr = kNaN;

  double S = D::ground_S;
  int m = D::ground_m;
  double nmin = 0.5, nmax = 3.0;
  int steps = 26;

  std::string pattern = "spotA";
  double mu = kNaN;
  double r0 = D::r0, r1 = D::r1;
  std::string mu_grid = "1e-8:1e-5:50";

  double mu0 = kNaN;
  int cont_steps = D::steps;
  double ds = D::ds, ds_min = D::ds_min, ds_max = D::ds_max;
  int direction = 1;
  double mu_min = 0.0;
  double mu_max = std::numeric_limits<double>::infinity();
  int max_folds = 0;
  double R = D::pde_R;
  double scaling_R = 0.0;  // 0: derived from the mu window
  double h = D::pde_h;
  double tol = D::newton_tol;

  std::string mu_window = "1e-4,1e-2";
  std::string method = "auto";
  int points = D::correction_points;
  double tolerance = kNaN;
};

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(what + ": cannot read number \"" + tok + "\"");
    }
  }
  return out;
}

// "lo:hi:count" (log-spaced) or a comma-separated list.
std::vector<double> parse_mu_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text, "--mu-grid");
  std::string fields = text;
  std::replace(fields.begin(), fields.end(), ':', ',');
  const auto parts = parse_list(fields, "--mu-grid");
  if (parts.size() != 3 || !(parts[0] > 0.0 && parts[1] > parts[0]) || parts[2] < 2 ||
      parts[2] != std::floor(parts[2])) {
    throw ValidationError("--mu-grid expects lo:hi:count with 0 < lo < hi and count >= 2");
  }
  const int count = static_cast<int>(parts[2]);
  std::vector<double> mu(count);
  const double a = std::log(parts[0]), b = std::log(parts[1]);
  for (int i = 0; i < count; ++i) mu[i] = std::exp(a + (b - a) * i / (count - 1));
  return mu;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    v[i] = count == 1 ? hi : std::exp(std::log(hi) + (std::log(lo) - std::log(hi)) * i / (count - 1));
  }
  return v;
}

json vec_json(const Vec2& v) { return json::array({v[0] + 0.0, v[1] + 0.0}); }

// Writes CSV to --csv when given, else to `out` (or nowhere if `optional`).
void emit_csv(const Options& o, std::ostream& out, bool optional,
              const std::function<void(std::ostream&)>& write) {
  if (o.csv_path.empty()) {
    if (!optional) write(out);
    return;
  }
  std::ofstream f(o.csv_path);
  if (!f) throw DomainError("cannot write " + o.csv_path);
  write(f);
}

class Runner {
public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  LoadedSystem system() const {
    const std::optional<double> nu = std::isnan(o.nu) ? std::nullopt : std::optional<double>(o.nu);
    if (o.system_path.empty()) return builtin_system(nu.value_or(D::nu));
    return parse_system_file(o.system_path, nu, err_);
  }

  GLConfig gl_config() const {
    GLConfig c;
    c.S = o.S;
    c.m = o.m;
    return c;
  }

  std::unique_ptr<GroundStateSolution> ground_for(PatternKind kind, double n) const {
    if (kind == PatternKind::SpotA) return nullptr;
    auto g = std::make_unique<GroundStateSolution>(solve_canonical(n, gl_config()));
    for (const auto& w : g->warnings) err_ << "warning: " << w << '\n';
    return g;
  }

  json header(const std::string& hash) const { return manifest(command, options, hash); }

  int analyze() {
    const LoadedSystem ls = system();
    const TuringAnalysis an = analyze_system(ls.system);
    const auto& td = an.data;
    const auto& f = an.flags;
    const bool lin = !f.c0_degenerate, quad = !f.gamma_degenerate, cub = !f.c3_degenerate;
    json j;
    j["manifest"] = header(ls.hash);
    j["k_c"] = an.k_c;
    j["mu_flipped"] = an.mu_flipped;
    j["U0hat"] = vec_json(td.U0hat);
    j["U1hat"] = vec_json(td.U1hat);
    j["U0star"] = vec_json(td.U0star);
    j["U1star"] = vec_json(td.U1star);
    j["c0"] = td.c0;
    j["gamma"] = td.gamma;
    j["c3"] = td.c3;
    j["hypotheses"] = {{"turing_point", true},
                       {"geometrically_simple", true},
                       {"linear_nondegenerate", lin},
                       {"quadratic_nondegenerate", quad},
                       {"cubic_nondegenerate", cub},
                       {"c3_negative", cub && td.c3 < 0.0}};
    j["patterns"] = {{"spotA", lin && quad},
                     {"spotA_fold", lin && cub && td.c3 > 0.0},
                     {"rings", lin && cub && td.c3 < 0.0},
                     {"spotB", lin && quad && cub && td.c3 < 0.0}};
    j["notes"] = an.notes;
    out_ << j.dump(2) << '\n';
    return 0;
  }

  int bessel() {
    const double rmax = std::isnan(o.rmax) ? D::bessel_rmax : o.rmax;
    const double dr = std::isnan(o.dr) ? D::bessel_dr : o.dr;
    if (!(rmax > 0.0 && dr > 0.0)) throw DomainError("--rmax and --dr must be positive");
    if (o.ell < 0) throw DomainError("--ell must be nonnegative");
    const auto count = static_cast<std::size_t>(std::floor(rmax / dr + 1e-9));
    emit_csv(o, out_, false, [&](std::ostream& s) {
      CsvWriter csv(s, {"r", "jn", "yn"});
      for (std::size_t i = 1; i <= count; ++i) {
        const double r = dr * static_cast<double>(i);
        csv.row({r, jn(o.n, o.ell, r), yn(o.n, o.ell, r)});
      }
    });
    return 0;
  }

  int ground() {
    const GroundStateSolution sol = solve_canonical(o.n, gl_config());
    for (const auto& w : sol.warnings) err_ << "warning: " << w << '\n';
    const NondegeneracyReport nd = nondegeneracy_probe(sol);
    const LinearizationDefects ld = linearization_defects(sol);
    json j;
    j["manifest"] = header("");
    j["n"] = sol.n;
    j["S"] = sol.S();
    j["m"] = sol.grid.size();
    j["q_n"] = sol.q_n;
    j["q_n_shooting"] = sol.q_n_shooting;
    j["q_n_collocation"] = sol.q_n_collocation;
    j["cross_difference"] = sol.cross_difference;
    j["p_n"] = sol.p_n;
    j["tail_slope"] = sol.tail_slope;
    j["tail_residual"] = sol.tail_residual;
    j["residual_norm"] = sol.residual_norm;
    j["newton_iterations"] = sol.newton_iterations;
    j["shooting_valid_radius"] = sol.shooting_valid_radius;
    j["nondegeneracy"] = {{"eigenvalue", nd.eigenvalue},
                          {"negative_count", nd.negative_count},
                          {"boundary_ratio", nd.boundary_ratio},
                          {"degenerate", nd.degenerate}};
    j["linearization_defects"] = {{"LQ", ld.LQ}, {"LQ1", ld.LQ1}};
    j["warnings"] = sol.warnings;
    out_ << j.dump(2) << '\n';
    emit_csv(o, out_, true, [&](std::ostream& s) {
      CsvWriter csv(s, {"s", "Q", "q"});
      for (std::size_t i = 0; i < sol.grid.size(); ++i) csv.row({sol.grid[i], sol.Qvals[i], sol.qvals[i]});
    });
    return 0;
  }

  int ground_scan() {
    const auto rows = scan_qn(o.nmin, o.nmax, o.steps, gl_config());
    emit_csv(o, out_, false, [&](std::ostream& s) {
      CsvWriter csv(s, {"n", "q_n", "p_n", "residual"});
      for (const auto& r : rows) {
        if (r.ok) {
          csv.row({r.n, r.q_n, r.p_n, r.residual});
        } else {
          csv.row({r.n, kNaN, kNaN, kNaN});
        }
      }
    });
    for (const auto& r : rows) {
      if (!r.ok) err_ << "warning: n = " << format_number(r.n) << ": " << r.message << '\n';
    }
    return 0;
  }

  int profile() {
    const PatternKind kind = parse_pattern(o.pattern);
    const LoadedSystem ls = system();
    const TuringAnalysis an = analyze_system(ls.system);
    const double rmax = std::isnan(o.rmax) ? D::profile_rmax : o.rmax;
    const double dr = std::isnan(o.dr) ? D::profile_dr : o.dr;
    const auto grid = radial_grid(rmax, dr);
    const auto ground = ground_for(kind, o.n);
    const Profile p = make_profile(kind, an.data, o.n, o.mu, grid, ground ? ground->q_n : 0.0);
    emit_csv(o, out_, false, [&](std::ostream& s) {
      CsvWriter csv(s, {"r", "u1", "u2"});
      for (std::size_t i = 0; i < p.r.size(); ++i) csv.row({p.r[i], p.values[i][0], p.values[i][1]});
    });
    return 0;
  }

  int foldcurve() {
    const LoadedSystem ls = system();
    const TuringAnalysis an = analyze_system(ls.system);
    const auto mus = parse_mu_grid(o.mu_grid);
    std::vector<double> gp(mus.size());
    for (std::size_t i = 0; i < mus.size(); ++i) {
      gp[i] = fold_curve_gamma(o.n, mus[i], o.r0, o.r1, an.data.c0, an.data.c3).first;
    }
    emit_csv(o, out_, false, [&](std::ostream& s) {
      CsvWriter csv(s, {"mu", "gamma_plus"});
      for (std::size_t i = 0; i < mus.size(); ++i) csv.row({mus[i], gp[i]});
    });
    return 0;
  }

  int continuation() {
    const PatternKind kind = parse_pattern(o.pattern);
    const LoadedSystem ls = system();
    const TuringAnalysis an = analyze_system(ls.system);
    const Discretization disc = discretization_for_spacing(o.n, o.R, o.h);
    const auto ground = ground_for(kind, o.n);
    ContinuationConfig cc;
    cc.max_steps = o.cont_steps;
    cc.ds = o.ds;
    cc.ds_min = o.ds_min;
    cc.ds_max = o.ds_max;
    cc.direction = o.direction;
    cc.mu_min = o.mu_min;
    cc.mu_max = o.mu_max;
    cc.max_folds = o.max_folds;
    cc.tol = o.tol;
    cc.keep_solutions = false;
    const Eigen::VectorXd seed = seed_state(kind, an.data, disc, o.mu0, ground.get());

    Branch br;
    std::string stall;
    try {
      br = continue_branch(seed, o.mu0, an.normalized, disc, cc);
    } catch (const StallDetected& e) {
      br = e.partial();
      stall = e.what();
    }
    br.system_hash = ls.hash;

    json folds = json::array();
    for (const auto f : br.folds) {
      folds.push_back({{"index", f}, {"mu", br.points[f].mu}, {"sup_norm", br.points[f].sup_norm}});
    }
    json j;
    j["manifest"] = header(ls.hash);
    j["pattern"] = to_string(kind);
    j["n"] = o.n;
    j["R"] = disc.R;
    j["m"] = disc.m;
    j["points"] = br.points.size();
    j["folds"] = folds;
    j["mu_final"] = br.points.empty() ? kNaN : br.points.back().mu;
    j["stalled"] = !stall.empty();
    out_ << j.dump(2) << '\n';
    emit_csv(o, out_, true, [&](std::ostream& s) {
      CsvWriter csv(s, {"step", "mu", "sup_norm", "l2_norm", "fold"});
      for (std::size_t i = 0; i < br.points.size(); ++i) {
        const bool fold = std::find(br.folds.begin(), br.folds.end(), i) != br.folds.end();
        const auto& p = br.points[i];
        csv.row({static_cast<double>(i), p.mu, p.sup_norm, p.l2_norm, fold ? 1.0 : 0.0});
      }
    });
    if (!stall.empty()) {
      err_ << "StallDetected: " << stall << '\n';
      return 2;
    }
    return 0;
  }

  int validate_scaling() {
    const PatternKind kind = parse_pattern(o.pattern);
    const auto window = parse_list(o.mu_window, "--mu-window");
    if (window.size() != 2 || !(window[0] > 0.0 && window[1] > window[0])) {
      throw ValidationError("--mu-window expects a,b with 0 < a < b");
    }
    std::string method = o.method;
    if (method == "auto") method = kind == PatternKind::SpotA ? "continuation" : "correction";
    if (method != "continuation" && method != "correction") {
      throw ValidationError("--method must be auto, continuation or correction");
    }
    const LoadedSystem ls = system();
    const TuringAnalysis an = analyze_system(ls.system);
    const auto ground = ground_for(kind, o.n);

    json j;
    j["manifest"] = header(ls.hash);
    j["pattern"] = to_string(kind);
    j["n"] = o.n;
    j["method"] = method;
    j["mu_window"] = window;
    if (method == "continuation") {
      ScalingStudyConfig sc;
      sc.h = o.h;
      sc.R = o.scaling_R;
      sc.ds_max = std::min(o.ds_max, sc.ds_max);
      sc.newton_tol = o.tol;
      sc.tolerance = std::isnan(o.tolerance) ? (kind == PatternKind::SpotA ? 0.05 : 0.1) : o.tolerance;
      const ScalingStudy st =
          continuation_scaling(kind, an.data, an.normalized, o.n, window[0], window[1], ground.get(), sc);
      j["slope"] = st.fit.slope;
      j["stderr"] = st.fit.stderr_;
      j["target"] = st.target;
      j["tolerance"] = sc.tolerance;
      j["pass"] = st.pass;
      j["fit_points"] = st.fit.points;
      j["branch_points"] = st.branch_points;
      j["amplitude"] = "max |u| on [0, " + format_number(sc.core_radius) + "]";
    } else {
      ValidationConfig vc;
      vc.h = o.h;
      vc.tol = std::max(o.tol, 1e-10);
      if (!std::isnan(o.tolerance)) vc.order_tolerance = o.tolerance;
      const ValidationReport rep = validate_profile(kind, an.data, an.normalized, o.n,
                                                    log_spaced(window[0], window[1], o.points),
                                                    ground.get(), vc);
      json entries = json::array();
      for (const auto& e : rep.entries) {
        entries.push_back({{"mu", e.mu},
                           {"converged", e.converged},
                           {"correction", e.correction},
                           {"iterations", e.iterations},
                           {"residual", e.residual},
                           {"message", e.message}});
        if (!e.converged) err_ << "warning: mu = " << format_number(e.mu) << ": " << e.message << '\n';
      }
      j["slope"] = rep.fitted_order;
      j["stderr"] = rep.order_stderr;
      j["target"] = rep.target_order;
      j["tolerance"] = vc.order_tolerance;
      j["pass"] = rep.pass;
      j["entries"] = entries;
    }
    out_ << j.dump(2) << '\n';
    return 0;
  }

  Options o;
  std::string command;
  json options = json::object();

private:
  std::ostream& out_;
  std::ostream& err_;
};

void add_system(CLI::App* s, Options& o) {
  s->add_option("--system", o.system_path, "RD system JSON (default: built-in Swift-Hohenberg)");
  s->add_option("--nu", o.nu, "Swift-Hohenberg quadratic coefficient (overrides the file)");
}

void add_ground(CLI::App* s, Options& o) {
  s->add_option("--S", o.S, "ground-state truncation radius");
  s->add_option("--m", o.m, "ground-state grid points");
}

void add_csv(CLI::App* s, Options& o) { s->add_option("--csv", o.csv_path, "CSV output file"); }

json collect_options(const CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "h") continue;
    if (opt->count() > 0) {
      j[name] = opt->as<std::string>();
    } else if (!opt->get_default_str().empty() && opt->get_default_str() != "nan") {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  Options& o = runner.o;

  CLI::App app{"Localised radial Turing patterns in n+1 dimensions", "turingrad"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();
  std::map<std::string, std::function<int()>> handlers;

  auto* analyze = app.add_subcommand("analyze", "Turing data and coefficients of an RD system");
  add_system(analyze, o);
  handlers["analyze"] = [&] { return runner.analyze(); };

  auto* bessel = app.add_subcommand("bessel", "Tabulate (n+1)-dimensional Bessel functions");
  bessel->add_option("--n", o.n, "dimension parameter")->required();
  bessel->add_option("--ell", o.ell, "index");
  bessel->add_option("--rmax", o.rmax, "largest radius (default 50)");
  bessel->add_option("--dr", o.dr, "radial step (default 0.1)");
  add_csv(bessel, o);
  handlers["bessel"] = [&] { return runner.bessel(); };

  auto* ground = app.add_subcommand("ground", "Ginzburg-Landau ground state for one n");
  ground->add_option("--n", o.n, "dimension parameter, 0 < n < 4")->required();
  add_ground(ground, o);
  add_csv(ground, o);
  handlers["ground"] = [&] { return runner.ground(); };

  auto* scan = app.add_subcommand("ground-scan", "q_n and p_n over a range of n");
  scan->add_option("--nmin", o.nmin, "first n");
  scan->add_option("--nmax", o.nmax, "last n");
  scan->add_option("--steps", o.steps, "number of n values");
  add_ground(scan, o);
  add_csv(scan, o);
  handlers["ground-scan"] = [&] { return runner.ground_scan(); };

  auto* profile = app.add_subcommand("profile", "Leading-order radial profile");
  profile->add_option("--pattern", o.pattern, "spotA, ring+, ring- or spotB");
  profile->add_option("--n", o.n, "dimension parameter")->required();
  profile->add_option("--mu", o.mu, "bifurcation parameter")->required();
  profile->add_option("--rmax", o.rmax, "largest radius (default 20)");
  profile->add_option("--dr", o.dr, "radial step (default 0.05)");
  add_system(profile, o);
  add_ground(profile, o);
  add_csv(profile, o);
  handlers["profile"] = [&] { return runner.profile(); };

  auto* fold = app.add_subcommand("foldcurve", "Spot A fold curve gamma_+(mu) for c3 > 0");
  fold->add_option("--n", o.n, "dimension parameter")->required();
  fold->add_option("--mu-grid", o.mu_grid, "lo:hi:count (log-spaced) or comma list");
  fold->add_option("--r0", o.r0, "inner matching radius");
  fold->add_option("--r1", o.r1, "outer matching radius factor");
  add_system(fold, o);
  add_csv(fold, o);
  handlers["foldcurve"] = [&] { return runner.foldcurve(); };

  auto* cont = app.add_subcommand("continue", "Pseudo-arclength continuation of a radial state");
  cont->add_option("--n", o.n, "dimension parameter")->required();
  cont->add_option("--mu0", o.mu0, "starting mu")->required();
  cont->add_option("--pattern", o.pattern, "seed pattern: spotA, ring+, ring- or spotB");
  cont->add_option("--steps", o.cont_steps, "maximum continuation steps");
  cont->add_option("--ds", o.ds, "initial arclength step");
  cont->add_option("--ds-min", o.ds_min, "smallest arclength step");
  cont->add_option("--ds-max", o.ds_max, "largest arclength step");
  cont->add_option("--direction", o.direction, "sign of the first mu increment (+1 or -1)");
  cont->add_option("--mu-min", o.mu_min, "stop below this mu");
  cont->add_option("--mu-max", o.mu_max, "stop above this mu");
  cont->add_option("--max-folds", o.max_folds, "stop a few steps after this many folds (0: never)");
  cont->add_option("--R", o.R, "domain radius");
  cont->add_option("--spacing", o.h, "grid spacing");
  cont->add_option("--tol", o.tol, "Newton tolerance");
  add_system(cont, o);
  add_ground(cont, o);
  add_csv(cont, o);
  handlers["continue"] = [&] { return runner.continuation(); };

  auto* val = app.add_subcommand("validate-scaling", "Fit the mu-scaling of a pattern");
  val->add_option("--pattern", o.pattern, "spotA, ring+, ring- or spotB");
  val->add_option("--n", o.n, "dimension parameter")->required();
  val->add_option("--mu-window", o.mu_window, "a,b");
  val->add_option("--method", o.method, "auto, continuation (amplitude) or correction (remainder order)");
  val->add_option("--points", o.points, "mu values for the correction method");
  val->add_option("--tolerance", o.tolerance, "pass tolerance on the fitted exponent");
  val->add_option("--R", o.scaling_R, "domain radius for continuation (0: from the window)");
  val->add_option("--spacing", o.h, "grid spacing");
  val->add_option("--ds-max", o.ds_max, "largest arclength step");
  val->add_option("--tol", o.tol, "Newton tolerance");
  add_system(val, o);
  add_ground(val, o);
  handlers["validate-scaling"] = [&] { return runner.validate_scaling(); };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  runner.command = sub->get_name();
  runner.options = collect_options(sub);
  try {
    return handlers.at(runner.command)();
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return e.error_class() == ErrorClass::Domain ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace turingrad::cli
