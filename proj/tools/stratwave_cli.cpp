#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "stratwave/config.hpp"
#include "stratwave/continuation.hpp"
#include "stratwave/diagnostics.hpp"
#include "stratwave/error.hpp"
#include "stratwave/eulerian.hpp"
#include "stratwave/field_io.hpp"
#include "stratwave/height_solver.hpp"
#include "stratwave/log.hpp"
#include "stratwave/reduced_model.hpp"
#include "stratwave/sturm_liouville.hpp"

namespace fs = std::filesystem;
using namespace stratwave;

namespace {

enum Exit { ok = 0, config_error = 2, numerical_failure = 3, stagnation_stop = 4 };

struct Common {
  std::string config;
  std::string out = "out";
  int jobs = 1;
  std::string log_level = "warn";
  // numeric overrides
  std::optional<int> nq, np_minus, np_plus, max_points;
  std::optional<double> L, epsilon, F, tol, ds0, ds_max, stop_min_hp, stop_max_hp;
  std::optional<std::string> seed_sign;
  std::string field, dir;
  bool dimensional = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI configuration file")->required();
  app->add_option("--out", c.out, "output directory");
  app->add_option("--jobs", c.jobs, "threads for assembly and diagnostics")->check(CLI::PositiveNumber);
  app->add_option("--log-level", c.log_level, "debug, info, warn, error or quiet");
}

void add_grid(CLI::App* app, Common& c) {
  app->add_option("--nq", c.nq);
  app->add_option("--np-minus", c.np_minus);
  app->add_option("--np-plus", c.np_plus);
  app->add_option("--L", c.L, "truncation half-length (0 = automatic)");
  app->add_option("--epsilon", c.epsilon);
  app->add_option("--F", c.F, "Froude number (overrides epsilon)");
  app->add_option("--tol", c.tol);
  app->add_option("--seed-sign", c.seed_sign, "elevation or printed");
}

void add_branch(CLI::App* app, Common& c) {
  app->add_option("--ds0", c.ds0);
  app->add_option("--ds-max", c.ds_max);
  app->add_option("--stop-min-hp", c.stop_min_hp);
  app->add_option("--stop-max-hp", c.stop_max_hp);
  app->add_option("--max-points", c.max_points);
}

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  NumericsConfig& n = cfg.numerics;
  if (c.nq) n.nq = *c.nq;
  if (c.np_minus) n.np_minus = *c.np_minus;
  if (c.np_plus) n.np_plus = *c.np_plus;
  if (c.max_points) n.max_points = *c.max_points;
  if (c.L) n.L = *c.L;
  if (c.epsilon) n.epsilon = *c.epsilon;
  if (c.F) n.F = *c.F;
  if (c.tol) n.tol = *c.tol;
  if (c.ds0) n.ds0 = *c.ds0;
  if (c.ds_max) n.ds_max = *c.ds_max;
  if (c.stop_min_hp) n.stop_min_hp = *c.stop_min_hp;
  if (c.stop_max_hp) n.stop_max_hp = *c.stop_max_hp;
  if (c.seed_sign) {
    if (*c.seed_sign == "printed") n.seed_sign = SeedSign::printed;
    else if (*c.seed_sign == "elevation") n.seed_sign = SeedSign::elevation;
    else throw InvalidInput("--seed-sign must be 'elevation' or 'printed'");
  }
  validate(cfg);
  return cfg;
}

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path out;
  StratifiedBackground bg;
};

Context prepare(const Common& c) {
  Context ctx;
  ctx.cfg = load(c);
  ctx.hash = hash_string(background_hash(ctx.cfg));
  ctx.out = c.out;
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw InvalidInput("--out: cannot create " + c.out + ": " + ec.message());
  std::ofstream eff(ctx.out / "effective_config.ini");
  if (!eff) throw InvalidInput("--out: directory is not writable: " + c.out);
  eff << "; background_hash = " << ctx.hash << "\n" << echo_config(ctx.cfg);
  ctx.bg = build_background(ctx.cfg);
  return ctx;
}

std::string header(const Context& ctx) {
  return "background_hash = " + ctx.hash + "\n" + echo_config(ctx.cfg);
}

// '#'-prefixed provenance block for text outputs
std::string comment_block(const Context& ctx) {
  std::istringstream is(header(ctx));
  std::ostringstream os;
  for (std::string line; std::getline(is, line);) os << "# " << line << "\n";
  return os.str();
}

SlitGrid make_grid(const Context& ctx, const ReducedModel& m, double epsilon) {
  const NumericsConfig& n = ctx.cfg.numerics;
  const double L =
      n.L > 0.0 ? n.L : default_length(epsilon * std::sqrt(m.B1), n.length_factor);
  return SlitGrid(L, n.nq, n.np_minus, n.np_plus, ctx.bg.p_hat());
}

double target_epsilon(const Context& ctx, const CriticalData& cd) {
  const NumericsConfig& n = ctx.cfg.numerics;
  if (n.F > 0.0) {
    if (!(n.F > cd.F_cr))
      throw InvalidInput("numerics.F must exceed F_cr = " + std::to_string(cd.F_cr));
    return epsilon_from_froude(cd.mu_cr, n.F);
  }
  return n.epsilon;
}

HeightField solve_point(const Context& ctx, const ReducedModel& m, double eps, NewtonReport* rep) {
  const SlitGrid grid = make_grid(ctx, m, eps);
  HeightField seed = elevation_ansatz(m, eps, grid, ctx.cfg.numerics.seed_sign);
  NewtonOptions no;
  no.tol = ctx.cfg.numerics.tol;
  no.max_iter = ctx.cfg.numerics.max_iter;
  return newton_solve(seed, ctx.bg, no, rep);
}

int cmd_critical(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  const auto spec = spectrum_at_criticality(ctx.bg, cd, ctx.cfg.numerics.spectrum_count);
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << "F_cr = " << cd.F_cr << "\n";
  os << std::setprecision(12) << std::defaultfloat;
  os << "mu_cr = " << cd.mu_cr << "\n";
  os << "A'(mu_cr) = " << cd.A_slope << "\n";
  os << "p_hat = " << ctx.bg.p_hat() << "\n";
  os << "F_relation_constant = " << ctx.bg.F_relation_constant() << "\n";
  os << "nu =";
  for (double v : spec) os << " " << v;
  os << "\n";
  std::cout << os.str();
  std::ofstream f(ctx.out / "critical.txt");
  f << comment_block(ctx) << os.str();
  std::ofstream b(ctx.out / "background.txt");
  b << comment_block(ctx) << background_report(ctx.bg);
  return ok;
}

int cmd_reduced(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  const ReducedModel m = build_reduced_model(ctx.bg, cd);
  const double eps = target_epsilon(ctx, cd);
  std::ostringstream os;
  os << std::setprecision(12);
  os << "F_cr = " << cd.F_cr << "\nB1 = " << m.B1 << "\nB2 = " << m.B2
     << "\nB2 (psi_p(-1) = 1) = " << m.B2_psi << "\nB1 (multiplier) = " << m.B1_multiplier
     << "\nB2 (multiplier) = " << m.B2_multiplier << "\nepsilon = " << eps
     << "\nF = " << froude_from_epsilon(cd.mu_cr, eps) << "\n";
  std::cout << os.str();
  std::ofstream f(ctx.out / "reduced.txt");
  f << comment_block(ctx) << os.str();
  const SlitGrid grid = make_grid(ctx, m, eps);
  const HeightField seed = elevation_ansatz(m, eps, grid, ctx.cfg.numerics.seed_sign);
  write_field(seed, (ctx.out / "seed.field").string(), ctx.hash, echo_config(ctx.cfg));
  std::ofstream v(ctx.out / "seed_interface.csv");
  v << comment_block(ctx) << "q,v,dv,d2v\n" << std::setprecision(17);
  for (int i = 0; i < grid.nq(); ++i) {
    const InterfaceSeed s = sech_seed(m, eps, grid.q(i), ctx.cfg.numerics.seed_sign);
    v << grid.q(i) << ',' << s.v << ',' << s.dv << ',' << s.d2v << '\n';
  }
  return ok;
}

void write_report(const Context& ctx, const WaveDiagnostics& d, const fs::path& path) {
  std::ofstream f(path);
  f << comment_block(ctx) << format_report(d);
}

int cmd_solve(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  const ReducedModel m = build_reduced_model(ctx.bg, cd);
  const double eps = target_epsilon(ctx, cd);
  NewtonReport rep;
  const HeightField sol = solve_point(ctx, m, eps, &rep);
  write_field(sol, (ctx.out / "solution.field").string(), ctx.hash, echo_config(ctx.cfg));
  const WaveDiagnostics d = diagnose(sol, ctx.bg, cd.F_cr);
  write_report(ctx, d, ctx.out / "diagnostics.txt");
  std::cout << std::setprecision(12) << "converged in " << rep.iterations
            << " Newton iterations, residual " << rep.residual_history.back() << "\n"
            << "F = " << sol.F << ", w(0, p_hat) = " << crest_amplitude(sol)
            << ", sech^2 prediction " << sech_seed(m, eps, 0.0, ctx.cfg.numerics.seed_sign).v
            << "\n";
  return ok;
}

void write_branch_row(std::ostream& os, int k, const BranchPoint& b) {
  os << k << ',' << b.arc_s << ',' << b.field.F << ',' << b.amplitude << ',' << b.min_hp << ','
     << b.N_s << ',' << b.flow_force_drift << ',' << b.max_hp << ',' << b.crest_min_hp << ','
     << b.stagnation_metric << ',' << b.froude_slack << ',' << b.field.grid.L() << '\n';
}

const char* branch_columns =
    "index,s,F,v0,min_hp,N,flow_force_drift,max_hp,crest_min_hp,stagnation_metric,"
    "froude_slack,L\n";

int cmd_continue(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  const ReducedModel m = build_reduced_model(ctx.bg, cd);
  const double eps = target_epsilon(ctx, cd);
  const HeightField start = solve_point(ctx, m, eps, nullptr);
  const fs::path dir = ctx.out / "branch";
  fs::create_directories(dir);
  std::ofstream csv(ctx.out / "branch.csv");
  csv << comment_block(ctx) << branch_columns << std::setprecision(17);
  int k = 0;
  auto record = [&](const BranchPoint& b) {
    std::ostringstream name;
    name << "point_" << std::setw(4) << std::setfill('0') << k << ".field";
    write_field(b.field, (dir / name.str()).string(), ctx.hash, echo_config(ctx.cfg));
    write_branch_row(csv, k, b);
    csv.flush();
    ++k;
  };
  const BranchPoint b0 = make_branch_point(start, ctx.bg, cd.F_cr);
  record(b0);
  BranchOptions opt = branch_options(ctx.cfg);
  opt.on_point = record;
  const BranchResult res = continue_branch(b0, ctx.bg, cd.F_cr, opt);
  const BranchPoint& last = res.points.back();
  std::cout << std::setprecision(10) << res.points.size() << " branch points, stop: "
            << to_string(res.reason) << " (" << res.message << ")\n"
            << "final F = " << last.field.F << ", v0 = " << last.amplitude
            << ", min h_p = " << last.min_hp << ", max h_p = " << last.max_hp
            << ", N = " << last.N_s << "\n";
  if (is_stagnation(res.reason)) return stagnation_stop;
  if (res.reason == StopReason::max_points) return ok;
  return numerical_failure;
}

HeightField load_field(const Context& ctx, const std::string& path) {
  std::string h;
  HeightField f = read_field(path, &h);
  if (h != ctx.hash)
    log::warn("field " + path + " was computed for background " + h + ", config gives " +
              ctx.hash);
  if (std::abs(f.grid.p_hat() - ctx.bg.p_hat()) > 1e-12)
    throw InvalidInput("field " + path + " does not match the configured background (p_hat)");
  return f;
}

int cmd_diagnose(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  const HeightField f = load_field(ctx, c.field);
  const WaveDiagnostics d = diagnose(f, ctx.bg, cd.F_cr);
  std::cout << format_report(d);
  write_report(ctx, d, ctx.out / "diagnostics.txt");
  return ok;
}

int cmd_diagnose_branch(const Common& c) {
  Context ctx = prepare(c);
  const CriticalData cd = find_mu_cr(ctx.bg);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(c.dir))
    if (e.path().extension() == ".field") files.push_back(e.path());
  if (files.empty()) throw InvalidInput("--dir: no .field files in " + c.dir);
  std::sort(files.begin(), files.end());
  std::vector<HeightField> fields;
  for (const auto& p : files) fields.push_back(load_field(ctx, p.string()));
  std::vector<WaveDiagnostics> diags(fields.size());
  const int n = static_cast<int>(fields.size());
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) diags[k] = diagnose(fields[k], ctx.bg, cd.F_cr);
  std::ofstream csv(ctx.out / "branch_diagnostics.csv");
  csv << comment_block(ctx) << std::setprecision(17)
      << "file,F,v0,min_hp,max_hp,N,flow_force_drift,identity_residual,froude_slack,"
         "elevation_ok,nodal_ok,symmetry_ok,stagnation_metric,velocity_sup\n";
  for (int k = 0; k < n; ++k) {
    const WaveDiagnostics& d = diags[k];
    const NodalReport& nr = d.nodal;
    csv << files[k].filename().string() << ',' << d.F << ',' << d.amplitude << ',' << d.min_hp
        << ',' << d.max_hp << ',' << d.blowup << ',' << d.flow_force.drift << ','
        << d.identity.residual << ',' << d.froude.slack << ',' << nr.elevation_ok << ','
        << (nr.wq_ok && nr.wqq_ok && nr.wqp_ok && nr.wqqp_ok) << ',' << nr.symmetry_ok << ','
        << d.velocity.stagnation_metric << ',' << d.velocity.velocity_sup << '\n';
  }
  std::cout << n << " branch points diagnosed\n";
  return ok;
}

int cmd_reconstruct(const Common& c) {
  Context ctx = prepare(c);
  const HeightField f = load_field(ctx, c.field);
  EulerianWave w = dj_inverse(f, ctx.bg);
  pressure_field(w, ctx.bg);
  const InterfaceChecks ic = interface_checks(w, ctx.bg);
  std::ostringstream os;
  os << std::setprecision(12) << "surface pressure max |P| = " << ic.surface_pressure
     << "\ninterface pressure jump = " << ic.pressure_jump
     << "\ninterface Bernoulli residual = " << ic.bernoulli_jump
     << "\ninterface streamline value = " << ic.streamline_value << " (expected "
     << -ctx.bg.p_hat() << ")\nQ_eta = " << w.Q_eta << "\nQ_zeta = " << w.Q_zeta << "\n";
  std::cout << os.str();
  if (c.dimensional) w = redimensionalize(w, ctx.bg.scale());
  write_interfaces_csv(w, (ctx.out / "interfaces.csv").string());
  write_streamlines_csv(w, (ctx.out / "streamlines.csv").string());
  std::ofstream f2(ctx.out / "reconstruct.txt");
  f2 << comment_block(ctx) << os.str();
  return ok;
}

log::Level parse_level(const std::string& s) {
  if (s == "debug") return log::Level::debug;
  if (s == "info") return log::Level::info;
  if (s == "warn") return log::Level::warn;
  if (s == "error") return log::Level::error;
  if (s == "quiet") return log::Level::quiet;
  throw InvalidInput("--log-level: unknown level '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solitary waves in two-layer stratified flows with shear"};
  app.require_subcommand(1);
  Common c;
  struct Sub {
    CLI::App* app;
    int (*run)(const Common&);
  };
  std::vector<Sub> subs;
  auto sub = [&](const char* name, const char* help, int (*run)(const Common&)) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, c);
    subs.push_back({s, run});
    return s;
  };
  add_grid(sub("critical", "critical Froude number and transversal spectrum", cmd_critical), c);
  add_grid(sub("reduced", "reduced-model coefficients and the ansatz seed", cmd_reduced), c);
  add_grid(sub("solve", "solve for one wave", cmd_solve), c);
  CLI::App* cont = sub("continue", "follow the branch toward stagnation", cmd_continue);
  add_grid(cont, c);
  add_branch(cont, c);
  sub("diagnose", "diagnostics of one field file", cmd_diagnose)
      ->add_option("--field", c.field, "field file")
      ->required();
  sub("diagnose-branch", "diagnostics of a branch directory", cmd_diagnose_branch)
      ->add_option("--dir", c.dir, "directory with .field files")
      ->required();
  CLI::App* rec = sub("reconstruct", "physical fields of one field file", cmd_reconstruct);
  rec->add_option("--field", c.field, "field file")->required();
  rec->add_flag("--dimensional", c.dimensional, "write dimensional quantities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }
  try {
    log::set_level(parse_level(c.log_level));
    omp_set_num_threads(c.jobs);
    for (const Sub& s : subs)
      if (s.app->parsed()) return s.run(c);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_failure;
  }
  return config_error;
}
