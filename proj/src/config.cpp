#include "stratwave/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/expression.hpp"

namespace stratwave {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"fluid", {"c", "g", "d_plus", "d_minus", "P_atm"}},
      {"density", {"lower", "upper", "lower_file", "upper_file"}},
      {"shear", {"lower", "upper", "lower_file", "upper_file"}},
      {"numerics",
       {"nq", "np_minus", "np_plus", "L", "length_factor", "epsilon", "F", "tol", "max_iter",
        "seed_sign", "height_intervals", "ds0", "ds_min", "ds_max", "stop_min_hp",
        "stop_max_hp", "max_points", "regrid", "spectrum_count", "seed"}},
  };
  return keys;
}

template <class T>
void read(const pt::ptree& t, const std::string& key, T& out) {
  const auto v = t.get_optional<std::string>(key);
  if (!v) return;
  std::istringstream is(*v);
  T val;
  if constexpr (std::is_same_v<T, bool>) {
    std::string s;
    is >> s;
    if (s == "true" || s == "1" || s == "yes") val = true;
    else if (s == "false" || s == "0" || s == "no") val = false;
    else throw InvalidInput("config: " + key + " must be a boolean");
  } else {
    is >> val;
    std::string rest;
    if (is.fail() || (is >> rest)) throw InvalidInput("config: " + key + " has invalid value '" + *v + "'");
  }
  out = val;
}

std::string resolve(const std::string& file, const std::string& base) {
  if (file.empty()) return file;
  std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(base) / p).string();
}

ProfileSpec read_profile(const pt::ptree& root, const std::string& sec, const std::string& base) {
  ProfileSpec s;
  const auto t = root.get_child_optional(sec);
  if (!t) throw InvalidInput("config: missing section [" + sec + "]");
  if (auto v = t->get_optional<std::string>("lower")) s.lower = *v;
  if (auto v = t->get_optional<std::string>("upper")) s.upper = *v;
  if (auto v = t->get_optional<std::string>("lower_file")) s.lower_file = resolve(*v, base);
  if (auto v = t->get_optional<std::string>("upper_file")) s.upper_file = resolve(*v, base);
  return s;
}

ScalarFunction make_branch(const std::string& expr, const std::string& file,
                           const std::string& what) {
  if (!file.empty()) return ScalarFunction::from_file(file);
  if (expr.empty()) throw InvalidInput("config: " + what + " needs an expression or a file");
  try {
    return ScalarFunction::from_expression(Expression::parse(expr, "y"));
  } catch (const InvalidInput& e) {
    throw InvalidInput("config: " + what + ": " + e.what());
  }
}

PiecewiseProfile make_profile(const ProfileSpec& s, const FluidParameters& f,
                              const std::string& sec) {
  PiecewiseProfile p;
  p.lo = -f.d();
  p.breakpoint = -f.d_plus;
  p.hi = 0.0;
  p.lower = make_branch(s.lower, s.lower_file, sec + ".lower");
  p.upper = make_branch(s.upper, s.upper_file, sec + ".upper");
  return p;
}

std::string file_contents(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("config: cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree root;
  try {
    std::istringstream is(text);
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  for (const auto& [sec, child] : root) {
    const auto it = known_keys().find(sec);
    if (it == known_keys().end()) throw InvalidInput("config: unknown section [" + sec + "]");
    for (const auto& kv : child)
      if (!it->second.count(kv.first))
        throw InvalidInput("config: unknown key " + sec + "." + kv.first);
  }
  RunConfig c;
  const auto fluid = root.get_child_optional("fluid");
  if (!fluid) throw InvalidInput("config: missing section [fluid]");
  read(*fluid, "c", c.fluid.c);
  read(*fluid, "g", c.fluid.g);
  read(*fluid, "d_plus", c.fluid.d_plus);
  read(*fluid, "d_minus", c.fluid.d_minus);
  read(*fluid, "P_atm", c.P_atm);
  c.density = read_profile(root, "density", base_dir);
  c.shear = read_profile(root, "shear", base_dir);
  if (const auto t = root.get_child_optional("numerics")) {
    NumericsConfig& n = c.numerics;
    read(*t, "nq", n.nq);
    read(*t, "np_minus", n.np_minus);
    read(*t, "np_plus", n.np_plus);
    read(*t, "L", n.L);
    read(*t, "length_factor", n.length_factor);
    read(*t, "epsilon", n.epsilon);
    read(*t, "F", n.F);
    read(*t, "tol", n.tol);
    read(*t, "max_iter", n.max_iter);
    std::string sign;
    read(*t, "seed_sign", sign);
    if (sign == "printed") n.seed_sign = SeedSign::printed;
    else if (sign == "elevation" || sign.empty()) n.seed_sign = SeedSign::elevation;
    else throw InvalidInput("config: numerics.seed_sign must be 'elevation' or 'printed'");
    read(*t, "height_intervals", n.height_intervals);
    read(*t, "ds0", n.ds0);
    read(*t, "ds_min", n.ds_min);
    read(*t, "ds_max", n.ds_max);
    read(*t, "stop_min_hp", n.stop_min_hp);
    read(*t, "stop_max_hp", n.stop_max_hp);
    read(*t, "max_points", n.max_points);
    read(*t, "regrid", n.regrid);
    read(*t, "spectrum_count", n.spectrum_count);
    read(*t, "seed", n.seed);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("config: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  const auto base = std::filesystem::path(path).parent_path().string();
  RunConfig c = parse_config(os.str(), base.empty() ? "." : base);
  c.source = path;
  return c;
}

void validate(const RunConfig& c) {
  c.fluid.validate();
  const NumericsConfig& n = c.numerics;
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw InvalidInput(std::string("config: numerics.") + name + " must be > 0");
  };
  auto at_least = [](int v, int lo, const char* name) {
    if (v < lo)
      throw InvalidInput(std::string("config: numerics.") + name + " must be >= " +
                         std::to_string(lo));
  };
  at_least(n.nq, 8, "nq");
  at_least(n.np_minus, 8, "np_minus");
  at_least(n.np_plus, 8, "np_plus");
  at_least(n.max_iter, 1, "max_iter");
  at_least(n.height_intervals, 16, "height_intervals");
  at_least(n.max_points, 1, "max_points");
  at_least(n.spectrum_count, 1, "spectrum_count");
  if (n.L < 0.0) throw InvalidInput("config: numerics.L must be >= 0 (0 = automatic)");
  positive(n.length_factor, "length_factor");
  positive(n.epsilon, "epsilon");
  if (n.F < 0.0) throw InvalidInput("config: numerics.F must be >= 0 (0 = from epsilon)");
  positive(n.tol, "tol");
  positive(n.ds0, "ds0");
  positive(n.ds_min, "ds_min");
  positive(n.ds_max, "ds_max");
  if (n.ds_min > n.ds0 || n.ds0 > n.ds_max)
    throw InvalidInput("config: numerics.ds0 must lie in [ds_min, ds_max]");
  positive(n.stop_min_hp, "stop_min_hp");
  if (!(n.stop_max_hp > 1.0)) throw InvalidInput("config: numerics.stop_max_hp must be > 1");
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  const NumericsConfig& n = c.numerics;
  os << "[fluid]\n"
     << "c = " << c.fluid.c << "\ng = " << c.fluid.g << "\nd_plus = " << c.fluid.d_plus
     << "\nd_minus = " << c.fluid.d_minus << "\nP_atm = " << c.P_atm << "\n\n";
  auto prof = [&](const char* sec, const ProfileSpec& s) {
    os << "[" << sec << "]\n";
    if (!s.lower_file.empty()) os << "lower_file = " << s.lower_file << "\n";
    else os << "lower = " << s.lower << "\n";
    if (!s.upper_file.empty()) os << "upper_file = " << s.upper_file << "\n";
    else os << "upper = " << s.upper << "\n";
    os << "\n";
  };
  prof("density", c.density);
  prof("shear", c.shear);
  os << "[numerics]\n"
     << "nq = " << n.nq << "\nnp_minus = " << n.np_minus << "\nnp_plus = " << n.np_plus
     << "\nL = " << n.L << "\nlength_factor = " << n.length_factor << "\nepsilon = " << n.epsilon
     << "\nF = " << n.F << "\ntol = " << n.tol << "\nmax_iter = " << n.max_iter
     << "\nseed_sign = " << (n.seed_sign == SeedSign::printed ? "printed" : "elevation")
     << "\nheight_intervals = " << n.height_intervals << "\nds0 = " << n.ds0
     << "\nds_min = " << n.ds_min << "\nds_max = " << n.ds_max
     << "\nstop_min_hp = " << n.stop_min_hp << "\nstop_max_hp = " << n.stop_max_hp
     << "\nmax_points = " << n.max_points << "\nregrid = " << (n.regrid ? "true" : "false")
     << "\nspectrum_count = " << n.spectrum_count << "\nseed = " << n.seed << "\n";
  return os.str();
}

std::uint64_t background_hash(const RunConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.fluid.c << ' ' << c.fluid.g << ' ' << c.fluid.d_plus << ' '
     << c.fluid.d_minus << ' ' << c.numerics.height_intervals << '\n';
  for (const ProfileSpec* s : {&c.density, &c.shear}) {
    os << s->lower << '\n' << s->upper << '\n';
    if (!s->lower_file.empty()) os << file_contents(s->lower_file);
    if (!s->upper_file.empty()) os << file_contents(s->upper_file);
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_string(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

StratifiedBackground build_background(const RunConfig& c) {
  const PiecewiseProfile rho = make_profile(c.density, c.fluid, "density");
  const PiecewiseProfile us = make_profile(c.shear, c.fluid, "shear");
  HeightOptions ho;
  ho.intervals = c.numerics.height_intervals;
  ScaledProfiles s = nondimensionalize(c.fluid, rho, us);
  s.scale.P_atm = c.P_atm;
  return StratifiedBackground(std::move(s), ho);
}

BranchOptions branch_options(const RunConfig& c) {
  const NumericsConfig& n = c.numerics;
  BranchOptions o;
  o.step.ds0 = n.ds0;
  o.step.ds_min = n.ds_min;
  o.step.ds_max = n.ds_max;
  o.step.tol = n.tol;
  o.stop.min_hp = n.stop_min_hp;
  o.stop.max_hp = n.stop_max_hp;
  o.stop.max_points = n.max_points;
  o.regrid = n.regrid;
  o.length_factor = n.length_factor;
  return o;
}

}  // namespace stratwave
