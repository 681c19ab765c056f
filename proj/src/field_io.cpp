#include "stratwave/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

void write_field(const HeightField& f, const std::string& path, const std::string& hash,
                 const std::string& extra_header) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write field file " + path);
  const SlitGrid& g = f.grid;
  os << std::setprecision(17);
  os << "# stratwave height field\n";
  os << "# L = " << g.L() << "\n";
  os << "# nq = " << g.nq() << "\n";
  os << "# np_minus = " << g.np_minus() << "\n";
  os << "# np_plus = " << g.np_plus() << "\n";
  os << "# p_hat = " << g.p_hat() << "\n";
  os << "# symmetric = " << (g.symmetric() ? 1 : 0) << "\n";
  os << "# F = " << f.F << "\n";
  os << "# epsilon = " << f.epsilon << "\n";
  os << "# background_hash = " << hash << "\n";
  std::istringstream extra(extra_header);
  for (std::string line; std::getline(extra, line);) os << "#| " << line << "\n";
  os << "# columns: q p w\n";
  for (int r = 0; r < g.rows(); ++r)
    for (int i = 0; i < g.nq(); ++i) os << g.q(i) << ' ' << g.p(r) << ' ' << f.at(i, r) << '\n';
  if (!os) throw InvalidInput("write failed for " + path);
}

HeightField read_field(const std::string& path, std::string* hash) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open field file " + path);
  std::map<std::string, std::string> meta;
  std::vector<double> vals;
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#|", 0) == 0) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t#");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      continue;
    }
    std::istringstream ls(line);
    double q, p, w;
    if (!(ls >> q >> p >> w)) throw InvalidInput("malformed field line in " + path + ": " + line);
    vals.push_back(w);
  }
  auto get = [&](const char* k) {
    const auto it = meta.find(k);
    if (it == meta.end()) throw InvalidInput(std::string("field file lacks '") + k + "': " + path);
    return it->second;
  };
  try {
    const SlitGrid g(std::stod(get("L")), std::stoi(get("nq")), std::stoi(get("np_minus")),
                     std::stoi(get("np_plus")), std::stod(get("p_hat")),
                     std::stoi(get("symmetric")) != 0);
    HeightField f(g, std::stod(get("F")));
    f.epsilon = std::stod(get("epsilon"));
    if (vals.size() != g.nodes())
      throw InvalidInput("field file " + path + " has " + std::to_string(vals.size()) +
                         " nodes, expected " + std::to_string(g.nodes()));
    std::size_t k = 0;
    for (int r = 0; r < g.rows(); ++r)
      for (int i = 0; i < g.nq(); ++i) f.at(i, r) = vals[k++];
    if (hash) *hash = meta.count("background_hash") ? meta["background_hash"] : "";
    return f;
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("bad header value in " + path + ": " + e.what());
  }
}

}  // namespace stratwave
