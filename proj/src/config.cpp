#include "translab/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace translab {

namespace {

struct Entry {
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const std::vector<Entry>& schema() {
  static const std::vector<Entry> s = [] {
    std::vector<Entry> e;
    auto add_str = [&](const char* k, std::string ExperimentConfig::* f) {
      e.push_back({k, [f](const ExperimentConfig& c) { return c.*f; },
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = v; }});
    };
    auto add_d = [&](const char* k, double ExperimentConfig::* f) {
      e.push_back({k, [f](const ExperimentConfig& c) { return fmt_double(c.*f); },
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = std::stod(v); }});
    };
    auto add_i = [&](const char* k, int ExperimentConfig::* f) {
      e.push_back({k, [f](const ExperimentConfig& c) { return std::to_string(c.*f); },
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = std::stoi(v); }});
    };
    auto add_u = [&](const char* k, std::uint64_t ExperimentConfig::* f) {
      e.push_back({k, [f](const ExperimentConfig& c) { return std::to_string(c.*f); },
                   [f](ExperimentConfig& c, const std::string& v) { c.*f = std::stoull(v); }});
    };
    auto add_b = [&](const char* k, bool ExperimentConfig::* f) {
      std::string key(k);
      e.push_back({key, [f](const ExperimentConfig& c) { return std::string(c.*f ? "true" : "false"); },
                   [f, key](ExperimentConfig& c, const std::string& v) {
                     if (v != "true" && v != "false")
                       throw std::invalid_argument("config: bool key " + key + " wants true/false");
                     c.*f = (v == "true");
                   }});
    };
    add_str("experiment", &ExperimentConfig::experiment);
    add_u("seed", &ExperimentConfig::seed);
    add_str("out_dir", &ExperimentConfig::out_dir);
    add_d("disk_radius", &ExperimentConfig::disk_radius);
    add_d("grid_h", &ExperimentConfig::grid_h);
    add_d("theta", &ExperimentConfig::theta);
    add_d("ell", &ExperimentConfig::ell);
    add_d("h0", &ExperimentConfig::h0);
    add_d("tau0", &ExperimentConfig::tau0);
    add_i("k", &ExperimentConfig::k);
    add_d("alpha", &ExperimentConfig::alpha);
    add_d("mu", &ExperimentConfig::mu);
    add_d("delta", &ExperimentConfig::delta);
    add_d("cutoff_radius", &ExperimentConfig::cutoff_radius);
    add_d("newton_tol", &ExperimentConfig::newton_tol);
    add_d("ode_step", &ExperimentConfig::ode_step);
    add_i("galerkin_K", &ExperimentConfig::galerkin_K);
    add_i("galerkin_steps", &ExperimentConfig::galerkin_steps);
    add_d("aniso_a", &ExperimentConfig::aniso_a);
    add_d("aniso_b", &ExperimentConfig::aniso_b);
    add_b("csv_only", &ExperimentConfig::csv_only);
    add_b("dry_run", &ExperimentConfig::dry_run);
    return e;
  }();
  return s;
}

}  // namespace

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  for (const auto& e : schema()) os << e.key << " = " << e.get(*this) << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
    std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    bool found = false;
    for (const auto& e : schema())
      if (e.key == key) {
        e.set(c, val);
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(theta > 0 && theta < 1, "theta in (0,1)");
  require(ell > 0, "ell > 0");
  require(h0 > 1, "h0 > 1");
  require(tau0 < 0, "tau0 < 0");
  require(k >= 4, "k >= 4");
  require(alpha > 0 && alpha < 1, "alpha in (0,1)");
  require(mu >= 0, "mu >= 0");
  require(delta > 0 && delta < 0.5, "delta in (0, 1/2)");
  require(grid_h > 0 && grid_h <= 0.2, "grid_h in (0, 0.2]");
  require(disk_radius >= 1, "disk_radius >= 1");
  require(galerkin_K >= 3, "galerkin_K >= 3");
  require(newton_tol > 0, "newton_tol > 0");
}

std::uint64_t ExperimentConfig::hash() const {
  // out_dir is excluded: the artifact location is not semantic configuration
  std::uint64_t h = 1469598103934665603ull;
  std::istringstream is(serialize());
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("out_dir", 0) == 0) continue;
    for (unsigned char ch : line) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= '\n';
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace translab
