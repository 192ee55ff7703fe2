#include "fsi/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace fsi {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Line number of every `section.key` in the text.
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line, section;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t[0] == '[') {
      section = trim(t.substr(1, t.find(']') - 1));
      lines.emplace(section, n);
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) lines.emplace(section + "." + trim(t.substr(0, eq)), n);
  }
  return lines;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const std::string t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const std::string t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!trim(item).empty()) out.push_back(parse_double(item));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(AppConfig&, const std::string&)> set;
  std::function<std::string(const AppConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto real = [&k](const char* sec, const char* name, auto member, auto check) {
      k.push_back({sec, name,
                   [member, check](AppConfig& c, const std::string& v) {
                     const double x = parse_double(v);
                     check(x);
                     member(c) = x;
                   },
                   [member](const AppConfig& c) { return fmt(member(const_cast<AppConfig&>(c))); }});
    };
    auto integer = [&k](const char* sec, const char* name, auto member, auto check) {
      k.push_back({sec, name,
                   [member, check](AppConfig& c, const std::string& v) {
                     const int x = parse_int(v);
                     check(x);
                     member(c) = x;
                   },
                   [member](const AppConfig& c) {
                     return std::to_string(member(const_cast<AppConfig&>(c)));
                   }});
    };
    auto positive = [](double x) { require(x > 0.0, "value must be positive"); };
    auto nonneg = [](double x) { require(x >= 0.0, "value must be non-negative"); };
    auto pos_int = [](int x) { require(x > 0, "value must be a positive integer"); };
    auto nonneg_int = [](int x) { require(x >= 0, "value must be a non-negative integer"); };

#define FSI_REAL(sec, name, expr, check) \
  real(sec, name, [](AppConfig& c) -> double& { return expr; }, check)
#define FSI_INT(sec, name, expr, check) \
  integer(sec, name, [](AppConfig& c) -> int& { return expr; }, check)

    FSI_REAL("physics", "rho_f", c.sim.params.rho_f, positive);
    FSI_REAL("physics", "rho_s", c.sim.params.rho_s, positive);
    FSI_REAL("physics", "mu", c.sim.params.mu, positive);
    FSI_REAL("physics", "gamma1", c.sim.params.gamma1, positive);
    FSI_REAL("physics", "gamma2", c.sim.params.gamma2, positive);
    FSI_REAL("physics", "gamma3", c.sim.params.gamma3, nonneg);
    FSI_REAL("physics", "length", c.sim.params.length, positive);
    FSI_REAL("forcing", "amplitude", c.sim.params.forcing.amplitude, [](double) {});
    FSI_REAL("forcing", "frequency", c.sim.params.forcing.frequency, [](double) {});
    FSI_REAL("forcing", "cutoff", c.sim.params.forcing.cutoff, nonneg);
    FSI_INT("mesh", "nx", c.sim.nx, [](int x) { require(x >= 2, "nx must be at least 2"); });
    FSI_INT("mesh", "ny", c.sim.ny, pos_int);
    FSI_INT("mesh", "level", c.sim.level, nonneg_int);
    FSI_INT("mesh", "quadrature_degree", c.sim.quadrature_degree,
            [](int x) { require(x >= 1 && x <= 6, "quadrature degree must lie in 1..6"); });
    FSI_REAL("time", "tau", c.sim.tau, [](double x) { require(x > 0.0, "tau must be positive"); });
    FSI_REAL("time", "final_time", c.sim.final_time, positive);
    FSI_REAL("scheme", "newton_abs_tol", c.sim.newton.abs_tol, positive);
    FSI_REAL("scheme", "newton_rel_tol", c.sim.newton.rel_tol, positive);
    FSI_INT("scheme", "newton_max_iterations", c.sim.newton.max_iterations, pos_int);
    FSI_REAL("scheme", "eta_floor", c.sim.eta_floor,
             [](double x) { require(x >= 0.0 && x < 1.0, "eta_floor must lie in [0, 1)"); });
    FSI_INT("output", "every", c.sim.output_every, nonneg_int);
    FSI_REAL("study", "final_time", c.study.final_time, positive);
    FSI_REAL("study", "reference_tau", c.study.reference_tau, positive);
    FSI_INT("study", "tau_mesh_nx", c.study.tau_mesh_nx, pos_int);
    FSI_INT("study", "tau_mesh_ny", c.study.tau_mesh_ny, pos_int);
    FSI_INT("study", "h_base_nx", c.study.h_base_nx, pos_int);
    FSI_INT("study", "h_base_ny", c.study.h_base_ny, pos_int);
    FSI_INT("study", "h_levels", c.study.h_levels,
            [](int x) { require(x >= 3, "at least 3 levels are needed"); });
    FSI_REAL("study", "h_tau", c.study.h_tau, positive);
    FSI_INT("study", "compare_nx", c.study.compare_nx, pos_int);
    FSI_INT("study", "compare_ny", c.study.compare_ny, pos_int);
    FSI_REAL("study", "compare_final_time", c.study.compare_final_time, positive);
    FSI_REAL("study", "slope_floor", c.study.slope_floor, [](double) {});
#undef FSI_REAL
#undef FSI_INT

    auto list = [&k](const char* name, std::vector<double> StudyConfig::*member) {
      k.push_back({"study", name,
                   [member](AppConfig& c, const std::string& v) {
                     auto l = parse_list(v);
                     for (double x : l) require(x > 0.0, "time steps must be positive");
                     require(l.size() >= 3, "at least 3 levels are needed");
                     c.study.*member = l;
                   },
                   [member](const AppConfig& c) { return fmt_list(c.study.*member); }});
    };
    list("tau_ladder", &StudyConfig::tau_ladder);
    list("compare_ladder", &StudyConfig::compare_ladder);

    k.push_back({"mesh", "structure_bc",
                 [](AppConfig& c, const std::string& v) {
                   const std::string t = trim(v);
                   if (t == "periodic") c.sim.structure_bc = StructureBC::Periodic;
                   else if (t == "clamped") c.sim.structure_bc = StructureBC::Clamped;
                   else throw std::invalid_argument("structure_bc must be periodic or clamped");
                 },
                 [](const AppConfig& c) {
                   return std::string(c.sim.structure_bc == StructureBC::Periodic ? "periodic" : "clamped");
                 }});
    k.push_back({"scheme", "scheme",
                 [](AppConfig& c, const std::string& v) {
                   const std::string t = trim(v);
                   if (t == "semi") c.sim.scheme = Scheme::SemiImplicit;
                   else if (t == "full") c.sim.scheme = Scheme::FullyImplicit;
                   else throw std::invalid_argument("scheme must be semi or full");
                 },
                 [](const AppConfig& c) {
                   return std::string(c.sim.scheme == Scheme::SemiImplicit ? "semi" : "full");
                 }});
    k.push_back({"scheme", "ustar",
                 [](AppConfig& c, const std::string& v) {
                   const std::string t = trim(v);
                   if (t == "scheme_r") c.sim.ustar = UStar::SchemeR;
                   else if (t == "appendix") c.sim.ustar = UStar::Appendix;
                   else throw std::invalid_argument("ustar must be scheme_r or appendix");
                 },
                 [](const AppConfig& c) {
                   return std::string(c.sim.ustar == UStar::SchemeR ? "scheme_r" : "appendix");
                 }});
    k.push_back({"scheme", "predictor",
                 [](AppConfig& c, const std::string& v) { c.sim.newton.predictor = parse_bool(v); },
                 [](const AppConfig& c) { return std::string(c.sim.newton.predictor ? "true" : "false"); }});
    return k;
  }();
  return table;
}

// Removes `;` and `#` comments, including trailing ones, keeping line numbers.
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto c = line.find_first_of(";#");
    if (c != std::string::npos) line.erase(c);
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

AppConfig parse_config(const std::string& raw) {
  const std::string text = strip_comments(raw);
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }
  const auto lines = key_lines(text);
  auto line_of = [&](const std::string& k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };

  AppConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside of a section", line_of("." + section));
    for (const auto& [name, value] : body) {
      const std::string id = section + "." + name;
      const Key* key = nullptr;
      for (const auto& k : keys())
        if (k.section == section && k.name == name) key = &k;
      if (!key) throw ConfigError("unknown key '" + id + "'", line_of(id));
      try {
        key->set(cfg, value.data());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(id + ": " + e.what(), line_of(id));
      }
    }
  }
  try {
    cfg.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), line_of("time.final_time"));
  }
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const AppConfig& config) {
  std::ostringstream os;
  std::vector<std::string> sections;
  for (const auto& k : keys())
    if (std::find(sections.begin(), sections.end(), k.section) == sections.end())
      sections.push_back(k.section);
  for (const auto& section : sections) {
    os << (section == sections.front() ? "" : "\n") << '[' << section << "]\n";
    for (const auto& k : keys())
      if (k.section == section) os << k.name << " = " << k.get(config) << '\n';
  }
  return os.str();
}

}  // namespace fsi
