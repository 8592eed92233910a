#include "sdns/config.hpp"

#include "sdns/format.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sdns {

namespace {

struct ValueError {
  std::string what;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != end)
    throw ValueError{"expected a number, got '" + v + "'"};
  return out;
}

template <class Int>
Int parse_integer(const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != end)
    throw ValueError{"expected an integer, got '" + v + "'"};
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValueError{"expected true or false, got '" + v + "'"};
}

std::vector<double> parse_list(std::string v) {
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ValueError{"unterminated list '" + v + "'"};
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
  // An empty list is syntactically fine; range checks reject it where it matters.
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt17(v[i]);
  return s;
}

template <class F>
auto rethrow_invalid(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ValueError{e.what()};
  }
}

const char* ic_type_name(InitialCondition::Type t) {
  switch (t) {
    case InitialCondition::Type::Mode: return "mode";
    case InitialCondition::Type::Random: return "random";
    case InitialCondition::Type::Coeffs: return "coeffs";
  }
  return "mode";
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SDNS_DOUBLE(key, member)                                                  \
  Key {                                                                           \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_double(v); }, \
        [](const RunConfig& c) { return fmt17(c.member); }                        \
  }
#define SDNS_INT(key, member)                                                          \
  Key {                                                                                \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_integer<int>(v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }                    \
  }
#define SDNS_U64(key, member)                                              \
  Key {                                                                    \
    key,                                                                   \
        [](RunConfig& c, const std::string& v) {                           \
          c.member = parse_integer<std::uint64_t>(v);                      \
        },                                                                 \
        [](const RunConfig& c) { return std::to_string(c.member); }        \
  }
#define SDNS_BOOL(key, member)                                                  \
  Key {                                                                         \
    key, [](RunConfig& c, const std::string& v) { c.member = parse_bool(v); }, \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      SDNS_INT("grid.n_r", sim.n_r),
      SDNS_INT("grid.n_theta", sim.n_theta),
      SDNS_DOUBLE("sim.nu", sim.nu),
      SDNS_DOUBLE("sim.alpha", sim.alpha),
      SDNS_INT("sim.n_modes", sim.n_modes),
      SDNS_DOUBLE("sim.dt", sim.dt),
      SDNS_DOUBLE("sim.t_end", sim.t_end),
      SDNS_DOUBLE("sim.hitting_M", sim.hitting_M),
      Key{"sim.scheme",
          [](RunConfig& c, const std::string& v) {
            c.sim.scheme = rethrow_invalid([&] { return scheme_from_string(v); });
          },
          [](const RunConfig& c) { return std::string(to_string(c.sim.scheme)); }},
      Key{"sim.ito_corrector",
          [](RunConfig& c, const std::string& v) {
            c.sim.ito_corrector = rethrow_invalid([&] { return ito_corrector_from_string(v); });
          },
          [](const RunConfig& c) { return std::string(to_string(c.sim.ito_corrector)); }},
      SDNS_BOOL("sim.integrating_factor", sim.integrating_factor),
      SDNS_BOOL("sim.nonlinear", sim.nonlinear),
      Key{"sim.formulation",
          [](RunConfig& c, const std::string& v) {
            if (v == "velocity") c.formulation = Formulation::Velocity;
            else if (v == "vorticity") c.formulation = Formulation::Vorticity;
            else throw ValueError{"expected velocity or vorticity, got '" + v + "'"};
          },
          [](const RunConfig& c) {
            return std::string(c.formulation == Formulation::Velocity ? "velocity" : "vorticity");
          }},
      SDNS_INT("sim.paths", paths),
      Key{"sim.ic.type",
          [](RunConfig& c, const std::string& v) {
            if (v == "mode") c.sim.ic.type = InitialCondition::Type::Mode;
            else if (v == "random") c.sim.ic.type = InitialCondition::Type::Random;
            else if (v == "coeffs") c.sim.ic.type = InitialCondition::Type::Coeffs;
            else throw ValueError{"expected mode, random or coeffs, got '" + v + "'"};
          },
          [](const RunConfig& c) { return std::string(ic_type_name(c.sim.ic.type)); }},
      SDNS_INT("sim.ic.mode", sim.ic.mode),
      SDNS_DOUBLE("sim.ic.amplitude", sim.ic.amplitude),
      SDNS_U64("sim.ic.seed", sim.ic.seed),
      SDNS_DOUBLE("sim.ic.h1_norm", sim.ic.h1_norm),
      SDNS_INT("sim.ic.bandwidth", sim.ic.bandwidth),
      Key{"sim.ic.coeffs",
          [](RunConfig& c, const std::string& v) { c.sim.ic.coeffs = parse_list(v); },
          [](const RunConfig& c) { return list_text(c.sim.ic.coeffs); }},
      SDNS_BOOL("noise.enabled", sim.noise.enabled),
      SDNS_INT("noise.modes", sim.noise.modes),
      SDNS_DOUBLE("noise.decay_rate", sim.noise.decay_rate),
      SDNS_U64("noise.seed", sim.noise.seed),
      SDNS_DOUBLE("noise.bump.radius", sim.noise.bump.radius),
      SDNS_INT("noise.bump.power", sim.noise.bump.power),
      SDNS_DOUBLE("noise.bump.amplitude", sim.noise.bump.amplitude),
      Key{"sweep.nu_list",
          [](RunConfig& c, const std::string& v) { c.sweep_nu_list = parse_list(v); },
          [](const RunConfig& c) { return list_text(c.sweep_nu_list); }},
      SDNS_INT("validate.samples", validate_samples),
      SDNS_U64("validate.seed", validate_seed),
      SDNS_INT("output.verbosity", verbosity),
  };
  return table;
}

#undef SDNS_DOUBLE
#undef SDNS_INT
#undef SDNS_U64
#undef SDNS_BOOL

const Key* find_key(const std::string& name) {
  for (const auto& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

class Parser {
 public:
  void assign(const std::string& key, const std::string& value, const std::string& where) {
    const Key* k = find_key(key);
    if (!k) throw ConfigError(where + ": unknown key '" + key + "'");
    if (const auto it = origin_.find(key); it != origin_.end() && !overriding_)
      throw ConfigError(where + ": " + key + ": already set at " + it->second);
    try {
      k->set(cfg_, value);
    } catch (const ValueError& e) {
      throw ConfigError(where + ": " + key + ": " + e.what);
    }
    origin_[key] = where;
  }

  void read_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string where = origin + ":" + std::to_string(lineno);
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError(where + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty()) throw ConfigError(where + ": empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError(where + ": missing key");
      assign(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)), where);
    }
  }

  void apply_overrides(const std::vector<std::string>& overrides) {
    overriding_ = true;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set " + o + ": expected key=value");
      assign(trim(o.substr(0, eq)), trim(o.substr(eq + 1)), "--set");
    }
  }

  RunConfig finish() {
    check("sim.nu", cfg_.sim.nu > 0.0, "must be > 0");
    check("sim.paths", cfg_.paths >= 1, "must be >= 1");
    check("validate.samples", cfg_.validate_samples >= 1, "must be >= 1");
    check("output.verbosity", cfg_.verbosity >= 0, "must be >= 0");
    check("sweep.nu_list", !cfg_.sweep_nu_list.empty(), "must not be empty");
    for (std::size_t i = 0; i < cfg_.sweep_nu_list.size(); ++i) {
      check("sweep.nu_list", cfg_.sweep_nu_list[i] > 0.0, "entries must be > 0");
      if (i > 0)
        check("sweep.nu_list", cfg_.sweep_nu_list[i] <= cfg_.sweep_nu_list[i - 1],
              "must be non-increasing");
    }
    if (cfg_.formulation == Formulation::Vorticity)
      check("sim.alpha", cfg_.sim.alpha == 2.0, "the vorticity formulation needs 2");
    try {
      cfg_.sim.validate();
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      const std::string key = msg.substr(0, msg.find(':'));
      throw ConfigError(located(key) + "range error: " + msg);
    }
    return cfg_;
  }

 private:
  std::string located(const std::string& key) const {
    const auto it = origin_.find(key);
    return it == origin_.end() ? "" : it->second + ": ";
  }

  void check(const std::string& key, bool ok, const std::string& what) const {
    if (!ok) throw ConfigError(located(key) + "range error: " + key + ": " + what);
  }

  RunConfig cfg_;
  std::map<std::string, std::string> origin_;
  bool overriding_ = false;
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& origin) {
  Parser p;
  p.read_text(text, origin);
  p.apply_overrides(overrides);
  return p.finish();
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides, path);
}

std::string canonical_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(cfg) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.emplace_back(k.name);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace sdns
