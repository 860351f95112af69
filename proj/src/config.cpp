#include "bergman/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "bergman/expression.hpp"

namespace bergman {

namespace {

std::string key_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(key_path(path, it.key()), "unknown field");
  }
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(key_path(path, key), "required field missing");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double number_field(const Json& j, const std::string& path, const char* key) {
  return number(field(j, path, key), key_path(path, key));
}

std::optional<double> optional_number(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  return number(*it, key_path(path, key));
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::optional<int> optional_integer(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  return integer(*it, key_path(path, key));
}

std::string string_field(const Json& j, const std::string& path, const char* key) {
  const Json& v = field(j, path, key);
  if (!v.is_string()) throw ConfigError(key_path(path, key), "expected a string");
  return v.get<std::string>();
}

Complex complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a number or a pair [re, im]");
  return {number(j[0], index_path(path, 0)), number(j[1], index_path(path, 1))};
}

std::vector<Complex> complex_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], index_path(path, i)));
  return out;
}

Expression expression_field(const Json& j, const std::string& path, const char* key) {
  const std::string src = string_field(j, path, key);
  try {
    return Expression::parse(src);
  } catch (const ExpressionError& e) {
    throw ConfigError(key_path(path, key), e.what());
  }
}

// Library errors raised while building an object are reported at its path.
template <class F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

RadialWeight weight_from_json(const Json& j, const std::string& path) {
  require_object(j, path);
  const std::string family = string_field(j, path, "family");
  if (family == "standard" || family == "log") {
    allow_keys(j, path, {"family", "alpha"});
    const double alpha = number_field(j, path, "alpha");
    return at_path(key_path(path, "alpha"), [&] {
      return family == "standard" ? RadialWeight::standard(alpha) : RadialWeight::log_weight(alpha);
    });
  }
  if (family == "exponential") {
    allow_keys(j, path, {"family", "c"});
    const double c = number_field(j, path, "c");
    return at_path(key_path(path, "c"), [&] { return RadialWeight::exponential(c); });
  }
  if (family == "regularize") {
    allow_keys(j, path, {"family", "of"});
    const RadialWeight inner = weight_from_json(field(j, path, "of"), key_path(path, "of"));
    return at_path(path, [&] { return regularize(inner); });
  }
  if (family == "user") {
    allow_keys(j, path, {"family", "expr"});
    const Expression e = expression_field(j, path, "expr");
    return at_path(key_path(path, "expr"), [&] {
      return RadialWeight::user([e](double r, double omr) { return e(r, omr); }, e.source());
    });
  }
  throw ConfigError(key_path(path, "family"), "unknown weight family '" + family + "'");
}

Symbol symbol_from_json(const Json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = string_field(j, path, "type");
  if (type == "poly") {
    allow_keys(j, path, {"type", "coeffs"});
    std::vector<Complex> c = complex_list(field(j, path, "coeffs"), key_path(path, "coeffs"));
    return at_path(key_path(path, "coeffs"), [&] { return Symbol::polynomial(std::move(c)); });
  }
  if (type == "blaschke") {
    allow_keys(j, path, {"type", "zeros", "rotation"});
    std::vector<Complex> zeros = complex_list(field(j, path, "zeros"), key_path(path, "zeros"));
    const double rotation = optional_number(j, path, "rotation").value_or(0.0);
    return at_path(key_path(path, "zeros"), [&] { return Symbol::blaschke(std::move(zeros), rotation); });
  }
  throw ConfigError(key_path(path, "type"), "unknown symbol type '" + type + "'");
}

Measure measure_from_json(const Json& j, const std::optional<RadialWeight>& base, const std::string& path) {
  require_object(j, path);
  const std::string type = string_field(j, path, "type");
  auto weight_or_base = [&]() -> RadialWeight {
    auto it = j.find("weight");
    if (it != j.end()) return weight_from_json(*it, key_path(path, "weight"));
    if (!base) throw ConfigError(key_path(path, "weight"), "required when no top-level weight is given");
    return *base;
  };
  auto support = [&]() {
    const double s = optional_number(j, path, "support").value_or(1.0);
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError(key_path(path, "support"), "must lie in (0, 1]");
    return s;
  };
  if (type == "point") {
    allow_keys(j, path, {"type", "atoms"});
    const Json& atoms = field(j, path, "atoms");
    const std::string apath = key_path(path, "atoms");
    if (!atoms.is_array() || atoms.empty()) throw ConfigError(apath, "expected a non-empty array");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string ip = index_path(apath, i);
      const Json& a = atoms[i];
      if (!a.is_array() || a.size() != 3) throw ConfigError(ip, "expected [x, y, mass]");
      Atom atom{{number(a[0], index_path(ip, 0)), number(a[1], index_path(ip, 1))}, number(a[2], index_path(ip, 2))};
      if (!(std::abs(atom.location) < 1.0)) throw ConfigError(ip, "atom must lie in the open disc");
      if (!(atom.mass > 0.0)) throw ConfigError(index_path(ip, 2), "mass must be positive");
      out.push_back(atom);
    }
    return Measure::point_masses(std::move(out));
  }
  if (type == "radial_density") {
    allow_keys(j, path, {"type", "expr", "support"});
    const Expression e = expression_field(j, path, "expr");
    const double s = support();
    return at_path(path, [&] {
      return Measure::radial_density([e](double r, double omr) { return e(r, omr); }, e.source(), s);
    });
  }
  if (type == "weighted") {
    allow_keys(j, path, {"type", "weight", "factor", "scale", "support"});
    const RadialWeight w = weight_or_base();
    const double scale = optional_number(j, path, "scale").value_or(1.0);
    if (!(scale > 0.0)) throw ConfigError(key_path(path, "scale"), "must be positive");
    const double s = support();
    if (j.contains("factor")) {
      const Expression e = expression_field(j, path, "factor");
      return at_path(path, [&] {
        return Measure::weighted_by(w, [e, scale](double r, double omr) { return scale * e(r, omr); },
                                    "(" + e.source() + ")*" + w.label(), s);
      });
    }
    return at_path(path, [&] { return Measure::weighted(w, scale, s); });
  }
  if (type == "pullback") {
    allow_keys(j, path, {"type", "symbol", "weight"});
    const Symbol phi = symbol_from_json(field(j, path, "symbol"), key_path(path, "symbol"));
    return Measure::pullback(phi, weight_or_base());
  }
  throw ConfigError(key_path(path, "type"), "unknown measure type '" + type + "'");
}

QuadSpec quad_from_json(const Json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, path, {"rtol", "max_subdiv", "abs_floor"});
  QuadSpec q;
  if (auto v = optional_number(j, path, "rtol")) q.relative_tolerance = *v;
  if (auto v = optional_integer(j, path, "max_subdiv")) q.max_subdivisions = *v;
  if (auto v = optional_number(j, path, "abs_floor")) q.absolute_floor = *v;
  at_path(path, [&] {
    q.validate();
    return 0;
  });
  return q;
}

CenterGrid ExperimentConfig::center_grid() const {
  CenterGrid g;
  if (grid.j_min) g.j_min = *grid.j_min;
  if (grid.j_max) g.j_max = *grid.j_max;
  if (grid.max_angle_bits) g.max_angle_bits = *grid.max_angle_bits;
  at_path("grid", [&] {
    g.validate();
    return 0;
  });
  return g;
}

RadialGrid ExperimentConfig::radial_grid() const {
  RadialGrid g;
  if (grid.j_min) g.j_min = *grid.j_min;
  if (grid.j_max) g.j_max = *grid.j_max;
  at_path("grid", [&] {
    g.validate();
    return 0;
  });
  return g;
}

ExperimentConfig config_from_json(const Json& j) {
  require_object(j, "config");
  allow_keys(j, "", {"weight", "nu", "measure", "symbol", "p", "q", "r", "s", "N", "z", "zeta", "grid", "quad", "output"});
  ExperimentConfig c;
  c.resolved = j;
  if (j.contains("weight")) c.weight = weight_from_json(j["weight"], "weight");
  if (j.contains("nu")) c.nu = weight_from_json(j["nu"], "nu");
  if (j.contains("symbol")) c.symbol = symbol_from_json(j["symbol"], "symbol");
  if (j.contains("measure")) c.measure = measure_from_json(j["measure"], c.weight, "measure");
  c.p = optional_number(j, "", "p");
  c.q = optional_number(j, "", "q");
  c.r = optional_number(j, "", "r");
  c.s = optional_number(j, "", "s");
  for (const char* k : {"p", "q", "s"}) {
    if (auto v = optional_number(j, "", k); v && !(*v > 0.0)) throw ConfigError(k, "must be positive");
  }
  if (c.r && !(*c.r > 0.0 && *c.r < 1.0)) throw ConfigError("r", "must lie in (0, 1)");
  c.N = optional_integer(j, "", "N");
  if (c.N && (*c.N < 1 || *c.N > 4096)) throw ConfigError("N", "must lie in [1, 4096]");
  if (j.contains("z")) c.z = complex_value(j["z"], "z");
  if (j.contains("zeta")) c.zeta = complex_value(j["zeta"], "zeta");
  for (const char* k : {"z", "zeta"}) {
    const std::optional<Complex>& v = std::string(k) == "z" ? c.z : c.zeta;
    if (v && !(std::abs(*v) < 1.0)) throw ConfigError(k, "must lie in the open disc");
  }
  if (j.contains("grid")) {
    const Json& g = require_object(j["grid"], "grid");
    allow_keys(g, "grid", {"j_min", "j_max", "max_angle_bits"});
    c.grid.j_min = optional_integer(g, "grid", "j_min");
    c.grid.j_max = optional_integer(g, "grid", "j_max");
    c.grid.max_angle_bits = optional_integer(g, "grid", "max_angle_bits");
    c.center_grid();
  }
  if (j.contains("quad")) c.quad = quad_from_json(j["quad"], "quad");
  if (j.contains("output")) {
    const Json& o = require_object(j["output"], "output");
    allow_keys(o, "output", {"dir"});
    if (o.contains("dir")) c.out_dir = string_field(o, "output", "dir");
  }
  c.resolved["quad"] = Json{{"rtol", c.quad.relative_tolerance},
                            {"max_subdiv", c.quad.max_subdivisions},
                            {"abs_floor", c.quad.absolute_floor}};
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace bergman
