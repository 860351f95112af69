#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "bergman/measures.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol.hpp"
#include "bergman/weights.hpp"

namespace bergman {

using Json = nlohmann::ordered_json;

// Schema violation; `path` names the offending field, e.g. "measure.atoms[1][2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// {"family":"standard","alpha":a} | {"family":"log","alpha":a} |
// {"family":"exponential","c":c} | {"family":"regularize","of":W} |
// {"family":"user","expr":"..."}
RadialWeight weight_from_json(const Json& j, const std::string& path = "weight");

// {"type":"point","atoms":[[x,y,mass],...]} |
// {"type":"radial_density","expr":"...","support":R} |
// {"type":"weighted","weight":W,"factor":"...","scale":s,"support":R} |
// {"type":"pullback","symbol":S,"weight":W}
// Weighted and pullback measures default to `base` when "weight" is absent.
Measure measure_from_json(const Json& j, const std::optional<RadialWeight>& base, const std::string& path = "measure");

// {"type":"poly","coeffs":[[re,im],...]} | {"type":"blaschke","zeros":[[re,im],...],"rotation":theta}
Symbol symbol_from_json(const Json& j, const std::string& path = "symbol");

// {"rtol":1e-9,"max_subdiv":24,"abs_floor":1e-14}
QuadSpec quad_from_json(const Json& j, const std::string& path = "quad");

// Unset fields keep the defaults of the grid they are applied to.
struct GridOverrides {
  std::optional<int> j_min;
  std::optional<int> j_max;
  std::optional<int> max_angle_bits;
};

struct ExperimentConfig {
  std::optional<RadialWeight> weight;
  std::optional<RadialWeight> nu;  // target weight of kernel norms; defaults to `weight`
  std::optional<Measure> measure;
  std::optional<Symbol> symbol;
  std::optional<double> p, q, r, s;
  std::optional<int> N;
  std::optional<Complex> z, zeta;
  GridOverrides grid;
  QuadSpec quad;
  std::string out_dir;
  // Input with defaults filled in; embedded in every report.
  Json resolved;

  // Both throw ConfigError at "grid" when the overrides do not fit the grid.
  // Only the center grid is checked when the config is loaded.
  CenterGrid center_grid() const;
  RadialGrid radial_grid() const;
};

// Validates the whole document before anything is computed. Unknown keys
// are errors.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace bergman
