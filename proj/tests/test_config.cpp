#include "doctest.h"

#include <cmath>
#include <string>

#include "bergman/config.hpp"
#include "bergman/expression.hpp"

using namespace bergman;
using doctest::Approx;

namespace {
std::string error_path(const std::string& text) {
  try {
    config_from_json(Json::parse(text));
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}
}  // namespace

TEST_CASE("expressions") {
  CHECK(Expression::parse("2 * r + 1")(0.25, 0.75) == Approx(1.5));
  CHECK(Expression::parse("-2^2")(0.0, 1.0) == Approx(-4.0));
  CHECK(Expression::parse("2^3^2")(0.0, 1.0) == Approx(512.0));
  CHECK(Expression::parse("log(e) + sqrt(4) + abs(-1) + exp(0)")(0.0, 1.0) == Approx(5.0));
  CHECK(Expression::parse("omr ^ -0.5")(0.75, 0.25) == Approx(2.0));
  // "1 - r" uses the accurate complement.
  CHECK(Expression::parse("(1 - r)^-1")(1.0, 1e-20) == Approx(1e20));
  CHECK(Expression::parse("pi")(0.0, 1.0) == Approx(kPi));
  CHECK_THROWS_AS(Expression::parse("r +"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("foo(r)"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("(r"), ExpressionError);
  try {
    Expression::parse("r $ 2");
  } catch (const ExpressionError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("weights and measures from JSON") {
  CHECK(weight_from_json(Json::parse(R"({"family":"standard","alpha":1})")).family() == WeightFamily::standard);
  CHECK(weight_from_json(Json::parse(R"({"family":"log","alpha":3})")).parameter() == 3.0);
  const RadialWeight u = weight_from_json(Json::parse(R"({"family":"user","expr":"2*r"})"));
  CHECK(u.density(0.5) == Approx(1.0));
  const RadialWeight reg = weight_from_json(Json::parse(R"({"family":"regularize","of":{"family":"standard","alpha":0}})"));
  CHECK(reg.density(0.7) == Approx(1.0).epsilon(1e-12));

  const Measure pt = measure_from_json(Json::parse(R"({"type":"point","atoms":[[0.1,0.2,1.5],[0,0,1]]})"), std::nullopt);
  CHECK(pt.atoms().size() == 2);
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const Measure wd = measure_from_json(Json::parse(R"({"type":"weighted","factor":"omr","support":0.5})"), s0);
  CHECK(wd.support_radius() == 0.5);
  CHECK(wd.is_radial());
  const Measure pb = measure_from_json(Json::parse(R"({"type":"pullback","symbol":{"type":"poly","coeffs":[[0,0],[0.5,0]]}})"), s0);
  CHECK(pb.kind() == Measure::Kind::pullback);

  const Symbol b = symbol_from_json(Json::parse(R"({"type":"blaschke","zeros":[[0.1,0.2]],"rotation":0.5})"));
  CHECK(b.form() == Symbol::Form::blaschke);
  CHECK(b.rotation() == 0.5);
}

TEST_CASE("schema errors carry field paths") {
  CHECK(error_path(R"({"weight":{"family":"nope"}})") == "weight.family");
  CHECK(error_path(R"({"weight":{"family":"standard"}})") == "weight.alpha");
  CHECK(error_path(R"({"weight":{"family":"standard","alpha":-2}})") == "weight.alpha");
  CHECK(error_path(R"({"weight":{"family":"standard","alpha":1,"beta":2}})") == "weight.beta");
  CHECK(error_path(R"({"mesure":{}})") == "mesure");
  CHECK(error_path(R"({"measure":{"type":"point","atoms":[[0,0,1],[0.1,0.2,-1]]}})") == "measure.atoms[1][2]");
  CHECK(error_path(R"({"measure":{"type":"point","atoms":[[2,0,1]]}})") == "measure.atoms[0]");
  CHECK(error_path(R"({"measure":{"type":"weighted"}})") == "measure.weight");
  CHECK(error_path(R"({"measure":{"type":"radial_density","expr":"r +"}})") == "measure.expr");
  CHECK(error_path(R"({"symbol":{"type":"poly","coeffs":[[0,0],[2,0]]}})") == "symbol.coeffs");
  CHECK(error_path(R"({"symbol":{"type":"blaschke","zeros":[[1.5,0]]}})") == "symbol.zeros");
  CHECK(error_path(R"({"p":"two"})") == "p");
  CHECK(error_path(R"({"p":-1})") == "p");
  CHECK(error_path(R"({"r":1.5})") == "r");
  CHECK(error_path(R"({"N":0})") == "N");
  CHECK(error_path(R"({"N":2.5})") == "N");
  CHECK(error_path(R"({"z":[1,0]})") == "z");
  CHECK(error_path(R"({"grid":{"j_max":99}})") == "grid");
  CHECK(error_path(R"({"grid":{"depth":3}})") == "grid.depth");
  CHECK(error_path(R"({"quad":{"rtol":-1}})") == "quad");
  CHECK(error_path(R"({"output":{"file":"x"}})") == "output.file");
  CHECK(error_path("[1,2]") == "config");
}

TEST_CASE("resolved configs") {
  const ExperimentConfig c = config_from_json(Json::parse(
      R"({"weight":{"family":"log","alpha":2},"measure":{"type":"weighted"},"p":2,"q":1.5,"z":[0.1,0.2],"grid":{"j_max":9},"quad":{"rtol":1e-7}})"));
  REQUIRE(c.weight);
  REQUIRE(c.measure);
  CHECK(*c.p == 2.0);
  CHECK(std::abs(*c.z - Complex(0.1, 0.2)) == 0.0);
  CHECK(c.center_grid().j_max == 9);
  CHECK(c.quad.relative_tolerance == 1e-7);
  CHECK(c.resolved["quad"]["rtol"] == 1e-7);
  CHECK(c.resolved["quad"].contains("max_subdiv"));
  CHECK(c.resolved["weight"]["family"] == "log");
  // A radial grid needs more levels than a center grid.
  const ExperimentConfig shallow = config_from_json(Json::parse(R"({"grid":{"j_max":3}})"));
  CHECK(shallow.center_grid().j_max == 3);
  CHECK_THROWS_AS(shallow.radial_grid(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
