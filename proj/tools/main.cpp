#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "bergman/composition.hpp"
#include "bergman/config.hpp"
#include "bergman/kernels.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/verification.hpp"
#include "bergman/weights.hpp"
#include "bergman/reports.hpp"

namespace fs = std::filesystem;
using namespace bergman;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUsage = 64;

// Raw flag values; merged into the config document before validation so
// that flag errors carry the same field paths as file errors.
struct Flags {
  std::string config_path, out_dir, weight, nu, measure, symbol, z, zeta;
  std::optional<double> p, q, r, rtol;
  std::optional<int> N, grid_depth;
  int order = 0;
};

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json parse_inline(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

double parse_number(const std::string& s, const std::string& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(path, "expected a number, got '" + s + "'");
  return v;
}

// standard:A, log:A, exponential:C, regularize:<weight>, or a JSON object.
Json weight_arg(const std::string& s, const std::string& path) {
  if (!s.empty() && s.front() == '{') return parse_inline(s, path);
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError(path, "expected FAMILY:VALUE or a JSON object, got '" + s + "'");
  const std::string family = s.substr(0, colon), rest = s.substr(colon + 1);
  if (family == "standard" || family == "log") return {{"family", family}, {"alpha", parse_number(rest, path)}};
  if (family == "exponential") return {{"family", family}, {"c", parse_number(rest, path)}};
  if (family == "regularize") return {{"family", family}, {"of", weight_arg(rest, path + ".of")}};
  if (family == "user") return {{"family", family}, {"expr", rest}};
  throw ConfigError(path, "unknown weight family '" + family + "'");
}

// "weighted" (omega dA of the top-level weight) or a JSON object.
Json measure_arg(const std::string& s) {
  if (s == "weighted") return {{"type", "weighted"}};
  return parse_inline(s, "measure");
}

// poly:c0,c1,... (real coefficients) or a JSON object.
Json symbol_arg(const std::string& s) {
  if (s.rfind("poly:", 0) == 0) {
    Json coeffs = Json::array();
    std::stringstream ss(s.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(Json::array({parse_number(item, "symbol.coeffs"), 0.0}));
    return {{"type", "poly"}, {"coeffs", coeffs}};
  }
  return parse_inline(s, "symbol");
}

// "x" or "x,y".
Json point_arg(const std::string& s, const std::string& path) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return Json::array({parse_number(s, path), 0.0});
  return Json::array({parse_number(s.substr(0, comma), path), parse_number(s.substr(comma + 1), path)});
}

ExperimentConfig resolve(const Flags& f) {
  Json doc = Json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("config", "cannot open '" + f.config_path + "'");
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config", "expected an object");
  }
  if (!f.weight.empty()) doc["weight"] = weight_arg(f.weight, "weight");
  if (!f.nu.empty()) doc["nu"] = weight_arg(f.nu, "nu");
  if (!f.measure.empty()) doc["measure"] = measure_arg(f.measure);
  if (!f.symbol.empty()) doc["symbol"] = symbol_arg(f.symbol);
  if (!f.z.empty()) doc["z"] = point_arg(f.z, "z");
  if (!f.zeta.empty()) doc["zeta"] = point_arg(f.zeta, "zeta");
  if (f.p) doc["p"] = *f.p;
  if (f.q) doc["q"] = *f.q;
  if (f.r) doc["r"] = *f.r;
  if (f.N) doc["N"] = *f.N;
  if (f.rtol) doc["quad"]["rtol"] = *f.rtol;
  if (f.grid_depth) doc["grid"]["j_max"] = *f.grid_depth;
  if (!f.out_dir.empty()) doc["output"]["dir"] = f.out_dir;
  return config_from_json(doc);
}

template <class T>
const T& need(const std::optional<T>& v, const char* path) {
  if (!v) throw ConfigError(path, "required field missing");
  return *v;
}

// Collects the report and its side files; written on finish().
class Report {
 public:
  Report(std::string command, std::string stem, const ExperimentConfig& cfg)
      : cfg_(cfg), stem_(std::move(stem)) {
    doc_["command"] = std::move(command);
    doc_["generated_at"] = timestamp();
    doc_["config"] = cfg.resolved;
  }

  Json& result() { return doc_["result"]; }
  void warn(const std::string& w) { warnings_.push_back(w); }
  void warn_all(const Warnings& ws) {
    for (const auto& w : ws) warn(w);
  }
  void csv(const std::string& name, std::string content) { csv_.emplace_back(name, std::move(content)); }

  // With an output directory everything goes to files and stdout gets the
  // paths; otherwise the JSON report goes to stdout. `csv_to_stdout` prints
  // the first table instead, for commands whose primary output is CSV.
  void finish(bool csv_to_stdout = false) {
    doc_["warnings"] = warnings_;
    if (cfg_.out_dir.empty()) {
      if (csv_to_stdout && !csv_.empty()) {
        std::cout << csv_.front().second;
        for (const auto& w : warnings_) std::cerr << "warning: " << w << '\n';
      } else {
        std::cout << doc_.dump(2) << '\n';
      }
      return;
    }
    fs::create_directories(cfg_.out_dir);
    const fs::path json_path = fs::path(cfg_.out_dir) / (stem_ + ".json");
    write(json_path, doc_.dump(2) + "\n");
    for (const auto& [name, content] : csv_) write(fs::path(cfg_.out_dir) / name, content);
  }

 private:
  static void write(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    std::cout << path.string() << '\n';
  }

  const ExperimentConfig& cfg_;
  std::string stem_;
  Json doc_ = Json::object();
  Json warnings_ = Json::array();
  std::vector<std::pair<std::string, std::string>> csv_;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out_dir, "directory for JSON and CSV outputs");
  cmd->add_option("--rtol", f.rtol, "relative quadrature tolerance");
  cmd->add_option("--grid-depth", f.grid_depth, "deepest dyadic level j");
  cmd->add_option("--N", f.N, "matrix truncation size");
}

void add_weight(CLI::App* cmd, Flags& f) {
  cmd->add_option("--weight", f.weight, "standard:A | log:A | exponential:C | regularize:W | JSON");
}

// --------------------------------------------------------------- commands

int weights_classify(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const RadialGrid grid = cfg.radial_grid();
  const WeightClassReport rep = classify(w, grid);
  Report out("weights classify", "weights_classify", cfg);
  out.result() = to_json(rep);
  out.result()["weight"] = w.label();
  out.warn_all(w.warnings());
  std::ostringstream csv;
  csv << "j,r,doubling,reverse,regularity\n";
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    auto at = [&](const std::vector<double>& v) { return i < v.size() ? format(v[i]) : std::string(); };
    csv << grid.j_min + static_cast<int>(i) << ',' << format(rep.radii[i]) << ',' << at(rep.doubling_ratios) << ','
        << at(rep.reverse_ratios) << ',' << at(rep.regularity_ratios) << '\n';
  }
  out.csv("weights_classify.csv", csv.str());
  out.finish();
  return 0;
}

int print_suite(const SuiteResult& s, const Flags& f, const std::string& command) {
  for (const CheckResult& c : s.checks) {
    std::printf("%s %-34s %8.2fs  %s\n", c.passed ? "PASS" : "FAIL", c.id.c_str(), c.seconds, c.description.c_str());
    if (!c.passed) std::printf("     %s\n", c.detail.c_str());
  }
  std::printf("%s: %d/%zu passed\n", s.name.c_str(), static_cast<int>(s.checks.size()) - s.failures(), s.checks.size());
  if (!f.out_dir.empty()) {
    ExperimentConfig cfg;
    cfg.out_dir = f.out_dir;
    cfg.resolved = Json::object();
    Report out(command, "verify_" + s.name, cfg);
    out.result() = to_json(s);
    out.finish();
  }
  return s.passed() ? 0 : kExitFailure;
}

int kernel_eval_cmd(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const Complex z = need(cfg.z, "z"), zeta = need(cfg.zeta, "zeta");
  const KernelValue v = kernel_eval(w, z, zeta, f.order, std::max(cfg.quad.relative_tolerance * 1e-4, 1e-15));
  Report out("kernel eval", "kernel_eval", cfg);
  out.result() = {{"weight", w.label()},
                  {"order", f.order},
                  {"value", to_json(v.value)},
                  {"error_estimate", v.error_estimate},
                  {"terms", v.terms}};
  if (w.family() == WeightFamily::standard) {
    const double a = w.parameter();
    const Complex u = 1.0 - std::conj(z) * zeta;
    const Complex exact = f.order == 0 ? (a + 1.0) * std::pow(u, -(2.0 + a))
                                       : (a + 1.0) * (a + 2.0) * std::conj(z) * std::pow(u, -(3.0 + a));
    out.result()["closed_form"] = to_json(exact);
    out.result()["closed_form_gap"] = std::abs(v.value - exact) / std::abs(exact);
  }
  out.warn_all(w.warnings());
  out.finish();
  return 0;
}

int kernel_norm_sweep(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const RadialWeight nu = cfg.nu.value_or(w);
  const double p = cfg.p.value_or(2.0);
  const int j_min = cfg.grid.j_min.value_or(1), j_max = cfg.grid.j_max.value_or(10);
  Report out("kernel norm-sweep", "kernel_norm_sweep", cfg);
  std::ostringstream csv;
  csv << "abs_z,value,theory,ratio\n";
  Json rows = Json::array();
  for (int j = j_min; j <= j_max; ++j) {
    const double m = 1.0 - std::ldexp(1.0, -j);
    const KernelNormEstimate e = kernel_norm(w, nu, m, p, cfg.quad);
    csv << format(m) << ',' << format(e.value_p) << ',' << format(e.theory_value) << ',' << format(e.ratio) << '\n';
    rows.push_back({{"j", j}, {"abs_z", m}, {"value", e.value}, {"value_p", e.value_p}, {"theory", e.theory_value},
                    {"ratio", e.ratio}, {"box_comparator", e.box_comparator}, {"converged", e.converged}});
    if (!e.converged) out.warn("norm at |z| = " + format(m) + " not converged");
    for (const auto& msg : e.warnings) out.warn("|z| = " + format(m) + ": " + msg);
  }
  out.result() = {{"weight", w.label()}, {"nu", nu.label()}, {"p", p}, {"rows", rows}};
  out.csv("kernel_norm_sweep.csv", csv.str());
  out.finish(true);
  return 0;
}

int toeplitz_schatten(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const Measure& mu = need(cfg.measure, "measure");
  const double p = need(cfg.p, "p");
  SchattenReportOptions opt;
  if (cfg.r) opt.r = *cfg.r;
  if (cfg.grid.j_max) opt.j_max = opt.n_max_dyadic = *cfg.grid.j_max;
  const SchattenReport rep = schatten_report(mu, w, p, opt, cfg.quad);
  Report out("toeplitz schatten", "toeplitz_schatten", cfg);
  out.result() = to_json(rep);
  out.warn_all(rep.warnings);
  out.warn_all(w.warnings());
  if (cfg.N) {
    const OperatorMatrix T = toeplitz_matrix(mu, w, *cfg.N, cfg.quad);
    out.result()["matrix_estimate"] = to_json(schatten_norm(T, p));
    out.warn_all(T.warnings);
  }
  std::ostringstream csv;
  write_trails(csv, {{&rep.dyadic_sum, 0}, {&rep.pseudo_integral, 1}, {&rep.berezin_integral, 1}});
  out.csv("toeplitz_schatten_trails.csv", csv.str());
  out.finish();
  return 0;
}

int toeplitz_criteria(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const Measure& mu = need(cfg.measure, "measure");
  const ExponentPair pq(cfg.p.value_or(2.0), cfg.q.value_or(2.0));
  const CenterGrid grid = cfg.center_grid();
  const CriterionReport rep = criteria_report_pq(mu, w, pq, cfg.r.value_or(0.5), grid, cfg.quad);
  Report out("toeplitz criteria", "toeplitz_criteria", cfg);
  out.result() = to_json(rep);
  out.warn_all(rep.warnings);
  out.warn_all(w.warnings());
  std::vector<std::pair<const CriterionQuantity*, int>> trails{{&rep.berezin_sup, grid.j_min},
                                                               {&rep.carleson_sup, grid.j_min}};
  if (rep.mu_hat_norm) trails.emplace_back(&*rep.mu_hat_norm, 1);
  if (rep.berezin_norm) trails.emplace_back(&*rep.berezin_norm, 1);
  std::ostringstream csv;
  write_trails(csv, trails);
  out.csv("toeplitz_criteria_trails.csv", csv.str());
  out.finish();
  return 0;
}

int toeplitz_berezin_sweep(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const RadialWeight& w = need(cfg.weight, "weight");
  const Measure& mu = need(cfg.measure, "measure");
  const BerezinField field = berezin_field(mu, w, cfg.center_grid(), cfg.quad);
  Report out("toeplitz berezin-sweep", "toeplitz_berezin_sweep", cfg);
  std::ostringstream csv;
  csv << "j,r,theta,value,flag\n";
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const int j = field.levels[i];
    const bool bad = !field.converged[i];
    flagged += bad ? 1 : 0;
    csv << j << ',' << format(1.0 - std::ldexp(1.0, -j)) << ',' << format(wrap_angle(std::arg(field.points[i]))) << ','
        << format(field.values[i]) << ',' << (bad ? 1 : 0) << '\n';
  }
  if (flagged > 0) out.warn(std::to_string(flagged) + " Berezin value(s) not converged");
  out.result() = {{"weight", field.weight}, {"measure", field.measure}, {"points", field.values.size()}, {"flagged", flagged}};
  out.csv("toeplitz_berezin_sweep.csv", csv.str());
  out.finish(true);
  return 0;
}

int compose_schatten(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const Symbol& phi = need(cfg.symbol, "symbol");
  const RadialWeight& w = need(cfg.weight, "weight");
  const double p = need(cfg.p, "p");
  const CompositionSchatten res = schatten_composition(phi, w, p, cfg.N.value_or(128));
  Report out("compose schatten", "compose_schatten", cfg);
  out.result() = to_json(res);
  out.result()["weight"] = w.label();
  out.warn_all(res.warnings);
  out.warn_all(w.warnings());
  std::ostringstream csv;
  csv << "size,composition,pullback,gap\n";
  for (std::size_t i = 0; i < res.composition.sizes.size(); ++i) {
    csv << res.composition.sizes[i] << ',' << format(res.composition.trail[i]) << ','
        << (i < res.pullback.trail.size() ? format(res.pullback.trail[i]) : std::string()) << ','
        << (i < res.gap_trail.size() ? format(res.gap_trail[i]) : std::string()) << '\n';
  }
  out.csv("compose_schatten.csv", csv.str());
  out.finish();
  return 0;
}

// Maps library exceptions to exit codes around a command body.
int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman space experiments: weights, kernels, Toeplitz and composition operators"};
  app.require_subcommand(1);
  Flags f;
  std::function<int()> action;

  auto* weights = app.add_subcommand("weights", "radial weight analysis")->require_subcommand(1);
  auto* classify_cmd = weights->add_subcommand("classify", "doubling, reverse-doubling and regularity verdicts");
  add_common(classify_cmd, f);
  add_weight(classify_cmd, f);
  classify_cmd->callback([&] { action = [&] { return weights_classify(f); }; });

  auto* geometry = app.add_subcommand("geometry", "disc geometry")->require_subcommand(1);
  auto* geometry_check = geometry->add_subcommand("check", "run the geometry invariant suite");
  geometry_check->add_option("--out", f.out_dir, "directory for the JSON report");
  geometry_check->callback([&] { action = [&] { return print_suite(geometry_suite(), f, "geometry check"); }; });

  auto* kernel = app.add_subcommand("kernel", "reproducing kernels")->require_subcommand(1);
  auto* keval = kernel->add_subcommand("eval", "B_z(zeta) with a truncation error estimate");
  add_common(keval, f);
  add_weight(keval, f);
  keval->add_option("--z", f.z, "x or x,y");
  keval->add_option("--zeta", f.zeta, "x or x,y");
  keval->add_option("--order", f.order, "0 for the value, 1 for the zeta-derivative")->check(CLI::Range(0, 1));
  keval->callback([&] { action = [&] { return kernel_eval_cmd(f); }; });
  auto* ksweep = kernel->add_subcommand("norm-sweep", "||B_z||^p_{A^p_nu} on |z| = 1 - 2^-j (CSV: abs_z,value,theory,ratio)");
  add_common(ksweep, f);
  add_weight(ksweep, f);
  ksweep->add_option("--nu", f.nu, "target weight, defaults to --weight");
  ksweep->add_option("--p", f.p, "exponent");
  ksweep->callback([&] { action = [&] { return kernel_norm_sweep(f); }; });

  auto* toeplitz = app.add_subcommand("toeplitz", "Toeplitz operators")->require_subcommand(1);
  auto add_measure = [&](CLI::App* cmd) {
    add_common(cmd, f);
    add_weight(cmd, f);
    cmd->add_option("--measure", f.measure, "weighted | JSON measure spec");
  };
  auto* tschatten = toeplitz->add_subcommand("schatten", "Schatten-class quantities of T_mu");
  add_measure(tschatten);
  tschatten->add_option("--p", f.p, "Schatten exponent");
  tschatten->add_option("--r", f.r, "pseudohyperbolic radius");
  tschatten->callback([&] { action = [&] { return toeplitz_schatten(f); }; });
  auto* tcrit = toeplitz->add_subcommand("criteria", "boundedness and compactness quantities for (p, q)");
  add_measure(tcrit);
  tcrit->add_option("--p", f.p, "source exponent");
  tcrit->add_option("--q", f.q, "target exponent");
  tcrit->add_option("--r", f.r, "pseudohyperbolic radius");
  tcrit->callback([&] { action = [&] { return toeplitz_criteria(f); }; });
  auto* tsweep = toeplitz->add_subcommand("berezin-sweep", "Berezin transform on the center grid (CSV: j,r,theta,value,flag)");
  add_measure(tsweep);
  tsweep->callback([&] { action = [&] { return toeplitz_berezin_sweep(f); }; });

  auto* compose = app.add_subcommand("compose", "composition operators")->require_subcommand(1);
  auto* cschatten = compose->add_subcommand("schatten", "|C_phi|_p against |T_pullback|_{p/2}");
  add_common(cschatten, f);
  add_weight(cschatten, f);
  cschatten->add_option("--symbol", f.symbol, "poly:c0,c1,... | JSON symbol spec");
  cschatten->add_option("--p", f.p, "Schatten exponent");
  cschatten->callback([&] { action = [&] { return compose_schatten(f); }; });

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "kernels | weights | toeplitz | schatten | composition | all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--out", f.out_dir, "directory for the JSON report");
  verify->callback([&] { action = [&] { return print_suite(run_suite(suite), f, "verify " + suite); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return guarded(action);
}
