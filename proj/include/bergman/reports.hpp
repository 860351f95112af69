#pragma once

// JSON and CSV renderings of library results.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bergman/composition.hpp"
#include "bergman/config.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/verification.hpp"
#include "bergman/weights.hpp"

namespace bergman {

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const BoundedRatioTest& t) {
  return {{"min", t.min}, {"max", t.max}, {"trend_slope", t.trend_slope}, {"bounded", t.bounded}};
}

inline Json to_json(const CriterionQuantity& q) {
  return {{"name", q.name}, {"value", q.value}, {"verdict", to_string(q.verdict)}, {"trail", q.trail}};
}

inline Json to_json(const SchattenEstimate& s) {
  return {{"p", s.p},
          {"value", s.value},
          {"converged", s.converged},
          {"last_step", s.last_step},
          {"sizes", s.sizes},
          {"trail", s.trail},
          {"leading_singular_values",
           std::vector<double>(s.singular_values.begin(),
                               s.singular_values.begin() + std::min<std::size_t>(16, s.singular_values.size()))}};
}

inline Json to_json(const WeightClassReport& r) {
  return {{"in_Dhat", r.in_Dhat},
          {"reverse_doubling", r.reverse_doubling},
          {"regular", r.regular},
          {"doubling_constant", r.doubling_constant},
          {"doubling_exponent_beta", r.doubling_exponent_beta},
          {"reverse_doubling_constant", r.reverse_doubling_constant},
          {"regularity_min", r.regularity_min},
          {"regularity_max", r.regularity_max},
          {"doubling_test", to_json(r.doubling_test)},
          {"reverse_test", to_json(r.reverse_test)},
          {"regularity_test", to_json(r.regularity_test)},
          {"tested_radius", r.tested_radius}};
}

inline Json to_json(const CriterionReport& r) {
  Json j{{"p", r.exponents.p},
         {"q", r.exponents.q},
         {"r", r.r},
         {"weight", r.weight},
         {"measure", r.measure},
         {"levels", r.levels},
         {"berezin_sup", to_json(r.berezin_sup)},
         {"carleson_sup", to_json(r.carleson_sup)},
         {"carleson_argmax", to_json(r.carleson.argmax_center)},
         {"carleson_centers", r.carleson.centers_evaluated},
         {"berezin_vanishing_tail", r.berezin_vanishing_tail},
         {"carleson_vanishing_tail", r.carleson.vanishing_tail},
         {"bounded_verdict", r.bounded_verdict},
         {"compact_verdict", r.compact_verdict},
         {"dual_verdict", r.dual_verdict}};
  if (r.mu_hat_norm) j["mu_hat_norm"] = to_json(*r.mu_hat_norm);
  if (r.berezin_norm) j["berezin_norm"] = to_json(*r.berezin_norm);
  if (r.norm_ratio) j["norm_ratio"] = *r.norm_ratio;
  return j;
}

inline Json to_json(const SchattenReport& r) {
  return {{"p", r.p},
          {"weight", r.weight},
          {"measure", r.measure},
          {"dyadic_sum", to_json(r.dyadic_sum)},
          {"pseudo_integral", to_json(r.pseudo_integral)},
          {"berezin_integral", to_json(r.berezin_integral)},
          {"cutoff_regular", r.cutoff_regular},
          {"berezin_applicable", r.berezin_applicable},
          {"cell_convention", r.cell_convention}};
}

inline Json to_json(const CompositionSchatten& c) {
  return {{"composition", to_json(c.composition)},
          {"pullback", to_json(c.pullback)},
          {"gap_trail", c.gap_trail},
          {"relative_gap", c.relative_gap},
          {"rows", c.rows}};
}

inline Json to_json(const CheckResult& c) {
  return {{"id", c.id}, {"description", c.description}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}};
}

inline Json to_json(const SuiteResult& s) {
  Json checks = Json::array();
  for (const CheckResult& c : s.checks) checks.push_back(to_json(c));
  return {{"suite", s.name}, {"passed", s.passed()}, {"failures", s.failures()}, {"checks", checks}};
}

// Long-format CSV of named trails: quantity,level,value.
inline void write_trails(std::ostream& out, const std::vector<std::pair<const CriterionQuantity*, int>>& trails) {
  out << "quantity,level,value\n";
  char buf[64];
  for (const auto& [q, first_level] : trails) {
    for (std::size_t i = 0; i < q->trail.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", q->trail[i]);
      out << q->name << ',' << first_level + static_cast<int>(i) << ',' << buf << '\n';
    }
  }
}

}  // namespace bergman
