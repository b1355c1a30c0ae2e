// SPDX-License-Identifier: Apache-2.0
#include <cfkit/report.hpp>

namespace cfkit {

namespace {

Json number(const BigFloat& x) { return to_string(x); }
Json number(const FloatComplex& x) { return to_string(x); }
Json number(const Extended<FloatComplex>& x) { return to_string(x); }

Json payload(const ConvergesEvidence& v) { return {{"limit", to_json(v.limit)}, {"note", v.note}}; }

Json payload(const OddEvenDistinct& v) {
  return {{"odd", to_json(v.odd)}, {"even", to_json(v.even)}, {"gap", number(v.gap)}};
}

Json payload(const GenerallyDivergent& v) {
  return {{"certification", v.certification},
          {"certificate", to_json(v.certificate)},
          {"odd", to_json(v.odd)},
          {"even", to_json(v.even)},
          {"gap", number(v.gap)}};
}

Json payload(const SternStolzDivergent& v) {
  return {{"series_partial_sum", number(v.series_partial_sum)},
          {"series_tail_bound", number(v.series_tail_bound)},
          {"lag", v.lag},
          {"rate", number(v.rate)},
          {"depth", v.depth},
          {"P0", number(v.P0)},
          {"P1", number(v.P1)},
          {"Q0", number(v.Q0)},
          {"Q1", number(v.Q1)},
          {"determinant_residual", number(v.determinant_residual)},
          {"agreed_digits", v.agreed_digits}};
}

Json payload(const TrichotomyCase& v) {
  Json follow = Json::array();
  for (const auto& f : v.follow_up) follow.push_back(to_json(f));
  return {{"relation", to_string(v.relation)},
          {"exceptional", v.exceptional},
          {"profile", to_json(v.profile)},
          {"follow_up", follow}};
}

Json payload(const Theorem5Consistent& v) {
  Json minima = Json::array();
  for (const auto& [start, value] : v.window_minima) minima.push_back({{"from", start}, {"min_abs_a", number(value)}});
  return {{"depth", v.depth},
          {"growth_bound", number(v.growth_bound)},
          {"unit_denominator_applied", v.unit_denominator_applied},
          {"window_minima", minima}};
}

Json payload(const Theorem5Violation& v) { return {{"index", v.index}, {"value", number(v.value)}}; }

Json payload(const Inconclusive& v) { return {{"reason", v.reason}, {"failed_hypothesis", v.failed_hypothesis}}; }

Json side(const ProbeSide& s) {
  return {{"limit", to_json(s.limit)}, {"even", to_json(s.even)}, {"odd", to_json(s.odd)}};
}

}  // namespace

const char* to_string(Trichotomy relation) {
  switch (relation) {
    case Trichotomy::TwoBGreater:
      return "2b>a";
    case Trichotomy::TwoBEqual:
      return "2b=a";
    case Trichotomy::TwoBLess:
      return "2b<a";
  }
  return "?";
}

Json to_json(const LimitEstimate& e) {
  return {{"value", number(e.value)},
          {"converged", e.converged},
          {"agreed_digits", e.agreed_digits},
          {"depth_used", e.depth_used},
          {"method", e.method}};
}

Json to_json(const BoundCertificate& c) {
  Json out{{"mode", c.mode == BoundMode::Symbolic ? "symbolic" : "numeric"},
           {"c1", number(c.c1)},
           {"c2", number(c.c2)},
           {"c3", number(c.c3)},
           {"window_begin", c.window_begin},
           {"window_end", c.window_end},
           {"unit_denominator_applied", c.unit_denominator_applied}};
  out["tail_index"] = c.tail_index ? Json(*c.tail_index) : Json(nullptr);
  return out;
}

Json to_json(const DegreeProfile& p) {
  Json out{{"form", p.form == FamilyForm::General ? "general" : "unit-denominator"},
           {"numerator_step", p.numerator_step},
           {"r1", p.r1},
           {"leading_a", p.leading_a.get_str()}};
  if (p.form == FamilyForm::General) {
    out["denominator_step"] = p.denominator_step;
    out["r2"] = p.r2;
    out["leading_b"] = p.leading_b.get_str();
  }
  return out;
}

Json to_json(const Verdict& v) {
  return {{"kind", v.kind()}, {"evidence", std::visit([](const auto& x) { return payload(x); }, v.payload)}};
}

Json to_json(const ProbeReport& r) {
  return {{"v", side(r.v)},
          {"w", side(r.w)},
          {"min_separation", number(r.min_separation)},
          {"limit_gap", number(r.limit_gap)},
          {"depth", r.depth},
          {"evidence", r.evidence}};
}

}  // namespace cfkit
