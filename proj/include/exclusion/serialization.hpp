#pragma once

// JSON and CSV forms of the analysis results.

#include <json.hpp>

#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "exclusion/evolution.hpp"
#include "exclusion/mixing.hpp"
#include "exclusion/report.hpp"
#include "exclusion/spectral.hpp"

namespace exclusion {

using Json = nlohmann::ordered_json;

inline Json to_json(const SpectrumSummary& s) {
  Json pairs = Json::array();
  for (const auto& p : s.pairs) pairs.push_back({{"value", p.value}, {"multiplicity", p.multiplicity}});
  return {{"n", s.n}, {"ell", s.ell}, {"alpha", s.alpha}, {"kind", to_string(s.kind)}, {"pairs", pairs}};
}

inline SpectrumSummary spectrum_from_json(const Json& j) {
  SpectrumSummary s;
  s.n = j.at("n").get<int>();
  s.ell = j.at("ell").get<int>();
  s.alpha = j.at("alpha").get<double>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "UEP")
    s.kind = SpectrumKind::UEP;
  else if (kind == "LEP")
    s.kind = SpectrumKind::LEP;
  else if (kind == "CAYLEY")
    s.kind = SpectrumKind::Cayley;
  else
    throw ParameterError("unknown spectrum kind '" + kind + "'");
  for (const auto& p : j.at("pairs"))
    s.pairs.push_back({p.at("value").get<double>(), p.at("multiplicity").get<std::uint64_t>()});
  return s;
}

inline Json to_json(const EnvelopeSet& e) {
  return {{"n", e.n}, {"ell", e.ell}, {"alpha", e.alpha}, {"values", e.values}};
}

inline Json to_json(const MixingReport& r) {
  return {{"n", r.n}, {"ell", r.ell}, {"kind", to_string(r.kind)}, {"epsilon", r.epsilon},
          {"tau2", r.tau2}, {"tol", r.tol}};
}

inline Json to_json(const L2Curve& c) {
  Json samples = Json::array();
  for (const auto& s : c.samples)
    samples.push_back({{"t", s.t}, {"c", s.c}, {"l2", s.l2}, {"lower", s.lower}, {"upper", s.upper}});
  return {{"n", c.params.n}, {"ell", c.params.ell}, {"kind", to_string(c.params.kind)},
          {"alpha", c.params.alpha}, {"samples", samples}};
}

/// Header "t,c,l2,lower,upper", one row per sample, full double precision.
inline void write_curve_csv(std::ostream& os, const L2Curve& c) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "t,c,l2,lower,upper\n";
  for (const auto& s : c.samples) os << s.t << ',' << s.c << ',' << s.l2 << ',' << s.lower << ',' << s.upper << '\n';
  os.precision(old);
}

inline Json to_json(const TvEstimate& e) {
  return {{"tv_estimate", e.estimate}, {"halfwidth", e.halfwidth}, {"bias_bound", e.bias_bound},
          {"replicas", e.replicas}, {"states", e.states}};
}

inline Json to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"bound", c.bound},
                      {"detail", c.detail}});
  return {{"passed", r.passed()}, {"checks", checks}};
}

inline Json to_json(const CoefficientReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"value", row.value}, {"multiplicity", row.multiplicity}, {"max_deviation", row.max_deviation}});
  return {{"n", r.params.n}, {"ell", r.params.ell}, {"kind", to_string(r.params.kind)}, {"alpha", r.params.alpha},
          {"dim", r.dim}, {"tol", r.tol}, {"passed", r.passed()}, {"rows", rows}};
}

inline Json to_json(const SandwichReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = {{"c", row.c}, {"t", row.t}, {"value", row.value}, {"exact", row.exact},
              {"lower", row.lower}, {"upper", row.upper}, {"lower_ok", row.lower_ok}};
    j["upper_ok"] = row.upper_ok ? Json(*row.upper_ok) : Json(nullptr);
    if (row.upper_estimate) j["upper_estimate"] = *row.upper_estimate;
    rows.push_back(std::move(j));
  }
  Json out = {{"n", r.n}, {"ell", r.ell}, {"kind", to_string(r.kind)}, {"passed", r.passed()}, {"rows", rows}};
  if (r.smallest_n_upper) out["smallest_n_upper"] = *r.smallest_n_upper;
  if (r.lep_n_threshold) out["lep_n_threshold"] = *r.lep_n_threshold;
  return out;
}

}  // namespace exclusion
