#ifndef SUBSTLIB_JSON_IO_HPP_
#define SUBSTLIB_JSON_IO_HPP_

#include <json.hpp>

#include <string>
#include <vector>

#include "algebraic.hpp"
#include "harness.hpp"
#include "independence.hpp"
#include "matrix.hpp"
#include "periodicity.hpp"
#include "polynomial.hpp"

// Exact integers and rationals serialize as decimal strings so consumers
// never face 64-bit overflow; field order is stable (ordered_json).

namespace subst {

using Json = nlohmann::ordered_json;

inline std::string rat_to_string(Rat const& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_from_string(std::string const& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

inline Json poly_to_json(IntPoly const& p) {
  Json coeffs = Json::array();
  for (auto const& c : p.coeffs()) {
    coeffs.push_back(c.get_str());
  }
  return Json{{"coeffs", coeffs}, {"pretty", p.str()}};
}

inline IntPoly poly_from_json(Json const& j) {
  std::vector<Int> coeffs;
  for (auto const& c : j.at("coeffs")) {
    coeffs.emplace_back(c.get<std::string>());
  }
  return IntPoly(std::move(coeffs));
}

inline Json matrix_to_json(IntMatrix const& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      row.push_back(m.at(i, j).get_str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json perron_to_json(PerronValue& v, unsigned digits = 30) {
  Json j;
  j["charpoly"] = poly_to_json(v.charpoly());
  j["integer"]  = v.is_integer() ? Json(v.integer_value().get_str()) : Json();
  j["interval"] = Json{{"lo", rat_to_string(v.lower())},
                       {"hi", rat_to_string(v.upper())}};
  j["approx"]   = v.decimal(digits);
  return j;
}

inline PerronValue perron_from_json(Json const& j) {
  return PerronValue::from_charpoly_interval(
      poly_from_json(j.at("charpoly")),
      rat_from_string(j.at("interval").at("lo").get<std::string>()),
      rat_from_string(j.at("interval").at("hi").get<std::string>()));
}

inline Json independence_to_json(IndependenceVerdict const& v) {
  Json j;
  j["verdict"] = v.dependent ? "dependent"
                             : (v.bound == 0 ? "independent"
                                             : "independent_up_to");
  if (v.dependent) {
    j["k"] = v.k;
    j["l"] = v.l;
  }
  if (!v.dependent && v.bound > 0) {
    j["bound"] = v.bound;
  }
  j["exact"] = v.exact();
  j["bits"]  = v.bits;
  j["alpha_charpoly"] = v.alpha_charpoly;
  j["beta_charpoly"]  = v.beta_charpoly;
  j["note"]  = v.note;
  return j;
}

inline IndependenceVerdict independence_from_json(Json const& j) {
  IndependenceVerdict v;
  v.dependent = j.at("verdict") == "dependent";
  if (v.dependent) {
    v.k = j.at("k").get<unsigned long>();
    v.l = j.at("l").get<unsigned long>();
  } else if (j.at("verdict") == "independent_up_to") {
    v.bound = j.at("bound").get<unsigned long>();
  }
  v.bits = j.at("bits").get<unsigned>();
  v.alpha_charpoly = j.at("alpha_charpoly").get<std::string>();
  v.beta_charpoly  = j.at("beta_charpoly").get<std::string>();
  v.note = j.at("note").get<std::string>();
  return v;
}

inline Json periodicity_to_json(PeriodicityCertificate const& c) {
  Json j;
  j["verdict"] = c.periodic ? "periodic" : "no_period_found";
  if (c.periodic) {
    j["preperiod"] = c.preperiod;
    j["period"]    = c.period;
  }
  j["verified_to"]   = c.verified_to;
  j["max_preperiod"] = c.max_preperiod;
  j["max_period"]    = c.max_period;
  return j;
}

inline PeriodicityCertificate periodicity_from_json(Json const& j) {
  PeriodicityCertificate c;
  c.periodic = j.at("verdict") == "periodic";
  if (c.periodic) {
    c.preperiod = j.at("preperiod").get<std::size_t>();
    c.period    = j.at("period").get<std::size_t>();
  }
  c.verified_to   = j.at("verified_to").get<std::size_t>();
  c.max_preperiod = j.at("max_preperiod").get<std::size_t>();
  c.max_period    = j.at("max_period").get<std::size_t>();
  return c;
}

inline Json cobham_report_to_json(CobhamReport& r) {
  Json j;
  j["version"] = "substlib 0.1.0";
  j["inputs"]  = Json{{"a", r.label_a}, {"b", r.label_b}};
  j["options"] = Json{{"depth", r.N}, {"independence_bound", r.indep_bound}};
  j["agreement"] = Json{{"agree", r.agreement.agree},
                        {"depth", r.agreement.depth}};
  if (r.agreement.mismatch) {
    j["agreement"]["first_mismatch"] = *r.agreement.mismatch;
  }
  j["eigenvalues"] = Json{
      {"alpha_presented", perron_to_json(r.alpha_presented)},
      {"beta_presented", perron_to_json(r.beta_presented)},
      {"alpha", perron_to_json(r.alpha)},
      {"beta", perron_to_json(r.beta)},
      {"normalization_power_a", r.norm_power_a},
      {"normalization_power_b", r.norm_power_b},
      {"normalized_a", r.normalized_a},
      {"normalized_b", r.normalized_b},
  };
  j["independence"] = independence_to_json(r.independence);
  j["periodicity"]  = r.periodicity ? periodicity_to_json(*r.periodicity)
                                    : Json();
  j["periodicity_verified"] = r.periodicity_verified;
  Json gaps = Json::array();
  for (auto const& g : r.bounded_gaps) {
    Json prof = Json::array();
    for (auto const& [n, gap] : g.profile) {
      prof.push_back(Json{{"depth", n}, {"max_gap", gap}});
    }
    gaps.push_back(Json{{"factor", g.factor},
                        {"profile", prof},
                        {"plateau", g.plateau}});
  }
  j["bounded_gap_evidence"] = gaps;  // evidence only, never proof
  j["conclusion"] = to_string(r.conclusion);
  j["detail"]     = r.detail;
  j["notes"]      = r.notes;
  return j;
}

inline CobhamReport cobham_report_from_json(Json const& j) {
  CobhamReport r;
  r.label_a = j.at("inputs").at("a").get<std::string>();
  r.label_b = j.at("inputs").at("b").get<std::string>();
  r.N       = j.at("options").at("depth").get<std::size_t>();
  r.indep_bound =
      j.at("options").at("independence_bound").get<unsigned long>();
  r.agreement.agree = j.at("agreement").at("agree").get<bool>();
  r.agreement.depth = j.at("agreement").at("depth").get<std::size_t>();
  if (j.at("agreement").contains("first_mismatch")) {
    r.agreement.mismatch =
        j.at("agreement").at("first_mismatch").get<std::size_t>();
  }
  auto const& e = j.at("eigenvalues");
  r.alpha_presented = perron_from_json(e.at("alpha_presented"));
  r.beta_presented  = perron_from_json(e.at("beta_presented"));
  r.alpha           = perron_from_json(e.at("alpha"));
  r.beta            = perron_from_json(e.at("beta"));
  r.norm_power_a    = e.at("normalization_power_a").get<unsigned long>();
  r.norm_power_b    = e.at("normalization_power_b").get<unsigned long>();
  r.normalized_a    = e.at("normalized_a").get<bool>();
  r.normalized_b    = e.at("normalized_b").get<bool>();
  r.independence    = independence_from_json(j.at("independence"));
  if (!j.at("periodicity").is_null()) {
    r.periodicity = periodicity_from_json(j.at("periodicity"));
  }
  r.periodicity_verified = j.at("periodicity_verified").get<bool>();
  for (auto const& g : j.at("bounded_gap_evidence")) {
    GapEvidence ev;
    ev.factor  = g.at("factor").get<std::string>();
    ev.plateau = g.at("plateau").get<bool>();
    for (auto const& p : g.at("profile")) {
      ev.profile.emplace_back(p.at("depth").get<std::size_t>(),
                              p.at("max_gap").get<std::size_t>());
    }
    r.bounded_gaps.push_back(std::move(ev));
  }
  for (auto const& n : j.at("notes")) {
    r.notes.push_back(n.get<std::string>());
  }
  std::string c = j.at("conclusion").get<std::string>();
  if (c == "ConsistentPeriodic") {
    r.conclusion = CobhamConclusion::ConsistentPeriodic;
  } else if (c == "ConsistentDependent") {
    r.conclusion = CobhamConclusion::ConsistentDependent;
  } else if (c == "TheoremTension") {
    r.conclusion = CobhamConclusion::TheoremTension;
  } else {
    r.conclusion = CobhamConclusion::Inconclusive;
  }
  r.detail = j.at("detail").get<std::string>();
  return r;
}

inline bool reports_equal(CobhamReport& a, CobhamReport& b) {
  return cobham_report_to_json(a) == cobham_report_to_json(b);
}

}  // namespace subst

#endif  // SUBSTLIB_JSON_IO_HPP_
