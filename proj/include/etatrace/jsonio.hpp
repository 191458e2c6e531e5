#pragma once

#include <json.hpp>

#include <string>

#include "etatrace/identities.hpp"

namespace etatrace {

using Json = nlohmann::ordered_json;

// ---- scalar kernels ----

inline Json laurent_to_json(const LaurentPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json::array({e, rational_str(c)}));
  return terms;
}

inline LaurentPoly laurent_from_json(const Json& j) {
  LaurentPoly p;
  for (const auto& t : j)
    p += LaurentPoly::monomial(t.at(0).get<long>(), parse_rational(t.at(1).get<std::string>()));
  return p;
}

inline Json ratfunc_to_json(const RatFunc& f) {
  return Json{{"num", laurent_to_json(f.num())}, {"den", laurent_to_json(f.den())}};
}

inline RatFunc ratfunc_from_json(const Json& j) {
  return RatFunc(laurent_from_json(j.at("num")), laurent_from_json(j.at("den")));
}

inline Json qseries_to_json(const QSeries& s) {
  Json terms = Json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back(Json::array({rational_str(e), rational_str(c)}));
  return Json{{"cutoff", rational_str(s.cutoff())}, {"terms", terms}};
}

inline QSeries qseries_from_json(const Json& j) {
  QSeries s(parse_rational(j.at("cutoff").get<std::string>()));
  for (const auto& t : j.at("terms"))
    s.add_term(parse_rational(t.at(0).get<std::string>()), parse_rational(t.at(1).get<std::string>()));
  return s;
}

inline Json biseries_to_json(const BiSeries& s) {
  Json terms = Json::array();
  for (const auto& [te, c] : s.terms) terms.push_back(Json::array({rational_str(te), laurent_to_json(c)}));
  return Json{{"cutoff_t", rational_str(s.cutoff_t)}, {"terms", terms}};
}

// ---- root data ----

inline Json root_datum_to_json(const RootDatum& rd) {
  Json j;
  j["type"] = rd.type.str();
  j["rank"] = rd.rank;
  j["cartan"] = rd.cartan;
  j["d"] = rd.d;
  j["positive_roots"] = rd.positive_roots;
  j["h"] = rd.coxeter_number;
  j["k"] = rational_str(rd.killing_constant);
  j["rg"] = rational_str(rd.rg);
  return j;
}

// ---- matrices and modules ----

inline Json sparse_to_json(const SparseMat<RatFunc>& m) {
  Json entries = Json::array();
  for (const auto& [r, c, v] : m.coo_row_major()) entries.push_back(Json::array({r, c, ratfunc_to_json(v)}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline SparseMat<RatFunc> sparse_from_json(const Json& j) {
  SparseMat<RatFunc> m(j.at("rows").get<int>(), j.at("cols").get<int>());
  for (const auto& e : j.at("entries"))
    m.set(e.at(0).get<int>(), e.at(1).get<int>(), ratfunc_from_json(e.at(2)));
  return m;
}

inline constexpr int kModuleFormatVersion = 1;

/// FNV-1a 64-bit, used as the cache integrity digest.
inline std::string digest64(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return std::string(buf);
}

inline Json module_payload_to_json(const IrrModule& m) {
  Json j;
  j["format_version"] = kModuleFormatVersion;
  j["type"] = m.datum.type.str();
  j["lambda"] = m.lambda;
  j["dim"] = m.dim;
  j["basis_weights"] = m.basis_weights;
  Json e = Json::array(), f = Json::array(), k = Json::array();
  for (int i = 0; i < m.datum.rank; ++i) {
    e.push_back(sparse_to_json(m.e_matrix(i)));
    f.push_back(sparse_to_json(m.f_matrix(i)));
    k.push_back(sparse_to_json(m.k_matrix(i)));
  }
  j["E"] = std::move(e);
  j["F"] = std::move(f);
  j["K"] = std::move(k);
  return j;
}

inline Json module_to_json(const IrrModule& m) {
  Json j = module_payload_to_json(m);
  j["digest"] = digest64(j.dump());
  return j;
}

/// Rebuilds a module from its serialized payload; the root datum is
/// reconstructed from the type string. Throws on any inconsistency.
inline IrrModule module_from_json(const Json& j) {
  if (j.at("format_version").get<int>() != kModuleFormatVersion)
    throw std::runtime_error("module_from_json: format version mismatch");
  IrrModule m;
  m.datum = build_root_datum(j.at("type").get<std::string>());
  m.lambda = j.at("lambda").get<Weight>();
  m.dim = j.at("dim").get<int>();
  m.basis_weights = j.at("basis_weights").get<std::vector<Weight>>();
  if (static_cast<int>(m.basis_weights.size()) != m.dim)
    throw std::runtime_error("module_from_json: basis size mismatch");
  for (int idx = 0; idx < m.dim; ++idx) m.weight_spaces[m.basis_weights[static_cast<size_t>(idx)]].push_back(idx);
  for (const auto& mat : j.at("E")) m.raise_mats.push_back(sparse_from_json(mat));
  for (const auto& mat : j.at("F")) m.lower_mats.push_back(sparse_from_json(mat));
  if (static_cast<int>(m.raise_mats.size()) != m.datum.rank ||
      static_cast<int>(m.lower_mats.size()) != m.datum.rank)
    throw std::runtime_error("module_from_json: wrong generator count");
  return m;
}

// ---- reports ----

inline Json trace_term_to_json(const TraceTerm& t) {
  return Json{{"lambda", t.lambda},
              {"dim", int_str(t.dim)},
              {"epsilon", t.epsilon},
              {"exponent", rational_str(t.exponent)},
              {"c_lambda", rational_str(t.c_lambda)}};
}

inline Json identity_report_to_json(const IdentityReport& rep) {
  Json j;
  j["identity"] = rep.identity;
  j["type"] = rep.type;
  j["cutoff"] = rational_str(rep.cutoff);
  j["match"] = rep.match;
  if (rep.first_discrepancy) {
    j["first_discrepancy"] = Json{{"exponent", rep.first_discrepancy->exponent},
                                  {"lhs", rep.first_discrepancy->lhs},
                                  {"rhs", rep.first_discrepancy->rhs}};
  }
  if (rep.lhs) j["lhs"] = qseries_to_json(*rep.lhs);
  if (rep.rhs) j["rhs"] = qseries_to_json(*rep.rhs);
  if (rep.bi_lhs) j["lhs"] = biseries_to_json(*rep.bi_lhs);
  if (rep.bi_rhs) j["rhs"] = biseries_to_json(*rep.bi_rhs);
  Json terms = Json::array();
  for (const auto& t : rep.terms) terms.push_back(trace_term_to_json(t));
  j["terms"] = std::move(terms);
  j["wall_time_ms"] = rep.wall_time_ms;
  return j;
}

inline Json theta_report_to_json(const ThetaScalarReport& rep) {
  Json j;
  j["lambda"] = rep.lambda;
  j["pass"] = rep.pass();
  j["c_highest"] = rep.c_highest;
  j["exp_highest"] = rational_str(rep.exp_highest);
  j["has_zero_space"] = rep.has_zero_space;
  if (rep.has_zero_space) {
    j["c_zero"] = rep.c_zero;
    j["exp_zero"] = rational_str(rep.exp_zero);
  }
  Json eigen = Json::array();
  for (const auto& [mu, mult, scalar] : rep.eigen_structure) {
    Json row;
    row["weight"] = mu;
    row["mult"] = mult;
    row["scalar"] = scalar ? Json(scalar->str()) : Json(nullptr);
    eigen.push_back(std::move(row));
  }
  j["weight_space_scalars"] = std::move(eigen);
  Json checks = Json::array();
  for (const auto& [name, ok] : rep.checks.checks) checks.push_back(Json{{"check", name}, {"pass", ok}});
  j["checks"] = std::move(checks);
  return j;
}

inline Json braid_operator_to_json(const BraidOperator& op, const IrrModule& m) {
  Json j;
  j["type"] = m.datum.type.str();
  j["lambda"] = m.lambda;
  j["word"] = op.word;
  j["matrix"] = sparse_to_json(op.mat);
  return j;
}

}  // namespace etatrace
