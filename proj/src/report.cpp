#include "dsaddle/report.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace dsaddle {

namespace {

Json dims_json(Index n, Index m, Index p) {
  return Json{{"n", n}, {"m", m}, {"p", p}};
}

std::string vector_text(const Vector& v) {
  std::ostringstream s;
  s << std::setprecision(17) << "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s << ", ";
    s << v(i);
  }
  s << "]";
  return s.str();
}

std::string_view spectrum_name(Spectrum s) {
  return s == Spectrum::Semidefinite ? "semidefinite" : "indefinite";
}

Spectrum spectrum_from(const std::string& name) {
  if (name == "semidefinite") return Spectrum::Semidefinite;
  if (name == "indefinite") return Spectrum::Indefinite;
  throw DataError("generator spec: unknown spectrum '" + name + "'");
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i) == 0.0 ? 0.0 : v(i));
  return arr;
}

Json to_json(const BlockSystem& sys, const Diagnosis& d) {
  const auto& r = d.report;
  Json j;
  j["schema"] = kDiagnosisSchema;
  j["verdict"] = std::string(to_string(d.verdict));
  j["rule"] = d.rule.empty() ? Json(nullptr) : Json(d.rule);
  j["dims"] = dims_json(sys.n(), sys.m(), sys.p());
  Json conditions = Json::array();
  for (const auto& c : r.entries) {
    Json entry{{"id", std::string(to_string(c.id))},
               {"status", c.holds ? "holds" : "fails"}};
    if (c.witness) entry["witness"] = vector_to_json(*c.witness);
    conditions.push_back(std::move(entry));
  }
  j["conditions"] = std::move(conditions);
  j["blocks"] = {
      {"A", {{"definiteness", std::string(to_string(r.def_A))},
             {"nullity", r.null_A},
             {"zero", r.A_zero}}},
      {"B", {{"rank", r.rank_B}}},
      {"C", {{"rank", r.rank_C}}},
      {"D", {{"definiteness", std::string(to_string(r.def_D))},
             {"lambda_max", r.lambda_max_D},
             {"zero", r.D_zero}}},
      {"E", {{"definiteness", std::string(to_string(r.def_E))},
             {"nullity", r.null_E},
             {"zero", r.E_zero}}},
  };
  if (d.witness) {
    j["witness"] = vector_to_json(*d.witness);
    j["witness_residual"] = witness_residual(sys, *d.witness);
  }
  if (d.oracle_check) j["oracle_check"] = *d.oracle_check;
  return j;
}

std::string to_text(const BlockSystem& sys, const Diagnosis& d) {
  const auto& r = d.report;
  std::ostringstream s;
  s << std::setprecision(17);
  s << "verdict: " << to_string(d.verdict) << "\n";
  s << "rule: " << (d.rule.empty() ? "none" : d.rule) << "\n";
  s << "dims: n=" << sys.n() << " m=" << sys.m() << " p=" << sys.p() << "\n";
  for (const auto& c : r.entries) {
    s << "condition " << to_string(c.id) << ": "
      << (c.holds ? "holds" : "fails");
    if (c.witness) s << " witness=" << vector_text(*c.witness);
    s << "\n";
  }
  s << "A: " << to_string(r.def_A) << ", nullity " << r.null_A
    << (r.A_zero ? ", zero" : "") << "\n";
  s << "B: rank " << r.rank_B << "\n";
  s << "C: rank " << r.rank_C << "\n";
  s << "D: " << to_string(r.def_D) << ", lambda_max " << r.lambda_max_D
    << (r.D_zero ? ", zero" : "") << "\n";
  s << "E: " << to_string(r.def_E) << ", nullity " << r.null_E
    << (r.E_zero ? ", zero" : "") << "\n";
  if (d.witness) {
    s << "witness: " << vector_text(*d.witness) << "\n";
    s << "witness_residual: " << witness_residual(sys, *d.witness) << "\n";
  }
  if (d.oracle_check) {
    s << "oracle_check: " << (*d.oracle_check ? "true" : "false") << "\n";
  }
  return s.str();
}

Json to_json(const NullityBoundReport& r) {
  Json j{{"null_A", r.null_A},
         {"null_E", r.null_E},
         {"null_Z22", r.null_Z22},
         {"m", r.m},
         {"general_lower", r.general_lower},
         {"upper", r.upper},
         {"general_holds", r.general_holds},
         {"range_trivial", r.range_trivial},
         {"range_lower", r.range_lower}};
  if (r.range_holds) j["range_holds"] = *r.range_holds;
  if (r.e_nonsingular_holds) j["e_nonsingular_holds"] = *r.e_nonsingular_holds;
  j["z22_relative_norm"] = r.z22_relative_norm;
  if (r.z22_zero_holds) j["z22_zero_holds"] = *r.z22_zero_holds;
  j["all_hold"] = r.all_hold();
  return j;
}

Json to_json(const Certificate& c, Index n, Index m, Index p) {
  Json j;
  j["schema"] = kCertificateSchema;
  j["dims"] = dims_json(n, m, p);
  j["measured"] = {
      {"null_A", c.null_A},
      {"null_D", c.null_D},
      {"null_E", c.null_E},
      {"rank_B", c.rank_B},
      {"rank_C", c.rank_C},
      {"definiteness_A", std::string(to_string(c.def_A))},
      {"definiteness_D", std::string(to_string(c.def_D))},
      {"definiteness_E", std::string(to_string(c.def_E))},
      {"N1", c.N1},
      {"N2", c.N2},
      {"N3", c.N3},
      {"R", c.R},
      {"DS1", c.DS1},
      {"DS2", c.DS2},
  };
  j["hypotheses"] = c.hypotheses(n, m, p);
  j["attempts"] = c.attempts;
  j["seed_used"] = c.seed_used;
  return j;
}

Json to_json(const GeneratorSpec& s) {
  return Json{{"n", s.n},
              {"m", s.m},
              {"p", s.p},
              {"null_A", s.null_A},
              {"null_D", s.null_D},
              {"null_E", s.null_E},
              {"rank_B", s.rank_B},
              {"rank_C", s.rank_C},
              {"require_DS1", s.require_DS1},
              {"require_DS2", s.require_DS2},
              {"require_R", s.require_R},
              {"force_overlap_R", s.force_overlap_R},
              {"spectrum_A", std::string(spectrum_name(s.spectrum_A))},
              {"spectrum_D", std::string(spectrum_name(s.spectrum_D))},
              {"spectrum_E", std::string(spectrum_name(s.spectrum_E))},
              {"scale_D", s.scale_D},
              {"seed", s.seed},
              {"max_attempts", s.max_attempts}};
}

GeneratorSpec generator_spec_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("generator spec must be a JSON object");
  static const std::set<std::string> known = {
      "n",           "m",           "p",          "null_A",      "null_D",
      "null_E",      "rank_B",      "rank_C",     "require_DS1", "require_DS2",
      "require_R",   "force_overlap_R", "spectrum_A", "spectrum_D",
      "spectrum_E",  "scale_D",     "seed",       "max_attempts"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw DataError("generator spec: unknown key '" + key + "'");
  }
  GeneratorSpec s;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("n", s.n);
    get("m", s.m);
    get("p", s.p);
    get("null_A", s.null_A);
    get("null_D", s.null_D);
    get("null_E", s.null_E);
    get("rank_B", s.rank_B);
    get("rank_C", s.rank_C);
    get("require_DS1", s.require_DS1);
    get("require_DS2", s.require_DS2);
    get("require_R", s.require_R);
    get("force_overlap_R", s.force_overlap_R);
    get("scale_D", s.scale_D);
    get("seed", s.seed);
    get("max_attempts", s.max_attempts);
    if (j.contains("spectrum_A")) s.spectrum_A = spectrum_from(j.at("spectrum_A").get<std::string>());
    if (j.contains("spectrum_D")) s.spectrum_D = spectrum_from(j.at("spectrum_D").get<std::string>());
    if (j.contains("spectrum_E")) s.spectrum_E = spectrum_from(j.at("spectrum_E").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("generator spec: ") + e.what());
  }
  return s;
}

}  // namespace dsaddle
