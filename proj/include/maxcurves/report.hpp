#pragma once

// JSON report envelope shared by every CLI subcommand, plus a small
// structural validator for the bundled report schema. Reports are
// deterministic: timing is opt-in so that identical inputs produce
// byte-identical output at any worker count.

#include <optional>
#include <string>

#include "json.hpp"
#include "maxcurves/count.hpp"
#include "maxcurves/curves.hpp"

namespace maxcurves::report {

using json = nlohmann::json;

inline json spec_json(const curves::CurveSpec& s) {
  json j;
  j["family"] = s.name();
  j["q"] = s.q;
  j["p"] = s.p;
  if (s.is_base() || s.family == curves::Family::cyclic_cover) {
    j["q0"] = s.q0;
    j["m"] = s.m;
    j["d"] = s.d;
  }
  if (s.family != curves::Family::hermitian && s.family != curves::Family::suzuki &&
      s.family != curves::Family::ree)
    j["exponent"] = s.exponent;
  return j;
}

inline json moduli_json(const std::vector<count::ModulusInfo>& mods) {
  json arr = json::array();
  for (const auto& m : mods) {
    json j;
    j["p"] = m.p;
    j["n"] = m.n;
    j["coeffs"] = m.coeffs;  // low-to-high, monic leading 1 implied
    arr.push_back(j);
  }
  return arr;
}

inline json count_result_json(const count::CountReport& r) {
  json j;
  j["ext"] = r.ext;
  j["field_order"] = r.field_order;
  j["affine"] = r.affine;
  j["infinite"] = r.infinite;
  j["total"] = r.total;
  j["genus"] = r.genus;
  if (r.bound_valid) {
    j["hasse_weil_bound"] = r.hasse_weil;
    j["maximal"] = r.maximal;
    j["deficiency"] = r.deficiency;
  }
  if (r.audited) j["split_violations"] = r.split_violations;
  j["engine"] = r.engine_name;
  return j;
}

struct EnvelopeOptions {
  unsigned workers = 1;
  bool timing = false;
  double wall_ms = 0.0;
};

inline json envelope(const std::string& command, const std::optional<curves::CurveSpec>& spec,
                     const json& moduli, const json& result, const std::vector<std::string>& audit_flags,
                     const EnvelopeOptions& opts) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  if (spec) j["spec"] = spec_json(*spec);
  j["moduli"] = moduli.is_null() ? json::array() : moduli;
  j["workers"] = opts.workers;
  j["result"] = result;
  j["audit_flags"] = audit_flags;
  if (opts.timing) j["wall_ms"] = opts.wall_ms;
  return j;
}

/// Structural validation against the subset of JSON Schema used by the
/// bundled document: type, required, properties, items, enum.
inline bool validate(const json& doc, const json& schema, std::string* error, const std::string& path = "$") {
  auto fail = [&](const std::string& msg) {
    if (error) *error = path + ": " + msg;
    return false;
  };
  if (schema.contains("type")) {
    auto matches = [&](const std::string& t) {
      if (t == "object") return doc.is_object();
      if (t == "array") return doc.is_array();
      if (t == "string") return doc.is_string();
      if (t == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
      if (t == "number") return doc.is_number();
      if (t == "boolean") return doc.is_boolean();
      if (t == "null") return doc.is_null();
      return false;
    };
    const json& ty = schema["type"];
    bool ok = false;
    if (ty.is_string())
      ok = matches(ty.get<std::string>());
    else
      for (const auto& t : ty) ok = ok || matches(t.get<std::string>());
    if (!ok) return fail("type mismatch");
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"]) ok = ok || v == doc;
    if (!ok) return fail("value not in enum");
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!doc.contains(key.get<std::string>())) return fail("missing required key " + key.get<std::string>());
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
        if (doc.contains(it.key()) && !validate(doc[it.key()], it.value(), error, path + "." + it.key()))
          return false;
  }
  if (doc.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const auto& el : doc) {
      if (!validate(el, schema["items"], error, path + "[" + std::to_string(i) + "]")) return false;
      ++i;
    }
  }
  return true;
}

}  // namespace maxcurves::report
