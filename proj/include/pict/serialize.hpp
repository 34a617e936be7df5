#pragma once

// JSON forms of proofs, derivations and traces. Formulas and processes are
// stored as surface text.
//
//   proof       {rule, conclusion[], principal[], left[], cut?, axiom?, premises[]}
//   derivation  {version, rule, conclusion: {env, process}, premises[],
//                proof?, type?, names?}
//   trace       {version, root, steps: [{label, process}], exhausted}

#include "json.hpp"

#include "pict/dynamics.hpp"

namespace pict {

using Json = nlohmann::ordered_json;

inline constexpr int kDerivationVersion = 1;

class SchemaError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string text_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' should be a string");
  return v.get<std::string>();
}

inline std::vector<std::size_t> index_list(const Json& j, const char* key) {
  std::vector<std::size_t> out;
  if (!j.contains(key)) return out;
  for (auto& v : j.at(key)) {
    if (!v.is_number_unsigned()) throw SchemaError(std::string("field '") + key + "' holds a non-index");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline Json proof_to_json(const Proof& p) {
  Json j;
  j["rule"] = rule_name(p->rule);
  Json c = Json::array();
  for (auto& f : p->conclusion) c.push_back(print_formula(f));
  j["conclusion"] = c;
  j["principal"] = p->principal;
  j["left"] = p->left;
  if (p->cut_formula) j["cut"] = print_formula(*p->cut_formula);
  if (!p->axiom.empty()) j["axiom"] = p->axiom;
  Json ps = Json::array();
  for (auto& q : p->premises) ps.push_back(proof_to_json(q));
  j["premises"] = ps;
  return j;
}

// Structure only; soundness is check_proof's business.
inline Proof proof_from_json(const Json& j) {
  auto n = std::make_shared<ProofNode>();
  std::string rule = detail::text_field(j, "rule");
  auto r = rule_from_name(rule);
  if (!r) throw SchemaError("unknown proof rule '" + rule + "'");
  n->rule = *r;
  const Json& c = detail::field(j, "conclusion");
  if (!c.is_array()) throw SchemaError("field 'conclusion' should be an array");
  for (auto& f : c) {
    if (!f.is_string()) throw SchemaError("conclusion entries should be strings");
    n->conclusion.push_back(parse_formula(f.get<std::string>()));
  }
  n->principal = detail::index_list(j, "principal");
  n->left = detail::index_list(j, "left");
  if (j.contains("cut")) n->cut_formula = parse_formula(detail::text_field(j, "cut"));
  if (j.contains("axiom")) n->axiom = detail::text_field(j, "axiom");
  if (j.contains("premises")) {
    for (auto& q : j.at("premises")) n->premises.push_back(proof_from_json(q));
  }
  return n;
}

namespace detail {

inline Json derivation_body(const Derivation& d) {
  Json j;
  j["rule"] = drule_name(d->rule);
  j["conclusion"] = {{"env", print_formula(d->env)}, {"process", print_process(d->process)}};
  Json ps = Json::array();
  for (auto& q : d->premises) ps.push_back(derivation_body(q));
  j["premises"] = ps;
  if (d->proof) j["proof"] = proof_to_json(d->proof);
  if (d->type) j["type"] = print_behaviour(*d->type);
  if (!d->names.empty()) j["names"] = d->names;
  return j;
}

inline Derivation derivation_body_from(const Json& j) {
  std::string rule = text_field(j, "rule");
  auto r = drule_from_name(rule);
  if (!r) throw SchemaError("unknown typing rule '" + rule + "'");
  const Json& c = field(j, "conclusion");
  Formula env = parse_formula(text_field(c, "env"));
  Process p = parse_process(text_field(c, "process"));
  std::vector<Derivation> premises;
  if (j.contains("premises")) {
    for (auto& q : j.at("premises")) premises.push_back(derivation_body_from(q));
  }
  Proof proof = j.contains("proof") ? proof_from_json(j.at("proof")) : nullptr;
  std::optional<Behaviour> type;
  if (j.contains("type")) type = parse_behaviour(text_field(j, "type"));
  NameList names;
  if (j.contains("names")) {
    for (auto& x : j.at("names")) {
      if (!x.is_string()) throw SchemaError("field 'names' holds a non-name");
      names.push_back(x.get<Name>());
    }
  }
  return make_derivation(*r, env, p, std::move(premises), proof, std::move(type), std::move(names));
}

}  // namespace detail

inline Json derivation_to_json(const Derivation& d) {
  Json j;
  j["version"] = kDerivationVersion;
  Json body = detail::derivation_body(d);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

inline Derivation derivation_from_json(const Json& j) {
  const Json& v = detail::field(j, "version");
  if (!v.is_number_integer() || v.get<int>() != kDerivationVersion) {
    throw SchemaError("unsupported derivation version " + v.dump());
  }
  return detail::derivation_body_from(j);
}

inline std::string print_derivation(const Derivation& d) { return derivation_to_json(d).dump(2); }

inline Derivation parse_derivation(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return derivation_from_json(j);
}

inline Json trace_to_json(const Trace& t) {
  Json steps = Json::array();
  for (auto& s : t.steps) steps.push_back({{"label", s.label.str()}, {"process", print_process(s.process)}});
  return {{"version", kDerivationVersion},
          {"root", print_process(t.root)},
          {"steps", steps},
          {"exhausted", t.exhausted}};
}

inline Json trace_tree_to_json(const TraceTree& t) {
  Json children = Json::array();
  for (auto& [label, c] : t.children) children.push_back({{"label", label.str()}, {"next", trace_tree_to_json(c)}});
  return {{"process", print_process(t.process)},
          {"exhausted", t.exhausted},
          {"truncated", t.truncated},
          {"children", children}};
}

}  // namespace pict
