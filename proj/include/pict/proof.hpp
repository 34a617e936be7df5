#pragma once

// MELL proof objects, relaxation profiles, and the proof checker.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pict/surface.hpp"
#include "pict/syntax.hpp"

namespace pict {

enum class Rule : std::uint8_t {
  Axiom,
  Cut,
  Tensor,
  Par,
  One,
  Bot,
  Dereliction,
  Weakening,
  Contraction,
  Promotion,
  ProfileAxiom,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "ax";
    case Rule::Cut: return "cut";
    case Rule::Tensor: return "tensor";
    case Rule::Par: return "par";
    case Rule::One: return "one";
    case Rule::Bot: return "bot";
    case Rule::Dereliction: return "dereliction";
    case Rule::Weakening: return "weakening";
    case Rule::Contraction: return "contraction";
    case Rule::Promotion: return "promotion";
    case Rule::ProfileAxiom: return "profile-axiom";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Rule::ProfileAxiom); ++i) {
    auto r = static_cast<Rule>(i);
    if (s == rule_name(r)) return r;
  }
  return std::nullopt;
}

using Sequent = std::vector<Formula>;

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

// One inference. `principal` indexes the conclusion: both formulas for ax,
// the principal formula otherwise, nothing for cut. `left` lists the
// conclusion indices (other than the principal) that belong to the first
// premiss of a tensor or cut.
struct ProofNode {
  Rule rule = Rule::Axiom;
  Sequent conclusion;
  std::vector<Proof> premises;
  std::vector<std::size_t> principal;
  std::vector<std::size_t> left;
  std::optional<Formula> cut_formula;
  std::string axiom;
};

// ---------------------------------------------------------------------------
// Profiles: extra axiom schemas over metavariables A, B.

enum class ProfileName : std::uint8_t { Core, Kpt, Hyb };

inline const char* profile_name(ProfileName p) {
  switch (p) {
    case ProfileName::Core: return "core";
    case ProfileName::Kpt: return "kpt";
    case ProfileName::Hyb: return "hyb";
  }
  return "?";
}

inline std::optional<ProfileName> profile_from_name(std::string_view s) {
  if (s == "core") return ProfileName::Core;
  if (s == "kpt") return ProfileName::Kpt;
  if (s == "hyb") return ProfileName::Hyb;
  return std::nullopt;
}

// Entailment directions `lhs ≤ rhs`, i.e. axioms `⊢ lhs⊥, rhs`.
enum class AxiomSchema : std::uint8_t {
  TensorToPar,  // A⊗B ≤ A⅋B
  ParToTensor,  // A⅋B ≤ A⊗B
  OneToBot,     // 1 ≤ ⊥
  BotToOne,     // ⊥ ≤ 1
  BangToQuest,  // !A ≤ ?A
  QuestToBang,  // ?A ≤ !A
};

inline const char* schema_name(AxiomSchema s) {
  switch (s) {
    case AxiomSchema::TensorToPar: return "tensor-par";
    case AxiomSchema::ParToTensor: return "par-tensor";
    case AxiomSchema::OneToBot: return "one-bot";
    case AxiomSchema::BotToOne: return "bot-one";
    case AxiomSchema::BangToQuest: return "bang-quest";
    case AxiomSchema::QuestToBang: return "quest-bang";
  }
  return "?";
}

inline std::optional<AxiomSchema> schema_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(AxiomSchema::QuestToBang); ++i) {
    auto a = static_cast<AxiomSchema>(i);
    if (s == schema_name(a)) return a;
  }
  return std::nullopt;
}

struct Profile {
  ProfileName name = ProfileName::Core;
  std::vector<AxiomSchema> axioms;

  static Profile core() { return Profile{ProfileName::Core, {}}; }
  static Profile kpt() {
    return Profile{ProfileName::Kpt,
                   {AxiomSchema::TensorToPar, AxiomSchema::ParToTensor, AxiomSchema::OneToBot, AxiomSchema::BotToOne,
                    AxiomSchema::BangToQuest, AxiomSchema::QuestToBang}};
  }
  static Profile hyb() {
    return Profile{ProfileName::Hyb,
                   {AxiomSchema::TensorToPar, AxiomSchema::ParToTensor, AxiomSchema::OneToBot, AxiomSchema::BotToOne}};
  }
  static Profile named(ProfileName n) {
    switch (n) {
      case ProfileName::Kpt: return kpt();
      case ProfileName::Hyb: return hyb();
      default: return core();
    }
  }

  bool has(AxiomSchema s) const { return std::find(axioms.begin(), axioms.end(), s) != axioms.end(); }
  bool relaxed() const { return !axioms.empty(); }
};

// The two sides `lhs`, `rhs` of a schema instance with the given operands.
inline std::pair<Formula, Formula> schema_instance(AxiomSchema s, const Formula& a, const Formula& b) {
  switch (s) {
    case AxiomSchema::TensorToPar: return {Formula::tensor(a, b), Formula::par(a, b)};
    case AxiomSchema::ParToTensor: return {Formula::par(a, b), Formula::tensor(a, b)};
    case AxiomSchema::OneToBot: return {Formula::one(), Formula::bot()};
    case AxiomSchema::BotToOne: return {Formula::bot(), Formula::one()};
    case AxiomSchema::BangToQuest: return {Formula::of_course(a), Formula::why_not(a)};
    case AxiomSchema::QuestToBang: return {Formula::why_not(a), Formula::of_course(a)};
  }
  return {a, b};
}

// Does ⊢ first, second instantiate the schema (first = lhs⊥, second = rhs)?
inline bool matches_schema(AxiomSchema s, const Formula& first, const Formula& second) {
  using T = Formula::Tag;
  Formula a, b;
  switch (s) {
    case AxiomSchema::TensorToPar:
      if (!second.is(T::Par)) return false;
      a = second.left();
      b = second.right();
      break;
    case AxiomSchema::ParToTensor:
      if (!second.is(T::Tensor)) return false;
      a = second.left();
      b = second.right();
      break;
    case AxiomSchema::BangToQuest:
      if (!second.is(T::WhyNot)) return false;
      a = second.body();
      break;
    case AxiomSchema::QuestToBang:
      if (!second.is(T::OfCourse)) return false;
      a = second.body();
      break;
    default:
      break;
  }
  auto [lhs, rhs] = schema_instance(s, a, b);
  return rhs == second && negate(lhs) == first;
}

// ---------------------------------------------------------------------------
// Construction helpers

inline Proof make_node(Rule r, Sequent conclusion, std::vector<Proof> premises = {},
                       std::vector<std::size_t> principal = {}, std::vector<std::size_t> left = {}) {
  auto n = std::make_shared<ProofNode>();
  n->rule = r;
  n->conclusion = std::move(conclusion);
  n->premises = std::move(premises);
  n->principal = std::move(principal);
  n->left = std::move(left);
  return n;
}

inline std::size_t index_of(const Sequent& s, const Formula& f) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == f) return i;
  }
  throw Error("formula not found in sequent: " + print_formula(f));
}

// ⊢ A⊥, A
inline Proof axiom(const Formula& a) { return make_node(Rule::Axiom, {negate(a), a}, {}, {0, 1}); }
inline Proof one_proof() { return make_node(Rule::One, {Formula::one()}, {}, {0}); }

// Appends `f` (introduced by a unary rule) to the premise's conclusion.
inline Proof unary(Rule r, const Proof& premise, const Formula& f) {
  Sequent c;
  switch (r) {
    case Rule::Bot:
    case Rule::Weakening:
      c = premise->conclusion;
      break;
    case Rule::Par: {
      c = premise->conclusion;
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(index_of(c, f.left())));
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(index_of(c, f.right())));
      break;
    }
    case Rule::Dereliction:
    case Rule::Promotion: {
      c = premise->conclusion;
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(index_of(c, f.body())));
      break;
    }
    case Rule::Contraction: {
      c = premise->conclusion;
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(index_of(c, f)));
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(index_of(c, f)));
      break;
    }
    default:
      throw Error(std::string("not a unary rule: ") + rule_name(r));
  }
  c.push_back(f);
  return make_node(r, std::move(c), {premise}, {c.size() - 1});
}

inline Proof par_proof(const Proof& premise, const Formula& a, const Formula& b) {
  return unary(Rule::Par, premise, Formula::par(a, b));
}

// Tensor of `lp` (concluding Γ, a) and `rp` (concluding Δ, b).
inline Proof tensor_proof(const Proof& lp, const Formula& a, const Proof& rp, const Formula& b) {
  Sequent gamma = lp->conclusion;
  gamma.erase(gamma.begin() + static_cast<std::ptrdiff_t>(index_of(gamma, a)));
  Sequent delta = rp->conclusion;
  delta.erase(delta.begin() + static_cast<std::ptrdiff_t>(index_of(delta, b)));
  Sequent c = gamma;
  std::vector<std::size_t> left;
  for (std::size_t i = 0; i < gamma.size(); ++i) left.push_back(i);
  c.insert(c.end(), delta.begin(), delta.end());
  c.push_back(Formula::tensor(a, b));
  return make_node(Rule::Tensor, c, {lp, rp}, {c.size() - 1}, std::move(left));
}

// Cut of `lp` (concluding Γ, f) against `rp` (concluding f⊥, Δ).
inline Proof cut_proof(const Proof& lp, const Formula& f, const Proof& rp) {
  Sequent gamma = lp->conclusion;
  gamma.erase(gamma.begin() + static_cast<std::ptrdiff_t>(index_of(gamma, f)));
  Sequent delta = rp->conclusion;
  delta.erase(delta.begin() + static_cast<std::ptrdiff_t>(index_of(delta, negate(f))));
  Sequent c = gamma;
  std::vector<std::size_t> left;
  for (std::size_t i = 0; i < gamma.size(); ++i) left.push_back(i);
  c.insert(c.end(), delta.begin(), delta.end());
  auto n = std::make_shared<ProofNode>();
  n->rule = Rule::Cut;
  n->conclusion = std::move(c);
  n->premises = {lp, rp};
  n->left = std::move(left);
  n->cut_formula = f;
  return n;
}

inline Proof profile_axiom_proof(AxiomSchema s, const Formula& a, const Formula& b = Formula::one()) {
  auto [lhs, rhs] = schema_instance(s, a, b);
  auto n = std::make_shared<ProofNode>();
  n->rule = Rule::ProfileAxiom;
  n->conclusion = {negate(lhs), rhs};
  n->principal = {0, 1};
  n->axiom = schema_name(s);
  return n;
}

// Proof of ⊢ A⊥, A using atomic axioms only.
inline Proof eta_axiom(const Formula& a) {
  using T = Formula::Tag;
  switch (a.tag()) {
    case T::Atom:
    case T::NegAtom:
      return axiom(a);
    case T::One:
      return unary(Rule::Bot, one_proof(), Formula::bot());
    case T::Bot:
      return unary(Rule::Bot, one_proof(), Formula::bot());
    case T::Tensor:
    case T::Par: {
      // The tensor side is whichever of a, a⊥ is a tensor.
      Formula t = a.is(T::Tensor) ? a : negate(a);
      Proof l = eta_axiom(t.left());
      Proof r = eta_axiom(t.right());
      Proof tp = tensor_proof(l, t.left(), r, t.right());
      return par_proof(tp, negate(t.left()), negate(t.right()));
    }
    case T::OfCourse:
    case T::WhyNot: {
      Formula bang = a.is(T::OfCourse) ? a : negate(a);
      Proof inner = eta_axiom(bang.body());
      Proof d = unary(Rule::Dereliction, inner, Formula::why_not(negate(bang.body())));
      return unary(Rule::Promotion, d, bang);
    }
  }
  return axiom(a);
}

// ---------------------------------------------------------------------------
// Checking

struct CheckError {
  std::vector<std::size_t> path;
  std::string reason;

  std::string describe() const {
    std::string p = "root";
    for (auto i : path) p += "." + std::to_string(i);
    return "RuleMismatch at " + p + ": " + reason;
  }
};

inline bool same_multiset(Sequent a, Sequent b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

namespace detail {

inline std::optional<std::string> check_node(const ProofNode& n, const Profile& profile) {
  using T = Formula::Tag;
  const Sequent& c = n.conclusion;
  auto premise_count = [&](std::size_t k) -> std::optional<std::string> {
    if (n.premises.size() != k) {
      return std::string(rule_name(n.rule)) + " expects " + std::to_string(k) + " premiss(es), found " +
             std::to_string(n.premises.size());
    }
    for (auto& p : n.premises) {
      if (!p) return std::string("missing premiss");
    }
    return std::nullopt;
  };
  auto single_principal = [&]() -> std::optional<std::string> {
    if (n.principal.size() != 1 || n.principal[0] >= c.size()) return std::string("bad principal index");
    return std::nullopt;
  };
  auto rest = [&]() {
    Sequent r;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (std::find(n.principal.begin(), n.principal.end(), i) == n.principal.end()) r.push_back(c[i]);
    }
    return r;
  };
  auto expect_premise = [&](std::size_t k, const Sequent& want) -> std::optional<std::string> {
    if (!same_multiset(n.premises[k]->conclusion, want)) {
      return "premiss " + std::to_string(k) + " concludes " + print_sequent(n.premises[k]->conclusion) +
             ", expected " + print_sequent(want);
    }
    return std::nullopt;
  };
  auto split = [&](const Sequent& pool_indices_from) -> std::optional<std::pair<Sequent, Sequent>> {
    (void)pool_indices_from;
    std::vector<bool> taken(c.size(), false);
    for (auto i : n.principal) taken[i] = true;
    Sequent l, r;
    for (auto i : n.left) {
      if (i >= c.size() || taken[i]) return std::nullopt;
      taken[i] = true;
      l.push_back(c[i]);
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!taken[i]) r.push_back(c[i]);
    }
    return std::make_pair(l, r);
  };

  switch (n.rule) {
    case Rule::Axiom: {
      if (auto e = premise_count(0)) return e;
      if (c.size() != 2) return std::string("ax concludes exactly two formulas");
      if (n.principal.size() != 2 || n.principal[0] >= 2 || n.principal[1] >= 2 || n.principal[0] == n.principal[1]) {
        return std::string("ax principal must index both formulas");
      }
      if (negate(c[n.principal[0]]) != c[n.principal[1]]) return std::string("ax formulas are not dual");
      return std::nullopt;
    }
    case Rule::One: {
      if (auto e = premise_count(0)) return e;
      if (c.size() != 1 || !c[0].is(T::One)) return std::string("one rule concludes exactly ⊢ 1");
      if (n.principal.size() != 1 || n.principal[0] != 0) return std::string("bad principal index");
      return std::nullopt;
    }
    case Rule::ProfileAxiom: {
      if (auto e = premise_count(0)) return e;
      auto s = schema_from_name(n.axiom);
      if (!s) return "unknown axiom schema '" + n.axiom + "'";
      if (!profile.has(*s)) return "axiom '" + n.axiom + "' is not part of profile " + profile_name(profile.name);
      if (c.size() != 2) return std::string("profile axiom concludes exactly two formulas");
      if (n.principal.size() != 2 || n.principal[0] >= 2 || n.principal[1] >= 2 || n.principal[0] == n.principal[1]) {
        return std::string("profile axiom principal must index both formulas");
      }
      if (!matches_schema(*s, c[n.principal[0]], c[n.principal[1]])) {
        return "conclusion is not an instance of '" + n.axiom + "'";
      }
      return std::nullopt;
    }
    case Rule::Bot: {
      if (auto e = premise_count(1)) return e;
      if (auto e = single_principal()) return e;
      if (!c[n.principal[0]].is(T::Bot)) return std::string("principal is not ⊥");
      return expect_premise(0, rest());
    }
    case Rule::Par: {
      if (auto e = premise_count(1)) return e;
      if (auto e = single_principal()) return e;
      const Formula& f = c[n.principal[0]];
      if (!f.is(T::Par)) return std::string("principal is not a ⅋");
      Sequent want = rest();
      want.push_back(f.left());
      want.push_back(f.right());
      return expect_premise(0, want);
    }
    case Rule::Dereliction:
    case Rule::Weakening:
    case Rule::Contraction: {
      if (auto e = premise_count(1)) return e;
      if (auto e = single_principal()) return e;
      const Formula& f = c[n.principal[0]];
      if (!f.is(T::WhyNot)) return std::string("principal is not a ?-formula");
      Sequent want = rest();
      if (n.rule == Rule::Dereliction) want.push_back(f.body());
      if (n.rule == Rule::Contraction) {
        want.push_back(f);
        want.push_back(f);
      }
      return expect_premise(0, want);
    }
    case Rule::Promotion: {
      if (auto e = premise_count(1)) return e;
      if (auto e = single_principal()) return e;
      const Formula& f = c[n.principal[0]];
      if (!f.is(T::OfCourse)) return std::string("principal is not a !-formula");
      Sequent want = rest();
      for (auto& g : want) {
        if (!g.is(T::WhyNot)) return "promotion context formula " + print_formula(g) + " is not ?-prefixed";
      }
      want.push_back(f.body());
      return expect_premise(0, want);
    }
    case Rule::Tensor: {
      if (auto e = premise_count(2)) return e;
      if (auto e = single_principal()) return e;
      const Formula& f = c[n.principal[0]];
      if (!f.is(T::Tensor)) return std::string("principal is not a ⊗");
      auto parts = split({});
      if (!parts) return std::string("bad context split");
      parts->first.push_back(f.left());
      parts->second.push_back(f.right());
      if (auto e = expect_premise(0, parts->first)) return e;
      return expect_premise(1, parts->second);
    }
    case Rule::Cut: {
      if (auto e = premise_count(2)) return e;
      if (!n.principal.empty()) return std::string("cut has no principal formula");
      if (!n.cut_formula) return std::string("cut without cut formula");
      auto parts = split({});
      if (!parts) return std::string("bad context split");
      parts->first.push_back(*n.cut_formula);
      parts->second.push_back(negate(*n.cut_formula));
      if (auto e = expect_premise(0, parts->first)) return e;
      return expect_premise(1, parts->second);
    }
  }
  return std::string("unknown rule");
}

inline std::optional<CheckError> check_rec(const ProofNode& n, const Profile& profile,
                                           std::vector<std::size_t>& path) {
  if (auto e = check_node(n, profile)) return CheckError{path, std::string(rule_name(n.rule)) + ": " + *e};
  for (std::size_t i = 0; i < n.premises.size(); ++i) {
    path.push_back(i);
    if (auto e = check_rec(*n.premises[i], profile, path)) return e;
    path.pop_back();
  }
  return std::nullopt;
}

}  // namespace detail

// Accepts iff every node instantiates a MELL rule or a profile axiom. The
// error names the first failing node in pre-order.
inline std::optional<CheckError> check_proof(const Proof& p, const Profile& profile) {
  if (!p) return CheckError{{}, "empty proof"};
  std::vector<std::size_t> path;
  return detail::check_rec(*p, profile, path);
}

inline bool is_cut_free(const Proof& p) {
  if (p->rule == Rule::Cut) return false;
  for (auto& q : p->premises) {
    if (!is_cut_free(q)) return false;
  }
  return true;
}

inline std::size_t proof_size(const Proof& p) {
  std::size_t n = 1;
  for (auto& q : p->premises) n += proof_size(q);
  return n;
}

inline bool uses_profile_axioms(const Proof& p) {
  if (p->rule == Rule::ProfileAxiom) return true;
  for (auto& q : p->premises) {
    if (uses_profile_axioms(q)) return true;
  }
  return false;
}

}  // namespace pict
