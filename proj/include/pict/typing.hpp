#pragma once

// Typing derivations for E ⊢ P: checking, inference and expansion of the
// derived rules.

#include <functional>

#include "pict/proof_ops.hpp"
#include "pict/prover.hpp"

namespace pict {

enum class DRule : std::uint8_t {
  Nop,
  Para,
  Sub,
  In,
  InBang,
  Out,
  NewLin,
  NewOmega,
  OutAsync,
  OutBound,
  NewStar,
};

inline const char* drule_name(DRule r) {
  switch (r) {
    case DRule::Nop: return "nop";
    case DRule::Para: return "para";
    case DRule::Sub: return "sub";
    case DRule::In: return "in";
    case DRule::InBang: return "in-bang";
    case DRule::Out: return "out";
    case DRule::NewLin: return "new-lin";
    case DRule::NewOmega: return "new-omega";
    case DRule::OutAsync: return "derived-out-async";
    case DRule::OutBound: return "derived-out-bound";
    case DRule::NewStar: return "derived-new-star";
  }
  return "?";
}

inline std::optional<DRule> drule_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(DRule::NewStar); ++i) {
    auto r = static_cast<DRule>(i);
    if (s == drule_name(r)) return r;
  }
  return std::nullopt;
}

inline bool is_derived(DRule r) { return r == DRule::OutAsync || r == DRule::OutBound || r == DRule::NewStar; }

struct DerivationNode;
using Derivation = std::shared_ptr<const DerivationNode>;

struct DerivationNode {
  DRule rule = DRule::Nop;
  Formula env;
  Process process;
  std::vector<Derivation> premises;
  Proof proof;                    // sub: ⊢ E⊥, F
  std::optional<Behaviour> type;  // derived out-bound and new-star: the tuple type
  NameList names;                 // derived out-bound and new-star: the tuple
};

inline Derivation make_derivation(DRule r, Formula env, Process p, std::vector<Derivation> premises = {},
                                  Proof proof = nullptr, std::optional<Behaviour> type = std::nullopt,
                                  NameList names = {}) {
  auto n = std::make_shared<DerivationNode>();
  n->rule = r;
  n->env = std::move(env);
  n->process = std::move(p);
  n->premises = std::move(premises);
  n->proof = std::move(proof);
  n->type = std::move(type);
  n->names = std::move(names);
  return n;
}

class DuplicateNames : public Error {
 public:
  using Error::Error;
};
class NonCapabilityBase : public Error {
 public:
  using Error::Error;
};
class UnknownFreeNameType : public Error {
 public:
  using Error::Error;
};

inline Formula capability_literal(const Name& u, Polarity p, const Behaviour& a) {
  return Formula::assign(u, Capability{p, std::make_shared<const Behaviour>(a)});
}
inline Formula in_literal(const Name& u, const Behaviour& a) { return capability_literal(u, Polarity::Input, a); }
inline Formula out_literal(const Name& u, const Behaviour& a) { return capability_literal(u, Polarity::Output, a); }

// The behaviour A with annotate(names, A) == f, if any.
inline std::optional<Behaviour> split_annotation(const Formula& f, const NameList& names) {
  auto a = erase_names(f);
  if (!a || a->arity() != names.size()) return std::nullopt;
  if (annotate(names, *a) != f) return std::nullopt;
  return a;
}

// E^!: 1, or a ⊗-tree of !-literals.
inline bool is_bang_context(const Formula& f) {
  using T = Formula::Tag;
  if (f.is(T::One)) return true;
  std::function<bool(const Formula&)> go = [&](const Formula& g) {
    if (g.is(T::OfCourse)) return g.body().is(T::Atom);
    if (g.is(T::Tensor)) return go(g.left()) && go(g.right());
    return false;
  };
  return go(f);
}

// Kind of the `new` that creates a name of the given leaf capability in the
// generalised rule: linear capabilities, !↑B and ?↓B.
inline Kind leaf_kind(const Behaviour& leaf) {
  if (leaf.exponent() == Exponent::None) return Kind::Linear;
  if (leaf.exponent() == Exponent::Bang && leaf.polarity() == Polarity::Output) return Kind::Omega;
  if (leaf.exponent() == Exponent::Quest && leaf.polarity() == Polarity::Input) return Kind::Omega;
  throw NonCapabilityBase("capability " + print_behaviour(leaf) + " does not correspond to a new rule");
}

// new x1 … new xn P for the tuple x⃗:A, one binder per capability of A.
inline Process new_cascade(const NameList& names, const Behaviour& a, const Process& body) {
  std::set<Name> seen;
  for (auto& n : names) {
    if (!seen.insert(n).second) throw DuplicateNames("name " + n + " occurs twice in the created tuple");
  }
  auto ls = leaves(a);
  if (ls.size() != names.size()) {
    throw ArityMismatch("tuple of " + std::to_string(names.size()) + " names for a behaviour of arity " +
                        std::to_string(ls.size()));
  }
  Process p = body;
  for (std::size_t i = ls.size(); i-- > 0;) p = Process::make_new(names[i], ls[i].payload(), leaf_kind(ls[i]), p);
  return p;
}

// ---------------------------------------------------------------------------
// Checking

struct DerivationError {
  enum class Kind : std::uint8_t { SideConditionViolated, SchemaMismatch, BadSubProof, DuplicateNames, NonCapabilityBase };
  Kind kind = Kind::SchemaMismatch;
  std::vector<std::size_t> path;
  std::string reason;

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::SideConditionViolated: return "SideConditionViolated";
      case Kind::SchemaMismatch: return "SchemaMismatch";
      case Kind::BadSubProof: return "BadSubProof";
      case Kind::DuplicateNames: return "DuplicateNames";
      case Kind::NonCapabilityBase: return "NonCapabilityBase";
    }
    return "?";
  }
  std::string describe() const {
    std::string p = "root";
    for (auto i : path) p += "." + std::to_string(i);
    return std::string(kind_name(kind)) + " at " + p + ": " + reason;
  }
};

namespace detail {

using DKind = DerivationError::Kind;
using NodeFailure = std::optional<std::pair<DKind, std::string>>;

inline NodeFailure schema(const std::string& msg) { return std::make_pair(DKind::SchemaMismatch, msg); }

inline NodeFailure names_avoid(const NameList& names, const Formula& e, const char* rule) {
  for (auto& x : names) {
    if (mentions_name(e, x)) {
      return std::make_pair(DKind::SideConditionViolated,
                            std::string(rule) + ": name " + x + " occurs in the environment " + print_formula(e));
    }
  }
  return std::nullopt;
}

inline NodeFailure check_dnode(const DerivationNode& n, const Profile& profile) {
  using PT = Process::Tag;
  using FT = Formula::Tag;
  auto count = [&](std::size_t k) -> NodeFailure {
    if (n.premises.size() != k) {
      return schema(std::string(drule_name(n.rule)) + " expects " + std::to_string(k) + " premiss(es)");
    }
    for (auto& d : n.premises) {
      if (!d) return schema("missing premiss");
    }
    return std::nullopt;
  };
  auto env_is = [&](const Formula& want) -> NodeFailure {
    if (n.env != want) return schema("environment " + print_formula(n.env) + " should be " + print_formula(want));
    return std::nullopt;
  };

  switch (n.rule) {
    case DRule::Nop:
      if (auto e = count(0)) return e;
      if (!n.process.is(PT::Nop)) return schema("nop concludes the process 0");
      return env_is(Formula::bot());

    case DRule::Para: {
      if (auto e = count(2)) return e;
      if (!n.process.is(PT::Par)) return schema("para concludes a parallel composition");
      if (n.premises[0]->process != n.process.left() || n.premises[1]->process != n.process.right()) {
        return schema("para premisses do not type the components");
      }
      return env_is(Formula::par(n.premises[0]->env, n.premises[1]->env));
    }

    case DRule::Sub: {
      if (auto e = count(1)) return e;
      if (n.premises[0]->process != n.process) return schema("sub changes the process");
      if (!n.proof) return std::make_pair(DKind::BadSubProof, std::string("sub without a proof"));
      Sequent want{negate(n.env), n.premises[0]->env};
      if (!same_multiset(n.proof->conclusion, want)) {
        return std::make_pair(DKind::BadSubProof, "proof concludes " + print_sequent(n.proof->conclusion) +
                                                      ", expected " + print_sequent(want));
      }
      if (auto e = check_proof(n.proof, profile)) return std::make_pair(DKind::BadSubProof, e->describe());
      return std::nullopt;
    }

    case DRule::In:
    case DRule::InBang: {
      if (auto e = count(1)) return e;
      PT want_tag = n.rule == DRule::In ? PT::In : PT::RepIn;
      if (!n.process.is(want_tag)) return schema(std::string(drule_name(n.rule)) + " concludes an input prefix");
      const Derivation& d = n.premises[0];
      if (d->process != n.process.body()) return schema("premiss does not type the continuation");
      if (!d->env.is(FT::Tensor)) return schema("premiss environment is not of the shape x:A ⊗ E");
      auto a = split_annotation(d->env.left(), n.process.names());
      if (!a) return schema("premiss does not start with the received names annotated by a behaviour");
      const Formula& rest = d->env.right();
      if (n.rule == DRule::InBang && !is_bang_context(rest)) {
        return schema("in-bang context " + print_formula(rest) + " is not a ⊗ of !-literals");
      }
      if (auto e = names_avoid(n.process.names(), rest, drule_name(n.rule))) return e;
      Formula lit = in_literal(n.process.subject(), *a);
      if (n.rule == DRule::InBang) lit = Formula::why_not(lit);
      return env_is(Formula::tensor(lit, rest));
    }

    case DRule::Out: {
      if (auto e = count(1)) return e;
      if (!n.process.is(PT::Out)) return schema("out concludes an output prefix");
      const Derivation& d = n.premises[0];
      if (d->process != n.process.body()) return schema("premiss does not type the continuation");
      if (!n.env.is(FT::Tensor) || !n.env.left().is(FT::Atom) || !n.env.left().atom().cap ||
          n.env.left().atom().cap->polarity != Polarity::Output) {
        return schema("environment does not start with an output capability");
      }
      const Behaviour& a = *n.env.left().atom().cap->payload;
      if (a.arity() != n.process.names().size()) return schema("arity of the sent tuple does not match");
      return env_is(Formula::tensor(out_literal(n.process.subject(), a),
                                    Formula::par(annotate(n.process.names(), a), d->env)));
    }

    case DRule::NewLin:
    case DRule::NewOmega: {
      if (auto e = count(1)) return e;
      Kind k = n.rule == DRule::NewLin ? Kind::Linear : Kind::Omega;
      if (!n.process.is(PT::New) || n.process.kind() != k) {
        return schema(std::string(drule_name(n.rule)) + " concludes a name creation of the same kind");
      }
      const Derivation& d = n.premises[0];
      if (d->process != n.process.body()) return schema("premiss does not type the body");
      if (auto e = names_avoid({n.process.binder()}, n.env, drule_name(n.rule))) return e;
      Formula want = Formula::tensor(channel_formula(n.process.binder(), n.process.payload(), k), n.env);
      if (d->env != want) return schema("premiss environment should be " + print_formula(want));
      return std::nullopt;
    }

    case DRule::OutAsync: {
      if (auto e = count(0)) return e;
      if (!n.process.is(PT::Out) || !n.process.body().is(PT::Nop)) {
        return schema("out-async concludes an output with no continuation");
      }
      if (!n.env.is(FT::Tensor) || !n.env.left().is(FT::Atom) || !n.env.left().atom().cap ||
          n.env.left().atom().cap->polarity != Polarity::Output) {
        return schema("environment does not start with an output capability");
      }
      const Behaviour& a = *n.env.left().atom().cap->payload;
      if (a.arity() != n.process.names().size()) return schema("arity of the sent tuple does not match");
      return env_is(Formula::tensor(out_literal(n.process.subject(), a), annotate(n.process.names(), a)));
    }

    case DRule::OutBound:
    case DRule::NewStar: {
      if (auto e = count(1)) return e;
      if (!n.type) return schema("derived rule without its tuple type");
      const Behaviour& a = *n.type;
      const Derivation& d = n.premises[0];
      if (a.arity() != n.names.size()) return schema("tuple does not match the arity of its type");
      Process body = d->process;
      Formula e = n.env;
      if (n.rule == DRule::OutBound) {
        if (!n.env.is(FT::Tensor) || !n.env.left().is(FT::Atom) || !n.env.left().atom().cap ||
            n.env.left().atom().cap->polarity != Polarity::Output) {
          return schema("environment does not start with an output capability");
        }
        if (*n.env.left().atom().cap->payload != a) return schema("output capability does not carry the tuple type");
        const Name& u = n.env.left().atom().name;
        if (std::find(n.names.begin(), n.names.end(), u) != n.names.end()) {
          return std::make_pair(DKind::SideConditionViolated, "subject " + u + " is among the created names");
        }
        body = Process::output(u, n.names, d->process);
        e = n.env.right();
      }
      Process want;
      try {
        want = new_cascade(n.names, a, body);
      } catch (const DuplicateNames& ex) {
        return std::make_pair(DKind::DuplicateNames, std::string(ex.what()));
      } catch (const NonCapabilityBase& ex) {
        return std::make_pair(DKind::NonCapabilityBase, std::string(ex.what()));
      }
      if (want != n.process) return schema("process should be " + print_process(want));
      if (auto err = names_avoid(n.names, e, drule_name(n.rule))) return err;
      Formula premise = n.rule == DRule::OutBound
                            ? Formula::tensor(annotate(n.names, dual(a)), e)
                            : Formula::tensor(Formula::par(annotate(n.names, a), annotate(n.names, dual(a))), e);
      if (d->env != premise) return schema("premiss environment should be " + print_formula(premise));
      return std::nullopt;
    }
  }
  return schema("unknown rule");
}

inline std::optional<DerivationError> check_drec(const DerivationNode& n, const Profile& profile,
                                                 std::vector<std::size_t>& path) {
  if (auto f = check_dnode(n, profile)) return DerivationError{f->first, path, f->second};
  for (std::size_t i = 0; i < n.premises.size(); ++i) {
    path.push_back(i);
    if (auto e = check_drec(*n.premises[i], profile, path)) return e;
    path.pop_back();
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<DerivationError> check_derivation(const Derivation& d, const Profile& profile) {
  if (!d) return DerivationError{DerivationError::Kind::SchemaMismatch, {}, "empty derivation"};
  std::vector<std::size_t> path;
  return detail::check_drec(*d, profile, path);
}

// Sub nodes only at the root or right above in, in-bang and new nodes.
inline bool is_lemma1_normal(const Derivation& d) {
  std::function<bool(const Derivation&, std::optional<DRule>)> go = [&](const Derivation& n,
                                                                         std::optional<DRule> parent) {
    if (n->rule == DRule::Sub && parent) {
      DRule p = *parent;
      if (p != DRule::In && p != DRule::InBang && p != DRule::NewLin && p != DRule::NewOmega) return false;
    }
    if (n->rule == DRule::Sub && parent && (*parent == DRule::Sub)) return false;
    for (auto& q : n->premises) {
      if (!go(q, n->rule)) return false;
    }
    return true;
  };
  return go(d, std::nullopt);
}

inline bool has_derived_nodes(const Derivation& d) {
  if (is_derived(d->rule)) return true;
  for (auto& q : d->premises) {
    if (has_derived_nodes(q)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Expansion of derived rules

namespace detail {

inline Derivation sub_over(const Formula& env, const Derivation& premise, const Profile& profile,
                           const Budget& budget) {
  if (env == premise->env) return premise;
  auto r = entails(env, premise->env, profile, budget);
  if (!r.proved()) {
    throw Error("cannot justify " + print_formula(env) + " ≤ " + print_formula(premise->env) + " (" +
                status_name(r.status) + ")");
  }
  return make_derivation(DRule::Sub, env, premise->process, {premise}, r.proof);
}

inline Derivation expand_new_star(const Formula& e, const NameList& xs, const Behaviour& a, const Derivation& d,
                                  const Profile& profile, const Budget& budget);

inline Derivation expand_node(const Derivation& d, const Profile& profile, const Budget& budget) {
  std::vector<Derivation> premises;
  for (auto& q : d->premises) premises.push_back(expand_node(q, profile, budget));
  switch (d->rule) {
    case DRule::OutAsync: {
      Formula lit = d->env.left();
      Formula pre = Formula::tensor(lit, Formula::par(d->env.right(), Formula::bot()));
      Derivation nop = make_derivation(DRule::Nop, Formula::bot(), Process::nop());
      Derivation out = make_derivation(DRule::Out, pre, d->process, {nop});
      return sub_over(d->env, out, profile, budget);
    }
    case DRule::OutBound: {
      const Behaviour& a = *d->type;
      const Derivation& p = premises.at(0);
      Formula lit = d->env.left();
      const Name& u = lit.atom().name;
      Process out_p = Process::output(u, d->names, p->process);
      Derivation out = make_derivation(DRule::Out, Formula::tensor(lit, Formula::par(annotate(d->names, a), p->env)),
                                       out_p, {p});
      Formula pair = Formula::par(annotate(d->names, a), annotate(d->names, dual(a)));
      Derivation sub = sub_over(Formula::tensor(pair, d->env), out, profile, budget);
      return expand_new_star(d->env, d->names, a, sub, profile, budget);
    }
    case DRule::NewStar:
      return expand_new_star(d->env, d->names, *d->type, premises.at(0), profile, budget);
    default: {
      auto n = std::make_shared<DerivationNode>(*d);
      n->premises = std::move(premises);
      return n;
    }
  }
}

// The generalised new, by induction on the tuple type.
inline Derivation expand_new_star(const Formula& e, const NameList& xs, const Behaviour& a, const Derivation& d,
                                  const Profile& profile, const Budget& budget) {
  using BT = Behaviour::Tag;
  switch (a.tag()) {
    case BT::Cap: {
      Kind k = leaf_kind(a);
      const Name& x = xs.at(0);
      Formula premise = Formula::tensor(channel_formula(x, a.payload(), k), e);
      Derivation inner = sub_over(premise, d, profile, budget);
      return make_derivation(k == Kind::Linear ? DRule::NewLin : DRule::NewOmega, e,
                             Process::make_new(x, a.payload(), k, d->process), {inner});
    }
    case BT::One:
    case BT::Bot:
      return sub_over(e, d, profile, budget);
    case BT::Tensor:
    case BT::Par: {
      const Behaviour& b = a.left();
      const Behaviour& c = a.right();
      NameList ys(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(b.arity()));
      NameList zs(xs.begin() + static_cast<std::ptrdiff_t>(b.arity()), xs.end());
      Formula ey = Formula::tensor(Formula::par(annotate(ys, b), annotate(ys, dual(b))), e);
      Formula ez = Formula::tensor(Formula::par(annotate(zs, c), annotate(zs, dual(c))), ey);
      Derivation sub = sub_over(ez, d, profile, budget);
      Derivation inner = expand_new_star(ey, zs, c, sub, profile, budget);
      return expand_new_star(e, ys, b, inner, profile, budget);
    }
  }
  return d;
}

}  // namespace detail

// Replaces every derived-rule node by core rules; the conclusion is kept.
inline Derivation expand_derived(const Derivation& d, const Profile& profile = Profile::core(),
                                 const Budget& budget = {}) {
  return detail::expand_node(d, profile, budget);
}

// ---------------------------------------------------------------------------
// Inference

// Payloads known for each name, per polarity.
struct NameTypes {
  std::map<Name, Behaviour> out, in;
  std::set<Name> bound;

  static NameTypes from_environment(const Formula& e) {
    NameTypes t;
    for (auto& l : literals_of(e)) {
      if (l.negated || !l.atom.cap) continue;
      auto& m = l.atom.cap->polarity == Polarity::Output ? t.out : t.in;
      const Behaviour& a = *l.atom.cap->payload;
      auto [it, fresh] = m.emplace(l.atom.name, a);
      if (!fresh && it->second != a) {
        throw UnknownFreeNameType("name " + l.atom.name + " is given two different " +
                                  (l.atom.cap->polarity == Polarity::Output ? "output" : "input") + " types");
      }
    }
    return t;
  }
};

struct CheckOutcome {
  enum class Status : std::uint8_t { Typed, Untyped, Unknown };
  Status status = Status::Unknown;
  Derivation derivation;
  Formula env;
  std::vector<std::string> obligations;
  bool heuristic = false;  // some environment was picked among several candidates
  std::vector<Derivation> alternatives;

  bool typed() const { return status == Status::Typed; }
};

inline const char* status_name(CheckOutcome::Status s) {
  switch (s) {
    case CheckOutcome::Status::Typed: return "Typed";
    case CheckOutcome::Status::Untyped: return "Untyped";
    case CheckOutcome::Status::Unknown: return "Unknown";
  }
  return "?";
}

struct FactorResult {
  std::optional<Formula> env;
  Proof proof;  // ⊢ (R ⊗ E)⊥, F
  bool impossible = false;
  bool chosen = false;
  std::vector<std::pair<Formula, Proof>> found;
  std::vector<std::string> attempts;
};

enum class FactorShape : std::uint8_t { Linear, Bang };

namespace detail {

inline bool mentions_any(const Formula& f, const std::set<Name>& ns) {
  for (auto& l : literals_of(f)) {
    if (ns.count(l.atom.name)) return true;
  }
  return false;
}

inline Formula flip_meeting_pars(const Formula& f, const std::set<Name>& ns) {
  using T = Formula::Tag;
  if (!f.is(T::Par) && !f.is(T::Tensor)) return f;
  Formula l = flip_meeting_pars(f.left(), ns);
  Formula r = flip_meeting_pars(f.right(), ns);
  if (f.is(T::Par) && mentions_any(f.left(), ns) && mentions_any(f.right(), ns)) return Formula::tensor(l, r);
  return f.is(T::Par) ? Formula::par(l, r) : Formula::tensor(l, r);
}

inline Formula drop_literals(const Formula& f, const std::set<Name>& ns) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
    case T::NegAtom:
    case T::OfCourse:
    case T::WhyNot:
      return mentions_any(f, ns) ? Formula::one() : f;
    case T::Tensor:
      return Formula::tensor(drop_literals(f.left(), ns), drop_literals(f.right(), ns));
    case T::Par:
      return Formula::par(drop_literals(f.left(), ns), drop_literals(f.right(), ns));
    default:
      return f;
  }
}

inline bool only_names(const Formula& f, const std::set<Name>& ns) {
  auto ls = literals_of(f);
  return !ls.empty() && std::all_of(ls.begin(), ls.end(), [&](const Literal& l) { return ns.count(l.atom.name) > 0; });
}

// ⅋-components built only from literals on the names are consumed whole.
inline Formula prune_components(const Formula& f, const std::set<Name>& ns) {
  using T = Formula::Tag;
  if (f.is(T::Par)) {
    auto side = [&](const Formula& g) { return only_names(g, ns) ? Formula::bot() : prune_components(g, ns); };
    return Formula::par(side(f.left()), side(f.right()));
  }
  if (f.is(T::Tensor)) return Formula::tensor(prune_components(f.left(), ns), prune_components(f.right(), ns));
  return f;
}

inline Formula simplify_units(const Formula& f) {
  using T = Formula::Tag;
  if (!f.is(T::Par) && !f.is(T::Tensor)) return f;
  Formula l = simplify_units(f.left());
  Formula r = simplify_units(f.right());
  if (f.is(T::Tensor)) {
    if (l.is(T::One)) return r;
    if (r.is(T::One)) return l;
    return Formula::tensor(l, r);
  }
  if (l.is(T::Bot)) return r;
  if (r.is(T::Bot)) return l;
  return Formula::par(l, r);
}

inline void flatten_par(const Formula& f, std::vector<Formula>& out) {
  if (f.is(Formula::Tag::Par)) {
    flatten_par(f.left(), out);
    flatten_par(f.right(), out);
  } else {
    out.push_back(f);
  }
}

// Gathers the ⅋-components that mention the names into one ⊗ group and
// descends into a single mentioning component.
inline Formula regroup(const Formula& f, const std::set<Name>& ns) {
  using T = Formula::Tag;
  if (f.is(T::Tensor)) {
    bool l = mentions_any(f.left(), ns), r = mentions_any(f.right(), ns);
    if (l && !r) return Formula::tensor(regroup(f.left(), ns), f.right());
    if (r && !l) return Formula::tensor(f.left(), regroup(f.right(), ns));
    return f;
  }
  if (!f.is(T::Par)) return f;
  std::vector<Formula> parts, with, without;
  flatten_par(f, parts);
  for (auto& g : parts) (mentions_any(g, ns) ? with : without).push_back(g);
  if (with.size() == 1) with[0] = regroup(with[0], ns);
  if (with.size() > 1) with = {tensor_all(with)};
  without.insert(without.end(), with.begin(), with.end());
  return par_all(without);
}

// A literal on one of the names that R does not provide, outside a ?,
// cannot be matched by anything.
inline bool unmatched_literal(const Formula& f, const Formula& r, const std::set<Name>& ns) {
  std::set<Atom> provided;
  for (auto& l : literals_of(r)) provided.insert(l.atom);
  for (auto& l : literals_of(f)) {
    if (ns.count(l.atom.name) && !provided.count(l.atom) && l.exponent != Exponent::Quest) return true;
  }
  return false;
}

}  // namespace detail

namespace detail {

// 2·(literals/2 + ones − tensors − 1) over a sequent, looking through
// exponentials; zero is necessary for provability without exponentials.
inline int unit_excess(const Sequent& s) {
  int lits = 0, ones = 0, tensors = 0;
  std::function<void(const Formula&)> go = [&](const Formula& f) {
    using T = Formula::Tag;
    switch (f.tag()) {
      case T::Atom:
      case T::NegAtom: ++lits; break;
      case T::One: ++ones; break;
      case T::Tensor: ++tensors; go(f.left()); go(f.right()); break;
      case T::Par: go(f.left()); go(f.right()); break;
      case T::OfCourse:
      case T::WhyNot: go(f.body()); break;
      default: break;
    }
  };
  for (auto& f : s) go(f);
  return lits + 2 * (ones - tensors - 1);
}

// E ⊗ ⊥^k for k > 0, E ⅋ 1^−k for k < 0.
inline Formula shift_units(Formula e, int k) {
  for (; k > 0; --k) e = Formula::tensor(e, Formula::bot());
  for (; k < 0; ++k) e = Formula::par(e, Formula::one());
  return simplify_units(e);
}

}  // namespace detail

// Finds E without the names `ns` such that R ⊗ E ≤ F. Candidates are
// produced by literal surgery on F and verified by the prover; `chosen` is
// set when several distinct candidates were available.
inline FactorResult factor(const Formula& f, const Formula& r, const std::set<Name>& ns, FactorShape shape,
                           const Profile& profile, const Budget& budget, std::size_t want = 1) {
  FactorResult out;
  std::vector<Formula> candidates;
  if (shape == FactorShape::Bang) {
    std::set<Atom> needed, all;
    for (auto& l : literals_of(f)) {
      if (l.negated || ns.count(l.atom.name)) continue;
      all.insert(l.atom);
      if (l.exponent != Exponent::Quest) needed.insert(l.atom);
    }
    for (auto* set : {&needed, &all}) {
      std::vector<Formula> bangs;
      for (auto& a : *set) bangs.push_back(Formula::of_course(Formula::atom(a)));
      candidates.push_back(tensor_all(bangs));
    }
  } else {
    if (literals_of(r).empty()) candidates.push_back(detail::simplify_units(Formula::par(negate(r), f)));
    candidates.push_back(detail::simplify_units(detail::drop_literals(f, ns)));
    candidates.push_back(detail::simplify_units(detail::drop_literals(detail::regroup(f, ns), ns)));
    candidates.push_back(detail::simplify_units(detail::drop_literals(detail::flip_meeting_pars(f, ns), ns)));
    Formula pruned = detail::prune_components(f, ns);
    candidates.push_back(detail::simplify_units(detail::drop_literals(pruned, ns)));
    candidates.push_back(detail::simplify_units(detail::drop_literals(detail::regroup(pruned, ns), ns)));
    // a ! formula may absorb a ⊥ that would otherwise need a 1
    if (f.has_exponential()) candidates.push_back(Formula::bot());
  }
  std::vector<Formula> distinct;
  auto add = [&](const Formula& e) {
    if (std::find(distinct.begin(), distinct.end(), e) == distinct.end()) distinct.push_back(e);
  };
  bool exponential = f.has_exponential() || r.has_exponential();
  for (auto& e : candidates) {
    if (shape == FactorShape::Bang) {
      add(e);
      continue;
    }
    // each ⊥ added to E supplies one 1 in the negated side, and each 1 one ⊗
    int excess = detail::unit_excess({negate(Formula::tensor(r, e)), f});
    if (exponential) add(e);
    if (excess % 2 == 0) add(detail::shift_units(e, -excess / 2));
    if (exponential) {
      if (excess % 2 != 0) {
        add(detail::shift_units(e, -(excess - 1) / 2));
        add(detail::shift_units(e, -(excess + 1) / 2));
      }
    }
  }
  // smaller environments carry fewer stray units
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const Formula& a, const Formula& b) { return a.size() < b.size(); });
  out.chosen = distinct.size() > 1;
  for (auto& e : distinct) {
    auto res = entails(Formula::tensor(r, e), f, profile, budget);
    out.attempts.push_back(print_formula(Formula::tensor(r, e)) + " <= " + print_formula(f) + ": " +
                           status_name(res.status));
    if (res.proved()) {
      if (!out.env) {
        out.env = e;
        out.proof = res.proof;
      }
      out.found.emplace_back(e, res.proof);
      if (out.found.size() >= want) return out;
    }
  }
  out.impossible = !out.env && detail::unmatched_literal(f, r, ns);
  return out;
}

namespace detail {

struct SynthFailure {
  bool definitive = false;
  std::vector<std::string> reasons;
};

// Each node yields a few alternative derivations, differing in the
// environments chosen where factoring had several solutions.
class Synthesizer {
 public:
  Synthesizer(const Profile& profile, const Budget& budget, std::size_t alternatives = 3)
      : profile_(profile), budget_(budget), alternatives_(alternatives) {}

  std::vector<Derivation> run(const Process& p, const NameTypes& types) { return synth(p, types); }
  bool chose() const { return chose_; }

 private:
  using Alts = std::vector<Derivation>;

  [[noreturn]] static void fail(bool definitive, std::string reason) {
    throw SynthFailure{definitive, {std::move(reason)}};
  }

  static const Behaviour& payload(const NameTypes& t, const Name& u, Polarity pol) {
    const auto& m = pol == Polarity::Output ? t.out : t.in;
    auto it = m.find(u);
    if (it != m.end()) return it->second;
    const char* what = pol == Polarity::Output ? "output" : "input";
    if (t.bound.count(u)) fail(true, "name " + u + " carries no " + what + " capability");
    throw UnknownFreeNameType("no " + std::string(what) + " type known for free name " + u);
  }

  static NameTypes bind(const NameTypes& t, const NameList& xs, const Behaviour& a) {
    NameTypes s = t;
    auto ls = leaves(a);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s.out.erase(xs[i]);
      s.in.erase(xs[i]);
      s.bound.insert(xs[i]);
      auto& m = ls[i].polarity() == Polarity::Output ? s.out : s.in;
      m.emplace(xs[i], ls[i].payload());
    }
    return s;
  }

  void push_distinct(Alts& out, const Derivation& d) const {
    if (out.size() >= alternatives_) return;
    for (auto& o : out) {
      if (o->env == d->env) return;
    }
    out.push_back(d);
  }

  // Premisses R ⊗ E for each alternative below; `make` builds the conclusion.
  template <typename Make>
  Alts shaped(const Formula& r, const Alts& below, const std::set<Name>& ns, FactorShape shape, Make make) {
    Alts out;
    SynthFailure failure{true, {}};
    for (auto& d : below) {
      auto fr = factor(d->env, r, ns, shape, profile_, budget_, alternatives_);
      chose_ = chose_ || fr.chosen || below.size() > 1;
      if (fr.found.empty()) {
        failure.definitive = failure.definitive && fr.impossible;
        failure.reasons.push_back("no environment of the shape " + print_formula(r) + " ⊗ E entails " +
                                  print_formula(d->env));
        for (auto& a : fr.attempts) failure.reasons.push_back("  " + a);
        continue;
      }
      for (auto& [e, proof] : fr.found) {
        Formula premise = Formula::tensor(r, e);
        Derivation sub = premise == d->env ? d : make_derivation(DRule::Sub, premise, d->process, {d}, proof);
        push_distinct(out, make(e, sub));
      }
    }
    if (out.empty()) throw failure;
    return out;
  }

  Alts synth(const Process& p, const NameTypes& t) {
    using PT = Process::Tag;
    switch (p.tag()) {
      case PT::Nop:
        return {make_derivation(DRule::Nop, Formula::bot(), p)};
      case PT::Par: {
        Alts as = synth(p.left(), t);
        Alts bs = synth(p.right(), t);
        Alts out;
        for (auto& a : as) {
          for (auto& b : bs) push_distinct(out, make_derivation(DRule::Para, Formula::par(a->env, b->env), p, {a, b}));
        }
        return out;
      }
      case PT::Out: {
        const Behaviour& a = payload(t, p.subject(), Polarity::Output);
        if (a.arity() != p.names().size()) {
          fail(true, "output on " + p.subject() + " sends " + std::to_string(p.names().size()) +
                         " names, its type expects " + std::to_string(a.arity()));
        }
        Formula lit = out_literal(p.subject(), a);
        Formula sent = annotate(p.names(), a);
        if (p.body().is(PT::Nop)) return {make_derivation(DRule::OutAsync, Formula::tensor(lit, sent), p)};
        Alts out;
        for (auto& d : synth(p.body(), t)) {
          push_distinct(out, make_derivation(DRule::Out, Formula::tensor(lit, Formula::par(sent, d->env)), p, {d}));
        }
        return out;
      }
      case PT::In:
      case PT::RepIn: {
        const Behaviour& a = payload(t, p.subject(), Polarity::Input);
        if (a.arity() != p.names().size()) {
          fail(true, "input on " + p.subject() + " binds " + std::to_string(p.names().size()) +
                         " names, its type provides " + std::to_string(a.arity()));
        }
        Alts below = synth(p.body(), bind(t, p.names(), a));
        std::set<Name> ns(p.names().begin(), p.names().end());
        bool bang = p.is(PT::RepIn);
        Formula lit = in_literal(p.subject(), a);
        if (bang) lit = Formula::why_not(lit);
        return shaped(annotate(p.names(), a), below, ns, bang ? FactorShape::Bang : FactorShape::Linear,
                      [&](const Formula& e, const Derivation& sub) {
                        return make_derivation(bang ? DRule::InBang : DRule::In, Formula::tensor(lit, e), p, {sub});
                      });
      }
      case PT::New: {
        NameTypes s = t;
        s.out.insert_or_assign(p.binder(), p.payload());
        s.in.insert_or_assign(p.binder(), p.payload());
        s.bound.insert(p.binder());
        Alts below = synth(p.body(), s);
        DRule rule = p.kind() == Kind::Linear ? DRule::NewLin : DRule::NewOmega;
        return shaped(channel_formula(p.binder(), p.payload(), p.kind()), below, {p.binder()}, FactorShape::Linear,
                      [&](const Formula& e, const Derivation& sub) { return make_derivation(rule, e, p, {sub}); });
      }
    }
    fail(true, "unknown process");
  }

  Profile profile_;
  Budget budget_;
  std::size_t alternatives_;
  bool chose_ = false;
};

}  // namespace detail

// Builds the canonical environment of `p` bottom-up; free names take their
// types from `types`. Other environments found on the way are kept in
// `alternatives`.
inline CheckOutcome synthesize(const Process& p, const NameTypes& types, const Profile& profile = Profile::core(),
                               const Budget& budget = {}, std::size_t alternatives = 3) {
  CheckOutcome out;
  try {
    detail::Synthesizer s(profile, budget, alternatives);
    out.alternatives = s.run(p, types);
    out.derivation = out.alternatives.front();
    out.heuristic = s.chose();
    out.env = out.derivation->env;
    out.status = CheckOutcome::Status::Typed;
  } catch (const detail::SynthFailure& f) {
    out.status = f.definitive ? CheckOutcome::Status::Untyped : CheckOutcome::Status::Unknown;
    out.obligations = f.reasons;
  }
  return out;
}

// E ⊢ P: synthesizes candidate environments F and discharges E ≤ F at the
// root.
inline CheckOutcome check(const Formula& e, const Process& p, const Profile& profile = Profile::core(),
                          const Budget& budget = {}) {
  if (!is_environment_type(e)) throw Error("not an environment type: " + print_formula(e));
  CheckOutcome out;
  // a wider search is tried when no narrow alternative fits E
  for (std::size_t width : {std::size_t{3}, std::size_t{12}, std::size_t{40}}) {
    out = synthesize(p, NameTypes::from_environment(e), profile, budget, width);
    if (out.status == CheckOutcome::Status::Untyped) return out;
    if (!out.typed()) continue;
    bool refuted = true;
    for (auto& d : out.alternatives) {
      auto r = entails(e, d->env, profile, budget);
      if (r.proved()) {
        out.env = d->env;
        out.derivation = make_derivation(DRule::Sub, e, p, {d}, r.proof);
        out.obligations.clear();
        return out;
      }
      refuted = refuted && r.refuted();
      out.obligations.push_back(print_formula(e) + " <= " + print_formula(d->env) + ": " + status_name(r.status));
    }
    out.status = refuted && !out.heuristic ? CheckOutcome::Status::Untyped : CheckOutcome::Status::Unknown;
    out.derivation = nullptr;
    if (!out.heuristic) break;
  }
  return out;
}

}  // namespace pict
