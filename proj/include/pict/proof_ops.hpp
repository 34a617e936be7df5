#pragma once

// Operations on proofs: composition by cut, substitution of atoms, and
// interpolation of cut-free proofs.

#include "pict/proof.hpp"

namespace pict {

class CutMismatch : public Error {
 public:
  using Error::Error;
};
class NotCutFree : public Error {
 public:
  using Error::Error;
};
class InterpolationUnsupported : public Error {
 public:
  using Error::Error;
};

// From ⊢ Γ, a and ⊢ a⊥, Δ to ⊢ Γ, Δ.
inline Proof cut_compose(const Proof& p1, const Formula& a, const Proof& p2) {
  const Sequent& c1 = p1->conclusion;
  const Sequent& c2 = p2->conclusion;
  if (std::find(c1.begin(), c1.end(), a) == c1.end()) {
    throw CutMismatch("left proof does not conclude " + print_formula(a));
  }
  if (std::find(c2.begin(), c2.end(), negate(a)) == c2.end()) {
    throw CutMismatch("right proof does not conclude " + print_formula(negate(a)));
  }
  return cut_proof(p1, a, p2);
}

// Cut on the formula at `i1` in p1 against the formula at `i2` in p2.
inline Proof cut_compose(const Proof& p1, std::size_t i1, const Proof& p2, std::size_t i2) {
  if (i1 >= p1->conclusion.size() || i2 >= p2->conclusion.size()) throw CutMismatch("cut index out of range");
  const Formula& a = p1->conclusion[i1];
  if (negate(a) != p2->conclusion[i2]) {
    throw CutMismatch(print_formula(a) + " and " + print_formula(p2->conclusion[i2]) + " are not dual");
  }
  return cut_proof(p1, a, p2);
}

// ---------------------------------------------------------------------------
// Substitution of an atom by a formula

inline Formula substitute_atom(const Formula& f, const Atom& atom, const Formula& a) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
      return f.atom() == atom ? a : f;
    case T::NegAtom:
      return f.atom() == atom ? negate(a) : f;
    case T::One:
    case T::Bot:
      return f;
    case T::Tensor:
      return Formula::tensor(substitute_atom(f.left(), atom, a), substitute_atom(f.right(), atom, a));
    case T::Par:
      return Formula::par(substitute_atom(f.left(), atom, a), substitute_atom(f.right(), atom, a));
    case T::OfCourse:
      return Formula::of_course(substitute_atom(f.body(), atom, a));
    case T::WhyNot:
      return Formula::why_not(substitute_atom(f.body(), atom, a));
  }
  return f;
}

// Replaces `atom` by `a` throughout; axioms on the atom become η-expanded
// axioms on `a`.
inline Proof substitute_proof(const Proof& p, const Atom& atom, const Formula& a) {
  if (p->rule == Rule::Axiom) {
    const Formula& f = p->conclusion[p->principal.size() == 2 ? p->principal[1] : 1];
    if (f.is_literal() && f.atom() == atom) {
      Formula target = f.is(Formula::Tag::Atom) ? a : negate(a);
      return eta_axiom(target);
    }
    return p;
  }
  auto n = std::make_shared<ProofNode>(*p);
  for (auto& f : n->conclusion) f = substitute_atom(f, atom, a);
  if (n->cut_formula) n->cut_formula = substitute_atom(*n->cut_formula, atom, a);
  for (auto& q : n->premises) q = substitute_proof(q, atom, a);
  return n;
}

// ---------------------------------------------------------------------------
// Interpolation

struct Interpolant {
  Formula formula;
  Proof gamma_proof;  // ⊢ Γ, F
  Proof delta_proof;  // ⊢ F⊥, Δ
};

namespace detail {

// Pairs premise positions with their origin: the principal (active
// formulas) or a conclusion index. Equal formulas are interchangeable, so
// greedy matching is enough.
inline std::vector<bool> premise_sides(const Sequent& premise, const Sequent& active, bool active_side,
                                       const Sequent& conclusion, const std::vector<bool>& sides,
                                       const std::vector<std::size_t>& context) {
  std::vector<bool> used_active(active.size(), false);
  std::vector<bool> used_context(context.size(), false);
  std::vector<bool> out(premise.size(), false);
  for (std::size_t i = 0; i < premise.size(); ++i) {
    bool found = false;
    for (std::size_t k = 0; k < active.size() && !found; ++k) {
      if (!used_active[k] && active[k] == premise[i]) {
        used_active[k] = true;
        out[i] = active_side;
        found = true;
      }
    }
    for (std::size_t k = 0; k < context.size() && !found; ++k) {
      if (!used_context[k] && conclusion[context[k]] == premise[i]) {
        used_context[k] = true;
        out[i] = sides[context[k]];
        found = true;
      }
    }
    if (!found) throw Error("premiss formula " + print_formula(premise[i]) + " has no origin");
  }
  return out;
}

inline std::vector<std::size_t> context_of(const ProofNode& n, const std::vector<std::size_t>& excluded) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n.conclusion.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) out.push_back(i);
  }
  return out;
}

// `sides[i]` is true when conclusion position i belongs to Γ.
inline Interpolant interpolate_rec(const Proof& p, const std::vector<bool>& sides) {
  using T = Formula::Tag;
  const ProofNode& n = *p;
  const Formula bot = Formula::bot();
  const Formula one = Formula::one();

  switch (n.rule) {
    case Rule::Cut:
      throw NotCutFree("interpolation requires a cut-free proof");
    case Rule::Axiom:
    case Rule::ProfileAxiom: {
      bool g0 = sides[0], g1 = sides[1];
      if (g0 && g1) return {bot, unary(Rule::Bot, p, bot), one_proof()};
      if (!g0 && !g1) return {one, one_proof(), unary(Rule::Bot, p, bot)};
      if (n.rule == Rule::ProfileAxiom) {
        throw InterpolationUnsupported("profile axiom '" + n.axiom + "' straddles the partition");
      }
      const Formula& d = g0 ? n.conclusion[1] : n.conclusion[0];
      return {d, p, p};
    }
    case Rule::One:
      if (sides[0]) return {bot, unary(Rule::Bot, p, bot), one_proof()};
      return {one, one_proof(), unary(Rule::Bot, p, bot)};
    default:
      break;
  }

  std::size_t pi = n.principal.at(0);
  const Formula& f = n.conclusion[pi];
  bool side = sides[pi];
  auto ctx = context_of(n, n.principal);

  if (n.rule == Rule::Tensor) {
    std::vector<std::size_t> lctx = n.left, rctx;
    for (auto i : ctx) {
      if (std::find(lctx.begin(), lctx.end(), i) == lctx.end()) rctx.push_back(i);
    }
    auto ls = premise_sides(n.premises[0]->conclusion, {f.left()}, side, n.conclusion, sides, lctx);
    auto rs = premise_sides(n.premises[1]->conclusion, {f.right()}, side, n.conclusion, sides, rctx);
    Interpolant i1 = interpolate_rec(n.premises[0], ls);
    Interpolant i2 = interpolate_rec(n.premises[1], rs);
    if (side) {
      // F := F1 ⅋ F2
      Proof g = tensor_proof(i1.gamma_proof, f.left(), i2.gamma_proof, f.right());
      g = par_proof(g, i1.formula, i2.formula);
      Proof d = tensor_proof(i1.delta_proof, negate(i1.formula), i2.delta_proof, negate(i2.formula));
      return {Formula::par(i1.formula, i2.formula), g, d};
    }
    // F := F1 ⊗ F2
    Proof g = tensor_proof(i1.gamma_proof, i1.formula, i2.gamma_proof, i2.formula);
    Proof d = tensor_proof(i1.delta_proof, f.left(), i2.delta_proof, f.right());
    d = par_proof(d, negate(i1.formula), negate(i2.formula));
    return {Formula::tensor(i1.formula, i2.formula), g, d};
  }

  Sequent active;
  switch (n.rule) {
    case Rule::Par:
      active = {f.left(), f.right()};
      break;
    case Rule::Dereliction:
    case Rule::Promotion:
      active = {f.body()};
      break;
    case Rule::Contraction:
      active = {f, f};
      break;
    default:
      break;
  }
  auto ps = premise_sides(n.premises.at(0)->conclusion, active, side, n.conclusion, sides, ctx);
  Interpolant i = interpolate_rec(n.premises[0], ps);

  if (n.rule == Rule::Promotion) {
    if (side) {
      // F := ?F′
      Formula q = Formula::why_not(i.formula);
      Proof g = unary(Rule::Dereliction, i.gamma_proof, q);
      g = unary(Rule::Promotion, g, f);
      Proof d = unary(Rule::Promotion, i.delta_proof, Formula::of_course(negate(i.formula)));
      return {q, g, d};
    }
    // F := !F′
    Formula b = Formula::of_course(i.formula);
    Proof g = unary(Rule::Promotion, i.gamma_proof, b);
    Proof d = unary(Rule::Dereliction, i.delta_proof, Formula::why_not(negate(i.formula)));
    d = unary(Rule::Promotion, d, f);
    return {b, g, d};
  }
  (void)T::Bot;
  if (side) {
    i.gamma_proof = unary(n.rule, i.gamma_proof, f);
  } else {
    i.delta_proof = unary(n.rule, i.delta_proof, f);
  }
  return i;
}

}  // namespace detail

// Interpolant of a cut-free proof of ⊢ Γ, Δ for the given split.
inline Interpolant interpolate(const Proof& p, const Sequent& gamma, const Sequent& delta) {
  if (!is_cut_free(p)) throw NotCutFree("interpolation requires a cut-free proof");
  Sequent all = gamma;
  all.insert(all.end(), delta.begin(), delta.end());
  if (!same_multiset(all, p->conclusion)) {
    throw Error("split " + print_sequent(gamma) + " ; " + print_sequent(delta) + " does not match the conclusion " +
                print_sequent(p->conclusion));
  }
  Sequent remaining = gamma;
  std::vector<bool> sides(p->conclusion.size(), false);
  for (std::size_t i = 0; i < p->conclusion.size(); ++i) {
    auto it = std::find(remaining.begin(), remaining.end(), p->conclusion[i]);
    if (it != remaining.end()) {
      sides[i] = true;
      remaining.erase(it);
    }
  }
  return detail::interpolate_rec(p, sides);
}

// Signed atoms of F must occur in both Γ⊥ and Δ.
inline bool interpolant_literals_ok(const Formula& f, const Sequent& gamma, const Sequent& delta) {
  std::set<std::pair<Atom, bool>> g, d;
  for (auto& x : gamma) {
    auto s = signed_atoms(negate(x));
    g.insert(s.begin(), s.end());
  }
  for (auto& x : delta) {
    auto s = signed_atoms(x);
    d.insert(s.begin(), s.end());
  }
  for (auto& a : signed_atoms(f)) {
    if (!g.count(a) || !d.count(a)) return false;
  }
  return true;
}

}  // namespace pict
