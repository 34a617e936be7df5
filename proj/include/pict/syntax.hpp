#pragma once

// Types, environment formulas and process terms, with the purely structural
// operations on them (negation, duality, annotation, substitution).

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pict {

using Name = std::string;
using NameList = std::vector<Name>;

enum class Polarity : std::uint8_t { Input, Output };
enum class Exponent : std::uint8_t { None, Bang, Quest };
enum class Kind : std::uint8_t { Linear, Omega };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::size_t mix_hash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline int compare_strings(const std::string& a, const std::string& b) {
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Behaviour and capability types

class Behaviour;

struct Capability {
  Polarity polarity = Polarity::Input;
  std::shared_ptr<const Behaviour> payload;
};

class Behaviour {
 public:
  enum class Tag : std::uint8_t { Cap, Tensor, Par, One, Bot };

  Behaviour() : Behaviour(make_unit(Tag::One)) {}

  static Behaviour cap(Polarity p, const Behaviour& payload, Exponent e = Exponent::None) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Cap;
    n->exponent = e;
    n->capability = Capability{p, std::make_shared<const Behaviour>(payload)};
    n->hash = detail::mix_hash(detail::mix_hash(11, static_cast<std::size_t>(p)),
                               detail::mix_hash(static_cast<std::size_t>(e), payload.hash()));
    n->arity = 1;
    return Behaviour(std::move(n));
  }
  static Behaviour input(const Behaviour& payload) { return cap(Polarity::Input, payload); }
  static Behaviour output(const Behaviour& payload) { return cap(Polarity::Output, payload); }
  static Behaviour from_capability(const Capability& c, Exponent e = Exponent::None) {
    return cap(c.polarity, *c.payload, e);
  }
  static Behaviour tensor(const Behaviour& a, const Behaviour& b) { return binary(Tag::Tensor, a, b); }
  static Behaviour par(const Behaviour& a, const Behaviour& b) { return binary(Tag::Par, a, b); }
  static Behaviour one() { return make_unit(Tag::One); }
  static Behaviour bot() { return make_unit(Tag::Bot); }

  Tag tag() const { return node_->tag; }
  Exponent exponent() const { return node_->exponent; }
  const Capability& capability() const { return node_->capability; }
  const Behaviour& payload() const { return *node_->capability.payload; }
  Polarity polarity() const { return node_->capability.polarity; }
  const Behaviour& left() const { return *node_->left; }
  const Behaviour& right() const { return *node_->right; }
  std::size_t hash() const { return node_->hash; }
  // Number of capability leaves.
  std::size_t arity() const { return node_->arity; }

  bool is_cap() const { return tag() == Tag::Cap; }
  bool is_binary() const { return tag() == Tag::Tensor || tag() == Tag::Par; }

  friend int compare(const Behaviour& a, const Behaviour& b) {
    if (a.node_ == b.node_) return 0;
    if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
    switch (a.tag()) {
      case Tag::One:
      case Tag::Bot:
        return 0;
      case Tag::Cap:
        if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
        if (a.polarity() != b.polarity()) return a.polarity() < b.polarity() ? -1 : 1;
        return compare(a.payload(), b.payload());
      case Tag::Tensor:
      case Tag::Par:
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
    }
    return 0;
  }
  friend bool operator==(const Behaviour& a, const Behaviour& b) {
    return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == 0);
  }
  friend bool operator<(const Behaviour& a, const Behaviour& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Tag tag = Tag::One;
    Exponent exponent = Exponent::None;
    Capability capability;
    std::shared_ptr<const Behaviour> left, right;
    std::size_t hash = 0;
    std::size_t arity = 0;
  };
  explicit Behaviour(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Behaviour make_unit(Tag t) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->hash = t == Tag::One ? 0x51 : 0x52;
    return Behaviour(std::move(n));
  }
  static Behaviour binary(Tag t, const Behaviour& a, const Behaviour& b) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->left = std::make_shared<const Behaviour>(a);
    n->right = std::make_shared<const Behaviour>(b);
    n->hash = detail::mix_hash(detail::mix_hash(static_cast<std::size_t>(t) * 31, a.hash()), b.hash());
    n->arity = a.arity() + b.arity();
    return Behaviour(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline int compare(const Capability& a, const Capability& b) {
  if (a.polarity != b.polarity) return a.polarity < b.polarity ? -1 : 1;
  return compare(*a.payload, *b.payload);
}
inline bool operator==(const Capability& a, const Capability& b) {
  return a.polarity == b.polarity && *a.payload == *b.payload;
}
inline std::size_t hash_capability(const Capability& c) {
  return detail::mix_hash(static_cast<std::size_t>(c.polarity) + 7, c.payload->hash());
}

// Capability leaves of a behaviour, left to right.
inline void collect_leaves(const Behaviour& b, std::vector<Behaviour>& out) {
  if (b.is_cap()) {
    out.push_back(b);
  } else if (b.is_binary()) {
    collect_leaves(b.left(), out);
    collect_leaves(b.right(), out);
  }
}
inline std::vector<Behaviour> leaves(const Behaviour& b) {
  std::vector<Behaviour> out;
  collect_leaves(b, out);
  return out;
}

// Duality: capabilities flip polarity but keep their payload.
inline Behaviour dual(const Behaviour& a) {
  using T = Behaviour::Tag;
  switch (a.tag()) {
    case T::Cap: {
      Polarity p = a.polarity() == Polarity::Input ? Polarity::Output : Polarity::Input;
      Exponent e = a.exponent() == Exponent::Bang    ? Exponent::Quest
                   : a.exponent() == Exponent::Quest ? Exponent::Bang
                                                     : Exponent::None;
      return Behaviour::cap(p, a.payload(), e);
    }
    case T::Tensor:
      return Behaviour::par(dual(a.left()), dual(a.right()));
    case T::Par:
      return Behaviour::tensor(dual(a.left()), dual(a.right()));
    case T::One:
      return Behaviour::bot();
    case T::Bot:
      return Behaviour::one();
  }
  return a;
}

// ---------------------------------------------------------------------------
// Formulas. Atoms are capability assignments `x : T`; an atom without a
// capability is a bare propositional variable, used when the prover is run
// on plain logic.

struct Atom {
  Name name;
  std::optional<Capability> cap;

  static Atom prop(Name n) { return Atom{std::move(n), std::nullopt}; }
  static Atom assign(Name n, Capability c) { return Atom{std::move(n), std::move(c)}; }

  std::size_t hash() const {
    std::size_t h = std::hash<std::string>{}(name);
    return cap ? detail::mix_hash(h, hash_capability(*cap)) : h;
  }
  friend int compare(const Atom& a, const Atom& b) {
    if (int c = detail::compare_strings(a.name, b.name)) return c;
    if (a.cap.has_value() != b.cap.has_value()) return a.cap.has_value() ? 1 : -1;
    return a.cap ? compare(*a.cap, *b.cap) : 0;
  }
  friend bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
  friend bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }
};

class Formula {
 public:
  enum class Tag : std::uint8_t { Atom, NegAtom, Tensor, Par, One, Bot, OfCourse, WhyNot };

  Formula() : Formula(unit(Tag::Bot)) {}

  static Formula atom(const pict::Atom& a) { return literal(Tag::Atom, a); }
  static Formula neg_atom(const pict::Atom& a) { return literal(Tag::NegAtom, a); }
  static Formula prop(const Name& n) { return atom(pict::Atom::prop(n)); }
  static Formula assign(const Name& n, const Capability& c) { return atom(pict::Atom::assign(n, c)); }
  static Formula tensor(const Formula& a, const Formula& b) { return binary(Tag::Tensor, a, b); }
  static Formula par(const Formula& a, const Formula& b) { return binary(Tag::Par, a, b); }
  static Formula one() { return unit(Tag::One); }
  static Formula bot() { return unit(Tag::Bot); }
  static Formula of_course(const Formula& a) { return unary(Tag::OfCourse, a); }
  static Formula why_not(const Formula& a) { return unary(Tag::WhyNot, a); }

  Tag tag() const { return node_->tag; }
  const pict::Atom& atom() const { return node_->atom; }
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  // Operand of ! or ?.
  const Formula& body() const { return *node_->left; }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  bool has_exponential() const { return node_->has_exponential; }

  bool is_literal() const { return tag() == Tag::Atom || tag() == Tag::NegAtom; }
  bool is(Tag t) const { return tag() == t; }

  friend int compare(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return 0;
    if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
    switch (a.tag()) {
      case Tag::Atom:
      case Tag::NegAtom:
        return compare(a.atom(), b.atom());
      case Tag::One:
      case Tag::Bot:
        return 0;
      case Tag::OfCourse:
      case Tag::WhyNot:
        return compare(a.body(), b.body());
      case Tag::Tensor:
      case Tag::Par:
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
    }
    return 0;
  }
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == 0);
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Tag tag = Tag::Bot;
    pict::Atom atom;
    std::shared_ptr<const Formula> left, right;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool has_exponential = false;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula unit(Tag t) {
    static const Formula one_f = make_unit(Tag::One);
    static const Formula bot_f = make_unit(Tag::Bot);
    return t == Tag::One ? one_f : bot_f;
  }
  static Formula make_unit(Tag t) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->hash = t == Tag::One ? 0x101 : 0x202;
    return Formula(std::move(n));
  }
  static Formula literal(Tag t, const pict::Atom& a) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->atom = a;
    n->hash = detail::mix_hash(t == Tag::Atom ? 0x303 : 0x404, a.hash());
    return Formula(std::move(n));
  }
  static Formula binary(Tag t, const Formula& a, const Formula& b) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->left = std::make_shared<const Formula>(a);
    n->right = std::make_shared<const Formula>(b);
    n->hash = detail::mix_hash(detail::mix_hash(static_cast<std::size_t>(t) * 0x9f, a.hash()), b.hash());
    n->size = 1 + a.size() + b.size();
    n->has_exponential = a.has_exponential() || b.has_exponential();
    return Formula(std::move(n));
  }
  static Formula unary(Tag t, const Formula& a) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->left = std::make_shared<const Formula>(a);
    n->hash = detail::mix_hash(static_cast<std::size_t>(t) * 0x3b, a.hash());
    n->size = 1 + a.size();
    n->has_exponential = true;
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Linear negation, by De Morgan duality.
inline Formula negate(const Formula& f) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
      return Formula::neg_atom(f.atom());
    case T::NegAtom:
      return Formula::atom(f.atom());
    case T::Tensor:
      return Formula::par(negate(f.left()), negate(f.right()));
    case T::Par:
      return Formula::tensor(negate(f.left()), negate(f.right()));
    case T::One:
      return Formula::bot();
    case T::Bot:
      return Formula::one();
    case T::OfCourse:
      return Formula::why_not(negate(f.body()));
    case T::WhyNot:
      return Formula::of_course(negate(f.body()));
  }
  return f;
}

// Environment formula: exponentials only directly on literals.
inline bool is_environment_formula(const Formula& f) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::OfCourse:
    case T::WhyNot:
      return f.body().is_literal();
    case T::Tensor:
    case T::Par:
      return is_environment_formula(f.left()) && is_environment_formula(f.right());
    default:
      return true;
  }
}

inline bool has_negative_literal(const Formula& f) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::NegAtom:
      return true;
    case T::Atom:
    case T::One:
    case T::Bot:
      return false;
    case T::OfCourse:
    case T::WhyNot:
      return has_negative_literal(f.body());
    default:
      return has_negative_literal(f.left()) || has_negative_literal(f.right());
  }
}

// Environment type: environment formula with only positive capability atoms.
inline bool is_environment_type(const Formula& f) {
  return is_environment_formula(f) && !has_negative_literal(f);
}

// A literal with its exponent, as seen in an environment formula.
struct Literal {
  Atom atom;
  Exponent exponent = Exponent::None;
  bool negated = false;

  friend int compare(const Literal& a, const Literal& b) {
    if (int c = compare(a.atom, b.atom)) return c;
    if (a.exponent != b.exponent) return a.exponent < b.exponent ? -1 : 1;
    if (a.negated != b.negated) return a.negated ? 1 : -1;
    return 0;
  }
  friend bool operator==(const Literal& a, const Literal& b) { return compare(a, b) == 0; }
  friend bool operator<(const Literal& a, const Literal& b) { return compare(a, b) < 0; }
};

namespace detail {
inline void collect_literals(const Formula& f, Exponent e, std::vector<Literal>& out) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
    case T::NegAtom:
      out.push_back(Literal{f.atom(), e, f.tag() == T::NegAtom});
      break;
    case T::OfCourse:
      collect_literals(f.body(), Exponent::Bang, out);
      break;
    case T::WhyNot:
      collect_literals(f.body(), Exponent::Quest, out);
      break;
    case T::Tensor:
    case T::Par:
      collect_literals(f.left(), e, out);
      collect_literals(f.right(), e, out);
      break;
    default:
      break;
  }
}
}  // namespace detail

// Literal multiset of a formula, ignoring connective structure (sorted).
inline std::vector<Literal> literals_of(const Formula& f) {
  std::vector<Literal> out;
  detail::collect_literals(f, Exponent::None, out);
  std::sort(out.begin(), out.end());
  return out;
}

// Signed atoms (atom, negated) occurring in a formula, as a set.
inline std::set<std::pair<Atom, bool>> signed_atoms(const Formula& f) {
  std::set<std::pair<Atom, bool>> out;
  for (auto& l : literals_of(f)) out.emplace(l.atom, l.negated);
  return out;
}

inline void formula_names(const Formula& f, std::set<Name>& out) {
  for (auto& l : literals_of(f)) out.insert(l.atom.name);
}
inline bool mentions_name(const Formula& f, const Name& n) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
    case T::NegAtom:
      return f.atom().name == n;
    case T::One:
    case T::Bot:
      return false;
    case T::OfCourse:
    case T::WhyNot:
      return mentions_name(f.body(), n);
    default:
      return mentions_name(f.left(), n) || mentions_name(f.right(), n);
  }
}

// Annotates each capability of `a`, left to right, with the matching name.
inline Formula annotate(const NameList& names, const Behaviour& a) {
  if (names.size() != a.arity()) {
    throw ArityMismatch("annotate: " + std::to_string(names.size()) + " names for a behaviour of arity " +
                        std::to_string(a.arity()));
  }
  std::size_t next = 0;
  std::function<Formula(const Behaviour&)> go = [&](const Behaviour& b) -> Formula {
    using T = Behaviour::Tag;
    switch (b.tag()) {
      case T::Cap: {
        Formula lit = Formula::assign(names[next++], b.capability());
        if (b.exponent() == Exponent::Bang) return Formula::of_course(lit);
        if (b.exponent() == Exponent::Quest) return Formula::why_not(lit);
        return lit;
      }
      case T::Tensor: {
        Formula l = go(b.left());
        return Formula::tensor(l, go(b.right()));
      }
      case T::Par: {
        Formula l = go(b.left());
        return Formula::par(l, go(b.right()));
      }
      case T::One:
        return Formula::one();
      case T::Bot:
        return Formula::bot();
    }
    return Formula::one();
  };
  return go(a);
}

// Inverse of annotate on names: forgets the names of an annotated formula.
// Returns nullopt when the formula is not the image of some behaviour.
inline std::optional<Behaviour> erase_names(const Formula& f) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
      if (!f.atom().cap) return std::nullopt;
      return Behaviour::from_capability(*f.atom().cap);
    case T::OfCourse:
    case T::WhyNot: {
      if (!f.body().is(T::Atom) || !f.body().atom().cap) return std::nullopt;
      return Behaviour::from_capability(*f.body().atom().cap,
                                        f.is(T::OfCourse) ? Exponent::Bang : Exponent::Quest);
    }
    case T::Tensor:
    case T::Par: {
      auto l = erase_names(f.left());
      auto r = erase_names(f.right());
      if (!l || !r) return std::nullopt;
      return f.is(T::Tensor) ? Behaviour::tensor(*l, *r) : Behaviour::par(*l, *r);
    }
    case T::One:
      return Behaviour::one();
    case T::Bot:
      return Behaviour::bot();
    default:
      return std::nullopt;
  }
}

using NameMap = std::map<Name, Name>;

// Renames atoms; equalising substitutions are allowed on formulas.
inline Formula substitute(const Formula& f, const NameMap& s) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::Atom:
    case T::NegAtom: {
      auto it = s.find(f.atom().name);
      if (it == s.end()) return f;
      Atom a{it->second, f.atom().cap};
      return f.is(T::Atom) ? Formula::atom(a) : Formula::neg_atom(a);
    }
    case T::OfCourse:
      return Formula::of_course(substitute(f.body(), s));
    case T::WhyNot:
      return Formula::why_not(substitute(f.body(), s));
    case T::Tensor:
      return Formula::tensor(substitute(f.left(), s), substitute(f.right(), s));
    case T::Par:
      return Formula::par(substitute(f.left(), s), substitute(f.right(), s));
    default:
      return f;
  }
}

// Left-nested ⊗ of a list; `empty` is returned for no operands.
inline Formula tensor_all(const std::vector<Formula>& fs, const Formula& empty = Formula::one()) {
  if (fs.empty()) return empty;
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::tensor(acc, fs[i]);
  return acc;
}
inline Formula par_all(const std::vector<Formula>& fs, const Formula& empty = Formula::bot()) {
  if (fs.empty()) return empty;
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::par(acc, fs[i]);
  return acc;
}

// [x]^k_A
inline Formula channel_formula(const Name& x, const Behaviour& a, Kind k) {
  Formula out = Formula::assign(x, Capability{Polarity::Output, std::make_shared<const Behaviour>(a)});
  Formula in = Formula::assign(x, Capability{Polarity::Input, std::make_shared<const Behaviour>(a)});
  if (k == Kind::Omega) return Formula::par(Formula::of_course(out), Formula::why_not(in));
  return Formula::par(out, in);
}

// ---------------------------------------------------------------------------
// Processes

class Process {
 public:
  enum class Tag : std::uint8_t { Nop, In, RepIn, Out, Par, New };

  Process() : Process(nop()) {}

  static Process nop() {
    static const Process z = [] {
      auto n = std::make_shared<Node>();
      n->tag = Tag::Nop;
      return Process(std::move(n));
    }();
    return z;
  }
  static Process input(Name subject, NameList binders, const Process& body) {
    return prefix(Tag::In, std::move(subject), std::move(binders), body);
  }
  static Process rep_input(Name subject, NameList binders, const Process& body) {
    return prefix(Tag::RepIn, std::move(subject), std::move(binders), body);
  }
  static Process output(Name subject, NameList objects, const Process& cont = nop()) {
    return prefix(Tag::Out, std::move(subject), std::move(objects), cont);
  }
  static Process par(const Process& a, const Process& b) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Par;
    n->left = std::make_shared<const Process>(a);
    n->right = std::make_shared<const Process>(b);
    n->size = 1 + a.size() + b.size();
    return Process(std::move(n));
  }
  static Process make_new(Name binder, const Behaviour& payload, Kind kind, const Process& body) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::New;
    n->subject = std::move(binder);
    n->payload = payload;
    n->kind = kind;
    n->left = std::make_shared<const Process>(body);
    n->size = 1 + body.size();
    return Process(std::move(n));
  }

  Tag tag() const { return node_->tag; }
  bool is(Tag t) const { return tag() == t; }
  const Name& subject() const { return node_->subject; }
  // New binder.
  const Name& binder() const { return node_->subject; }
  // Input binders or output objects.
  const NameList& names() const { return node_->names; }
  const Process& body() const { return *node_->left; }
  const Process& left() const { return *node_->left; }
  const Process& right() const { return *node_->right; }
  const Behaviour& payload() const { return node_->payload; }
  Kind kind() const { return node_->kind; }
  std::size_t size() const { return node_->size; }

  // Exact syntactic equality (no alpha).
  friend int compare(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return 0;
    if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
    switch (a.tag()) {
      case Tag::Nop:
        return 0;
      case Tag::In:
      case Tag::RepIn:
      case Tag::Out:
        if (int c = detail::compare_strings(a.subject(), b.subject())) return c;
        if (a.names() != b.names()) return a.names() < b.names() ? -1 : 1;
        return compare(a.body(), b.body());
      case Tag::Par:
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
      case Tag::New:
        if (int c = detail::compare_strings(a.binder(), b.binder())) return c;
        if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
        if (int c = compare(a.payload(), b.payload())) return c;
        return compare(a.body(), b.body());
    }
    return 0;
  }
  friend bool operator==(const Process& a, const Process& b) { return compare(a, b) == 0; }
  friend bool operator<(const Process& a, const Process& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Tag tag = Tag::Nop;
    Name subject;
    NameList names;
    std::shared_ptr<const Process> left, right;
    Behaviour payload;
    Kind kind = Kind::Linear;
    std::size_t size = 1;
  };
  explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Process prefix(Tag t, Name subject, NameList names, const Process& body) {
    if (t != Tag::Out) {
      std::set<Name> seen(names.begin(), names.end());
      if (seen.size() != names.size()) throw Error("input binders must be pairwise distinct");
    }
    auto n = std::make_shared<Node>();
    n->tag = t;
    n->subject = std::move(subject);
    n->names = std::move(names);
    n->left = std::make_shared<const Process>(body);
    n->size = 1 + body.size();
    return Process(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline void free_names_into(const Process& p, std::set<Name>& out) {
  using T = Process::Tag;
  switch (p.tag()) {
    case T::Nop:
      return;
    case T::Out:
      out.insert(p.subject());
      out.insert(p.names().begin(), p.names().end());
      free_names_into(p.body(), out);
      return;
    case T::In:
    case T::RepIn: {
      std::set<Name> inner;
      free_names_into(p.body(), inner);
      for (auto& x : p.names()) inner.erase(x);
      out.insert(inner.begin(), inner.end());
      out.insert(p.subject());
      return;
    }
    case T::Par:
      free_names_into(p.left(), out);
      free_names_into(p.right(), out);
      return;
    case T::New: {
      std::set<Name> inner;
      free_names_into(p.body(), inner);
      inner.erase(p.binder());
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

inline std::set<Name> free_names(const Process& p) {
  std::set<Name> out;
  free_names_into(p, out);
  return out;
}

// Every name occurring in p, bound or free.
inline void all_names_into(const Process& p, std::set<Name>& out) {
  using T = Process::Tag;
  switch (p.tag()) {
    case T::Nop:
      return;
    case T::Out:
    case T::In:
    case T::RepIn:
      out.insert(p.subject());
      out.insert(p.names().begin(), p.names().end());
      all_names_into(p.body(), out);
      return;
    case T::Par:
      all_names_into(p.left(), out);
      all_names_into(p.right(), out);
      return;
    case T::New:
      out.insert(p.binder());
      all_names_into(p.body(), out);
      return;
  }
}
inline std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  all_names_into(p, out);
  return out;
}

// Fresh-name supply: `base_N`, skipping every name it has been told about.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<Name> used) : used_(std::move(used)) {}

  void reserve(const Name& n) { used_.insert(n); }
  void reserve(const std::set<Name>& ns) { used_.insert(ns.begin(), ns.end()); }

  Name next(const Name& hint) {
    Name base = hint;
    if (auto pos = base.find('_'); pos != std::string::npos && pos > 0) {
      bool digits = pos + 1 < base.size();
      for (std::size_t i = pos + 1; i < base.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(base[i]));
      if (digits) base = base.substr(0, pos);
    }
    for (;;) {
      Name candidate = base + "_" + std::to_string(++counter_);
      if (used_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::set<Name> used_;
  std::size_t counter_ = 0;
};

namespace detail {

inline Name rename(const Name& n, const NameMap& s) {
  auto it = s.find(n);
  return it == s.end() ? n : it->second;
}

inline Process substitute(const Process& p, const NameMap& s, FreshNames& fresh);

// Handles binders: drops shadowed entries and alpha-renames binders that
// would capture a name in the range of the substitution.
inline std::pair<NameList, NameMap> enter_binders(const NameList& binders, const Process& body, const NameMap& s,
                                                   FreshNames& fresh) {
  NameMap inner = s;
  for (auto& x : binders) inner.erase(x);
  std::set<Name> body_free = free_names(body);
  std::set<Name> range;
  for (auto& [k, v] : inner) {
    if (body_free.count(k)) range.insert(v);
  }
  NameList renamed;
  for (auto& x : binders) {
    if (range.count(x)) {
      Name y = fresh.next(x);
      inner[x] = y;
      renamed.push_back(y);
    } else {
      renamed.push_back(x);
    }
  }
  return {renamed, inner};
}

inline Process substitute(const Process& p, const NameMap& s, FreshNames& fresh) {
  using T = Process::Tag;
  if (s.empty()) return p;
  switch (p.tag()) {
    case T::Nop:
      return p;
    case T::Out: {
      NameList objs;
      for (auto& v : p.names()) objs.push_back(rename(v, s));
      return Process::output(rename(p.subject(), s), objs, substitute(p.body(), s, fresh));
    }
    case T::In:
    case T::RepIn: {
      auto [binders, inner] = enter_binders(p.names(), p.body(), s, fresh);
      Process body = substitute(p.body(), inner, fresh);
      Name subj = rename(p.subject(), s);
      return p.is(T::In) ? Process::input(subj, binders, body) : Process::rep_input(subj, binders, body);
    }
    case T::Par:
      return Process::par(substitute(p.left(), s, fresh), substitute(p.right(), s, fresh));
    case T::New: {
      auto [binders, inner] = enter_binders({p.binder()}, p.body(), s, fresh);
      return Process::make_new(binders[0], p.payload(), p.kind(), substitute(p.body(), inner, fresh));
    }
  }
  return p;
}

}  // namespace detail

// Capture-avoiding substitution of free names.
inline Process substitute(const Process& p, const NameMap& s) {
  std::set<Name> used = all_names(p);
  for (auto& [k, v] : s) {
    used.insert(k);
    used.insert(v);
  }
  FreshNames fresh(std::move(used));
  return detail::substitute(p, s, fresh);
}

inline Process substitute(const Process& p, const NameList& from, const NameList& to) {
  if (from.size() != to.size()) throw ArityMismatch("substitution of unequal name lists");
  NameMap s;
  for (std::size_t i = 0; i < from.size(); ++i) s[from[i]] = to[i];
  return substitute(p, s);
}

// Renames bound names deterministically in binder-occurrence order, so that
// alpha-equivalent terms become identical.
inline Process alpha_canonical(const Process& p) {
  std::size_t counter = 0;
  std::function<Process(const Process&, const NameMap&)> go = [&](const Process& q, const NameMap& s) -> Process {
    using T = Process::Tag;
    switch (q.tag()) {
      case T::Nop:
        return q;
      case T::Out: {
        NameList objs;
        for (auto& v : q.names()) objs.push_back(detail::rename(v, s));
        return Process::output(detail::rename(q.subject(), s), objs, go(q.body(), s));
      }
      case T::In:
      case T::RepIn: {
        NameMap inner = s;
        NameList binders;
        for (auto& x : q.names()) {
          Name y = "%" + std::to_string(counter++);
          inner[x] = y;
          binders.push_back(y);
        }
        Process body = go(q.body(), inner);
        Name subj = detail::rename(q.subject(), s);
        return q.is(T::In) ? Process::input(subj, binders, body) : Process::rep_input(subj, binders, body);
      }
      case T::Par: {
        Process l = go(q.left(), s);
        return Process::par(l, go(q.right(), s));
      }
      case T::New: {
        NameMap inner = s;
        Name y = "%" + std::to_string(counter++);
        inner[q.binder()] = y;
        return Process::make_new(y, q.payload(), q.kind(), go(q.body(), inner));
      }
    }
    return q;
  };
  return go(p, {});
}

inline bool alpha_equal(const Process& a, const Process& b) { return alpha_canonical(a) == alpha_canonical(b); }

}  // namespace pict
