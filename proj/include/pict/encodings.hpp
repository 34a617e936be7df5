#pragma once

// Forward translations into the core system from three neighbouring type
// disciplines, each read from a small dedicated syntax.
//
//   kpt   types   !1(T,..) ?1(T,..) !w(T,..) ?w(T,..), and <>1(..) <>w(..)
//                 for both capabilities (contexts and creations only)
//         file    given x : T, .. |- P      with  new x : <>m(T,..) . P
//   hyb   types   ?(t,..) | !(t,..)
//         file    given x : t, .. |- P      P ::= 0 | P | P | *x(y,..).P | x[y,..].P
//   dcpt  types   1 | bot | A (*) B | A (%) B | !A | ?A
//         file    given y : A, .. |- P :: x : A
//                 P ::= 0 | P | P | u(x).P | u<v>.P | *u(x).P | new x : A . P

#include "pict/surface.hpp"
#include "pict/typing.hpp"

namespace pict {

class NotInFragment : public Error {
 public:
  using Error::Error;
};
class NotInShape : public Error {
 public:
  using Error::Error;
};
class NotMonadic : public Error {
 public:
  using Error::Error;
};

struct Translation {
  Formula env;
  Process process;
  Profile profile;
};

namespace detail {

class Tokens {
 public:
  Tokens(std::string_view src, std::string file) : file_(std::move(file)), toks_(lex(src, file_)) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok t, std::size_t k = 0) const { return peek(k).kind == t; }
  Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok t) {
    if (!at(t)) return false;
    advance();
    return true;
  }
  Token expect(Tok t) {
    if (!at(t)) fail({tok_name(t)});
    return advance();
  }
  Name name() { return expect(Tok::Ident).text; }
  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    std::string what = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError({file_, t.start, t.end}, "unexpected " + what, std::move(expected));
  }

 private:
  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <typename Item>
std::vector<Item> comma_list(Tokens& ts, Tok close, Item (*item)(Tokens&)) {
  std::vector<Item> out;
  if (ts.at(close)) return out;
  out.push_back(item(ts));
  while (ts.accept(Tok::Comma)) out.push_back(item(ts));
  return out;
}

inline NameList name_list(Tokens& ts, Tok close) {
  NameList out;
  if (ts.at(close)) return out;
  out.push_back(ts.name());
  while (ts.accept(Tok::Comma)) out.push_back(ts.name());
  return out;
}

inline Behaviour tensor_of(const std::vector<Behaviour>& bs) {
  if (bs.empty()) return Behaviour::one();
  Behaviour b = bs.back();
  for (std::size_t i = bs.size() - 1; i-- > 0;) b = Behaviour::tensor(bs[i], b);
  return b;
}

inline Formula environment_of(const std::vector<Formula>& fs) { return tensor_all(fs, Formula::bot()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// KPT: i/o types with linearity, restricted to pure capabilities.

struct KptType {
  enum class Cap : std::uint8_t { Out, In, Both };
  Cap cap = Cap::Out;
  bool omega = false;
  std::vector<KptType> payload;
};

struct KptJudgement {
  std::vector<std::pair<Name, KptType>> context;
  Process process;
};

inline Behaviour kpt_translate_tuple(const std::vector<KptType>& ts);

inline Behaviour kpt_translate(const KptType& t) {
  using C = KptType::Cap;
  if (t.cap == C::Both) throw NotInFragment("a communicated channel type carries both capabilities");
  Polarity p = t.cap == C::Out ? Polarity::Output : Polarity::Input;
  Exponent e = Exponent::None;
  if (t.omega) e = t.cap == C::Out ? Exponent::Bang : Exponent::Quest;
  return Behaviour::cap(p, kpt_translate_tuple(t.payload), e);
}

inline Behaviour kpt_translate_tuple(const std::vector<KptType>& ts) {
  std::vector<Behaviour> bs;
  for (auto& t : ts) bs.push_back(kpt_translate(t));
  return detail::tensor_of(bs);
}

inline Formula kpt_translate_assignment(const Name& x, const KptType& t) {
  if (t.cap != KptType::Cap::Both) return annotate({x}, kpt_translate(t));
  KptType out = t, in = t;
  out.cap = KptType::Cap::Out;
  in.cap = KptType::Cap::In;
  return Formula::par(annotate({x}, kpt_translate(out)), annotate({x}, kpt_translate(in)));
}

inline Formula kpt_translate_context(const std::vector<std::pair<Name, KptType>>& ctx) {
  std::vector<Formula> fs;
  for (auto& [x, t] : ctx) fs.push_back(kpt_translate_assignment(x, t));
  return detail::environment_of(fs);
}

namespace detail {

inline KptType kpt_type(Tokens& ts) {
  KptType t;
  if (ts.at(Tok::Ident) && ts.peek().text == "bool") throw NotInFragment("the boolean type is outside the fragment");
  if (ts.accept(Tok::Bang)) {
    t.cap = KptType::Cap::Out;
  } else if (ts.accept(Tok::Quest)) {
    t.cap = KptType::Cap::In;
  } else if (ts.at(Tok::Lt) && ts.at(Tok::Gt, 1)) {
    ts.advance();
    ts.advance();
    t.cap = KptType::Cap::Both;
  } else {
    ts.fail({"'!'", "'?'", "'<>'"});
  }
  if (ts.accept(Tok::One)) {
    t.omega = false;
  } else if (ts.at(Tok::Ident) && ts.peek().text == "w") {
    ts.advance();
    t.omega = true;
  } else {
    ts.fail({"'1'", "'w'"});
  }
  ts.expect(Tok::LParen);
  t.payload = comma_list<KptType>(ts, Tok::RParen, kpt_type);
  ts.expect(Tok::RParen);
  return t;
}

inline std::pair<Name, KptType> kpt_entry(Tokens& ts) {
  Name x = ts.name();
  ts.expect(Tok::Colon);
  return {x, kpt_type(ts)};
}

// Plain π-calculus prefixes shared by the kpt and dcpt grammars; `binder`
// parses `new x : <type> .` and builds the new.
template <typename Binder>
Process pi_process(Tokens& ts, Binder& binder);

template <typename Binder>
Process pi_prefix(Tokens& ts, Binder& binder) {
  if (ts.accept(Tok::Zero)) return Process::nop();
  if (ts.accept(Tok::LParen)) {
    Process p = pi_process(ts, binder);
    ts.expect(Tok::RParen);
    return p;
  }
  if (ts.at(Tok::New)) return binder(ts);
  bool rep = ts.accept(Tok::Star);
  Name u = ts.name();
  if (rep || ts.at(Tok::LParen)) {
    ts.expect(Tok::LParen);
    NameList xs = name_list(ts, Tok::RParen);
    ts.expect(Tok::RParen);
    ts.expect(Tok::Dot);
    Process body = pi_prefix(ts, binder);
    return rep ? Process::rep_input(u, xs, body) : Process::input(u, xs, body);
  }
  ts.expect(Tok::Lt);
  NameList vs = name_list(ts, Tok::Gt);
  ts.expect(Tok::Gt);
  if (!ts.accept(Tok::Dot)) return Process::output(u, vs);
  return Process::output(u, vs, pi_prefix(ts, binder));
}

template <typename Binder>
Process pi_process(Tokens& ts, Binder& binder) {
  Process p = pi_prefix(ts, binder);
  while (ts.accept(Tok::Bar)) p = Process::par(p, pi_prefix(ts, binder));
  return p;
}

}  // namespace detail

inline KptJudgement parse_kpt(std::string_view text, const std::string& file = "") {
  detail::Tokens ts(text, file);
  KptJudgement j;
  ts.expect(detail::Tok::Given);
  j.context = detail::comma_list<std::pair<Name, KptType>>(ts, detail::Tok::Turnstile, detail::kpt_entry);
  ts.expect(detail::Tok::Turnstile);
  auto binder = [](detail::Tokens& t) {
    t.expect(detail::Tok::New);
    Name x = t.name();
    t.expect(detail::Tok::Colon);
    KptType ty = detail::kpt_type(t);
    t.expect(detail::Tok::Dot);
    if (ty.cap != KptType::Cap::Both) throw NotInFragment("channel " + x + " must be created with both capabilities");
    return std::pair{x, ty};
  };
  std::function<Process(detail::Tokens&)> make_new;
  make_new = [&](detail::Tokens& t) {
    auto [x, ty] = binder(t);
    Process body = detail::pi_prefix(t, make_new);
    return Process::make_new(x, kpt_translate_tuple(ty.payload), ty.omega ? Kind::Omega : Kind::Linear, body);
  };
  j.process = detail::pi_process(ts, make_new);
  ts.expect(detail::Tok::End);
  return j;
}

// The process is already core syntax: creations were translated on parsing.
inline Translation kpt_translate_judgement(const KptJudgement& j) {
  return {kpt_translate_context(j.context), j.process, Profile::kpt()};
}

// ---------------------------------------------------------------------------
// HYB: linear/affine types with replicated inputs and bound outputs.

struct HybType {
  bool output = true;  // (t..)? when true, (t..)! otherwise
  std::vector<HybType> payload;
};

struct HybProcess {
  enum class Tag : std::uint8_t { Nop, Par, Server, BoundOut };
  Tag tag = Tag::Nop;
  Name subject;
  NameList names;
  std::vector<HybProcess> parts;  // Par: two parts; prefixes: the continuation
};

struct HybJudgement {
  std::vector<std::pair<Name, HybType>> context;
  HybProcess process;
};

inline Behaviour hyb_translate_tuple(const std::vector<HybType>& ts);

inline Behaviour hyb_translate(const HybType& t) {
  Behaviour a = hyb_translate_tuple(t.payload);
  return t.output ? Behaviour::output(dual(a)) : Behaviour::input(a);
}

inline Behaviour with_exponent(const Behaviour& c, Exponent e) { return Behaviour::cap(c.polarity(), c.payload(), e); }

inline Behaviour hyb_translate_tuple(const std::vector<HybType>& ts) {
  std::vector<Behaviour> bs;
  for (auto& t : ts) {
    Behaviour c = hyb_translate(t);
    bs.push_back(Behaviour::par(with_exponent(c, Exponent::Bang), with_exponent(dual(c), Exponent::Quest)));
  }
  return detail::tensor_of(bs);
}

inline Formula hyb_translate_assignment(const Name& x, const HybType& t) {
  Behaviour c = hyb_translate(t);
  if (t.output) return annotate({x}, with_exponent(c, Exponent::Bang));
  return Formula::par(annotate({x}, with_exponent(dual(c), Exponent::Bang)),
                      annotate({x}, with_exponent(c, Exponent::Quest)));
}

inline Formula hyb_translate_context(const std::vector<std::pair<Name, HybType>>& ctx) {
  std::vector<Formula> fs;
  for (auto& [x, t] : ctx) fs.push_back(hyb_translate_assignment(x, t));
  return detail::environment_of(fs);
}

namespace detail {

inline HybType hyb_type(Tokens& ts) {
  HybType t;
  if (ts.accept(Tok::Quest)) {
    t.output = true;
  } else if (ts.accept(Tok::Bang)) {
    t.output = false;
  } else {
    ts.fail({"'?'", "'!'"});
  }
  ts.expect(Tok::LParen);
  t.payload = comma_list<HybType>(ts, Tok::RParen, hyb_type);
  ts.expect(Tok::RParen);
  return t;
}

inline std::pair<Name, HybType> hyb_entry(Tokens& ts) {
  Name x = ts.name();
  ts.expect(Tok::Colon);
  return {x, hyb_type(ts)};
}

inline HybProcess hyb_process(Tokens& ts);

inline HybProcess hyb_prefix(Tokens& ts) {
  HybProcess p;
  if (ts.accept(Tok::Zero)) return p;
  if (ts.accept(Tok::LParen)) {
    p = hyb_process(ts);
    ts.expect(Tok::RParen);
    return p;
  }
  if (ts.accept(Tok::Star)) {
    p.tag = HybProcess::Tag::Server;
    p.subject = ts.name();
    ts.expect(Tok::LParen);
    p.names = name_list(ts, Tok::RParen);
    ts.expect(Tok::RParen);
    ts.expect(Tok::Dot);
    p.parts.push_back(hyb_prefix(ts));
    return p;
  }
  p.tag = HybProcess::Tag::BoundOut;
  p.subject = ts.name();
  if (!ts.at(Tok::LBrack)) throw NotInShape("only replicated inputs and bound outputs are in the translated shape");
  ts.advance();
  p.names = name_list(ts, Tok::RBrack);
  ts.expect(Tok::RBrack);
  p.parts.push_back(ts.accept(Tok::Dot) ? hyb_prefix(ts) : HybProcess{});
  return p;
}

inline HybProcess hyb_process(Tokens& ts) {
  HybProcess p = hyb_prefix(ts);
  while (ts.accept(Tok::Bar)) {
    HybProcess q;
    q.tag = HybProcess::Tag::Par;
    q.parts = {p, hyb_prefix(ts)};
    p = q;
  }
  return p;
}

inline void hyb_names(const HybProcess& p, std::set<Name>& out) {
  if (!p.subject.empty()) out.insert(p.subject);
  out.insert(p.names.begin(), p.names.end());
  for (auto& q : p.parts) hyb_names(q, out);
}

struct HybTranslator {
  FreshNames fresh;
  // names bound by a server: the input end of the received pair
  std::map<Name, Name> input_end;

  Process run(const HybProcess& p, const std::map<Name, HybType>& types) {
    using T = HybProcess::Tag;
    switch (p.tag) {
      case T::Nop:
        return Process::nop();
      case T::Par:
        return Process::par(run(p.parts[0], types), run(p.parts[1], types));
      case T::Server: {
        // the input end of a ?-typed name serves the dual tuple, whose
        // pairs list the input end first
        const HybType& t = type_of(types, p.subject);
        check_arity(t, p);
        std::map<Name, HybType> inner = types;
        NameList xs;
        auto saved = input_end;
        for (std::size_t i = 0; i < p.names.size(); ++i) {
          const Name& y = p.names[i];
          Name y2 = fresh.next(y);
          if (t.output) {
            xs.push_back(y2);
            xs.push_back(y);
          } else {
            xs.push_back(y);
            xs.push_back(y2);
          }
          HybType ty = t.payload[i];
          if (t.output) ty.output = !ty.output;
          inner[y] = ty;
          input_end[y] = y2;
        }
        Name subject = end_for_input(p.subject);
        Process body = run(p.parts[0], inner);
        input_end = saved;
        return Process::rep_input(subject, xs, body);
      }
      case T::BoundOut: {
        const HybType& t = type_of(types, p.subject);
        check_arity(t, p);
        std::map<Name, HybType> inner = types;
        NameList vs;
        std::vector<Behaviour> created;
        for (std::size_t i = 0; i < p.names.size(); ++i) {
          Behaviour c = hyb_translate(t.payload[i]);
          if (c.polarity() != Polarity::Output) {
            throw NotInShape("bound output of " + p.names[i] + " at an input type");
          }
          vs.push_back(p.names[i]);
          vs.push_back(p.names[i]);
          created.push_back(c.payload());
          // the sender keeps the opposite side of what it sends
          HybType kept = t.payload[i];
          kept.output = !kept.output;
          inner[p.names[i]] = kept;
        }
        auto saved = input_end;
        for (auto& y : p.names) input_end.erase(y);
        Process body = Process::par(Process::output(p.subject, vs), run(p.parts[0], inner));
        input_end = saved;
        for (std::size_t i = p.names.size(); i-- > 0;) body = Process::make_new(p.names[i], created[i], Kind::Omega, body);
        return body;
      }
    }
    return Process::nop();
  }

  static const HybType& type_of(const std::map<Name, HybType>& types, const Name& x) {
    auto it = types.find(x);
    if (it == types.end()) throw NotInShape("no type for name " + x);
    return it->second;
  }
  static void check_arity(const HybType& t, const HybProcess& p) {
    if (t.payload.size() != p.names.size()) {
      throw ArityMismatch("prefix on " + p.subject + " with " + std::to_string(p.names.size()) +
                          " names for a type of arity " + std::to_string(t.payload.size()));
    }
  }
  Name end_for_input(const Name& x) const {
    auto it = input_end.find(x);
    return it == input_end.end() ? x : it->second;
  }
};

}  // namespace detail

inline HybJudgement parse_hyb(std::string_view text, const std::string& file = "") {
  detail::Tokens ts(text, file);
  HybJudgement j;
  ts.expect(detail::Tok::Given);
  j.context = detail::comma_list<std::pair<Name, HybType>>(ts, detail::Tok::Turnstile, detail::hyb_entry);
  ts.expect(detail::Tok::Turnstile);
  j.process = detail::hyb_process(ts);
  ts.expect(detail::Tok::End);
  return j;
}

// Every communicated name is doubled: a server receives y and y′ (its input
// end, used by replicated inputs on y in the body) and a bound output sends
// y twice.
inline Process hyb_translate_process(const HybProcess& p, const std::vector<std::pair<Name, HybType>>& ctx) {
  std::set<Name> used;
  detail::hyb_names(p, used);
  for (auto& [x, t] : ctx) used.insert(x);
  detail::HybTranslator tr{FreshNames(used), {}};
  std::map<Name, HybType> types(ctx.begin(), ctx.end());
  return tr.run(p, types);
}

inline Translation hyb_translate_judgement(const HybJudgement& j) {
  return {hyb_translate_context(j.context), hyb_translate_process(j.process, j.context), Profile::hyb()};
}

// ---------------------------------------------------------------------------
// DCPT: session types read as linear logic formulas without atoms.

struct SessionFormula {
  enum class Tag : std::uint8_t { One, Bot, Tensor, Par, Bang, Quest };
  Tag tag = Tag::One;
  std::vector<SessionFormula> args;

  static SessionFormula unit(Tag t) { return {t, {}}; }
  static SessionFormula binary(Tag t, SessionFormula a, SessionFormula b) { return {t, {std::move(a), std::move(b)}}; }
  static SessionFormula unary(Tag t, SessionFormula a) { return {t, {std::move(a)}}; }

  friend bool operator==(const SessionFormula& a, const SessionFormula& b) {
    return a.tag == b.tag && a.args == b.args;
  }
};

inline SessionFormula session_dual(const SessionFormula& s) {
  using T = SessionFormula::Tag;
  switch (s.tag) {
    case T::One: return SessionFormula::unit(T::Bot);
    case T::Bot: return SessionFormula::unit(T::One);
    case T::Tensor: return SessionFormula::binary(T::Par, session_dual(s.args[0]), session_dual(s.args[1]));
    case T::Par: return SessionFormula::binary(T::Tensor, session_dual(s.args[0]), session_dual(s.args[1]));
    case T::Bang: return SessionFormula::unary(T::Quest, session_dual(s.args[0]));
    case T::Quest: return SessionFormula::unary(T::Bang, session_dual(s.args[0]));
  }
  return s;
}

inline std::string print_session(const SessionFormula& s) {
  using T = SessionFormula::Tag;
  auto wrap = [](const SessionFormula& a) {
    std::string t = print_session(a);
    return a.tag == T::Tensor || a.tag == T::Par ? "(" + t + ")" : t;
  };
  switch (s.tag) {
    case T::One: return "1";
    case T::Bot: return "bot";
    case T::Tensor: return wrap(s.args[0]) + " (*) " + wrap(s.args[1]);
    case T::Par: return wrap(s.args[0]) + " (%) " + wrap(s.args[1]);
    case T::Bang: return "!" + wrap(s.args[0]);
    case T::Quest: return "?" + wrap(s.args[0]);
  }
  return "?";
}

inline Behaviour dcpt_translate(const SessionFormula& s) {
  using T = SessionFormula::Tag;
  switch (s.tag) {
    case T::One: return Behaviour::output(Behaviour::bot());
    case T::Bot: return Behaviour::input(Behaviour::bot());
    case T::Tensor:
      return Behaviour::output(
          Behaviour::par(dcpt_translate(session_dual(s.args[0])), dcpt_translate(session_dual(s.args[1]))));
    case T::Par: return Behaviour::input(Behaviour::par(dcpt_translate(s.args[0]), dcpt_translate(s.args[1])));
    case T::Bang: return Behaviour::output(with_exponent(dcpt_translate(s.args[0]), Exponent::Quest));
    case T::Quest: return Behaviour::input(with_exponent(dcpt_translate(s.args[0]), Exponent::Quest));
  }
  return Behaviour::one();
}

inline Formula dcpt_translate_context(const std::vector<std::pair<Name, SessionFormula>>& ctx) {
  std::vector<Formula> fs;
  for (auto& [x, s] : ctx) fs.push_back(annotate({x}, dcpt_translate(s)));
  return detail::environment_of(fs);
}

struct DcptJudgement {
  std::vector<std::pair<Name, SessionFormula>> context;
  Process process;  // synchronous source; news carry the session type in `session_types`
  Name provided;
  SessionFormula type;
  std::map<Name, SessionFormula> session_types;  // by binder name
};

namespace detail {

inline SessionFormula session_formula(Tokens& ts);

inline SessionFormula session_atom(Tokens& ts) {
  using T = SessionFormula::Tag;
  if (ts.accept(Tok::One)) return SessionFormula::unit(T::One);
  if (ts.accept(Tok::Bot)) return SessionFormula::unit(T::Bot);
  if (ts.accept(Tok::Bang)) return SessionFormula::unary(T::Bang, session_atom(ts));
  if (ts.accept(Tok::Quest)) return SessionFormula::unary(T::Quest, session_atom(ts));
  if (ts.accept(Tok::LParen)) {
    SessionFormula s = session_formula(ts);
    ts.expect(Tok::RParen);
    return s;
  }
  ts.fail({"'1'", "'bot'", "'!'", "'?'", "'('"});
}

inline SessionFormula session_tensor(Tokens& ts) {
  SessionFormula s = session_atom(ts);
  while (ts.accept(Tok::TensorOp)) s = SessionFormula::binary(SessionFormula::Tag::Tensor, s, session_atom(ts));
  return s;
}

inline SessionFormula session_formula(Tokens& ts) {
  SessionFormula s = session_tensor(ts);
  while (ts.accept(Tok::ParOp)) s = SessionFormula::binary(SessionFormula::Tag::Par, s, session_tensor(ts));
  return s;
}

inline std::pair<Name, SessionFormula> session_entry(Tokens& ts) {
  Name x = ts.name();
  ts.expect(Tok::Colon);
  return {x, session_formula(ts)};
}

inline bool session_outputs(const SessionFormula& s) {
  using T = SessionFormula::Tag;
  return s.tag == T::One || s.tag == T::Tensor || s.tag == T::Bang;
}

// Each name is known at one or both of its session types; a prefix picks
// the one whose translation has the prefix's polarity.
struct DcptTranslator {
  FreshNames fresh;
  const std::map<Name, SessionFormula>& binders;

  using Types = std::map<Name, std::vector<SessionFormula>>;

  static const SessionFormula* pick(const Types& types, const Name& u, bool output) {
    auto it = types.find(u);
    if (it == types.end()) return nullptr;
    for (auto& s : it->second) {
      if (session_outputs(s) == output) return &s;
    }
    return nullptr;
  }

  // Session types of the payload positions and of the continuation.
  static std::pair<std::optional<SessionFormula>, std::optional<SessionFormula>> split(const SessionFormula& s) {
    using T = SessionFormula::Tag;
    switch (s.tag) {
      case T::Tensor: return {session_dual(s.args[0]), s.args[1]};
      case T::Par: return {s.args[0], s.args[1]};
      case T::Bang:
      case T::Quest: return {s.args[0], std::nullopt};
      default: return {std::nullopt, std::nullopt};
    }
  }

  Process run(const Process& p, const Types& types) {
    using PT = Process::Tag;
    switch (p.tag()) {
      case PT::Nop:
        return p;
      case PT::Par:
        return Process::par(run(p.left(), types), run(p.right(), types));
      case PT::New: {
        auto it = binders.find(p.binder());
        if (it == binders.end()) throw NotInShape("creation of " + p.binder() + " without a session type");
        Types inner = types;
        inner[p.binder()] = {it->second, session_dual(it->second)};
        return Process::make_new(p.binder(), p.payload(), Kind::Linear, run(p.body(), inner));
      }
      case PT::RepIn:
      case PT::In:
      case PT::Out:
        return prefix(p, types);
    }
    return p;
  }

  Process prefix(const Process& p, const Types& types) {
    using PT = Process::Tag;
    if (p.names().size() > 1) throw NotMonadic("prefix on " + p.subject() + " carries several names");
    bool output = p.is(PT::Out);
    const SessionFormula* s = pick(types, p.subject(), output);
    if (!s) {
      throw NotInShape(std::string(output ? "output" : "input") + " on " + p.subject() +
                       " does not match its session type");
    }
    auto [arg, cont] = split(*s);
    if (p.names().size() != (arg ? 1u : 0u)) {
      throw ArityMismatch("prefix on " + p.subject() + " does not match the arity of " + print_session(*s));
    }
    Types inner = types;
    if (!output && arg) inner[p.names()[0]] = {*arg};
    if (!cont) {
      if (p.is(PT::RepIn)) return Process::rep_input(p.subject(), p.names(), run(p.body(), inner));
      if (output) return Process::par(Process::output(p.subject(), p.names()), run(p.body(), inner));
      return Process::input(p.subject(), p.names(), run(p.body(), inner));
    }
    if (p.is(PT::RepIn)) throw NotInShape("replicated input on " + p.subject() + " in the middle of a session");
    Name next = fresh.next(p.subject());
    inner.erase(p.subject());
    inner[next] = {*cont};
    Process body = run(substitute(p.body(), NameMap{{p.subject(), next}}), inner);
    NameList names = p.names();
    names.push_back(next);
    if (!output) return Process::input(p.subject(), names, body);
    Behaviour kept = dcpt_translate(*cont);
    return Process::make_new(next, kept.payload(), Kind::Linear,
                             Process::par(Process::output(p.subject(), names), body));
  }
};

}  // namespace detail

inline DcptJudgement parse_dcpt(std::string_view text, const std::string& file = "") {
  detail::Tokens ts(text, file);
  DcptJudgement j;
  ts.expect(detail::Tok::Given);
  j.context = detail::comma_list<std::pair<Name, SessionFormula>>(ts, detail::Tok::Turnstile, detail::session_entry);
  ts.expect(detail::Tok::Turnstile);
  std::function<Process(detail::Tokens&)> make_new;
  make_new = [&](detail::Tokens& t) {
    t.expect(detail::Tok::New);
    Name x = t.name();
    t.expect(detail::Tok::Colon);
    SessionFormula s = detail::session_formula(t);
    t.expect(detail::Tok::Dot);
    j.session_types[x] = s;
    Process body = detail::pi_prefix(t, make_new);
    return Process::make_new(x, dcpt_translate(s).payload(), Kind::Linear, body);
  };
  j.process = detail::pi_process(ts, make_new);
  ts.expect(detail::Tok::Colon);
  ts.expect(detail::Tok::Colon);
  j.provided = ts.name();
  ts.expect(detail::Tok::Colon);
  j.type = detail::session_formula(ts);
  ts.expect(detail::Tok::End);
  return j;
}

// Each prefix is followed by a fresh continuation name standing for the
// next state of its subject.
inline Process dcpt_async_translate(const DcptJudgement& j) {
  std::set<Name> used = all_names(j.process);
  for (auto& [x, s] : j.context) used.insert(x);
  used.insert(j.provided);
  detail::DcptTranslator tr{FreshNames(used), j.session_types};
  detail::DcptTranslator::Types types;
  for (auto& [x, s] : j.context) types[x] = {s};
  types[j.provided] = {session_dual(j.type)};
  return tr.run(j.process, types);
}

inline Translation dcpt_translate_judgement(const DcptJudgement& j) {
  auto ctx = j.context;
  ctx.emplace_back(j.provided, session_dual(j.type));
  return {dcpt_translate_context(ctx), dcpt_async_translate(j), Profile::core()};
}

enum class SourceSystem : std::uint8_t { Kpt, Hyb, Dcpt };

inline std::optional<SourceSystem> source_from_name(std::string_view s) {
  if (s == "kpt") return SourceSystem::Kpt;
  if (s == "hyb") return SourceSystem::Hyb;
  if (s == "dcpt") return SourceSystem::Dcpt;
  return std::nullopt;
}

inline Translation translate_source(SourceSystem from, std::string_view text, const std::string& file = "") {
  switch (from) {
    case SourceSystem::Kpt: return kpt_translate_judgement(parse_kpt(text, file));
    case SourceSystem::Hyb: return hyb_translate_judgement(parse_hyb(text, file));
    case SourceSystem::Dcpt: return dcpt_translate_judgement(parse_dcpt(text, file));
  }
  throw Error("unknown source system");
}

}  // namespace pict
