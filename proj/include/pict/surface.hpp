#pragma once

// Concrete ASCII syntax: lexing, parsing and printing.
//
//   capabilities   in A | out A          exponentials   !T | ?T
//   connectives    (*) tensor, (%) par   units          1 | bot
//   assignments    x : T | ! x : T | ? x : T           negation  ~F
//   processes      0 | u(x,y).P | *u(x).P | u<v,w>.P | u<v> | P | Q
//                  | new[1] x : A . P | new[w] x : A . P
//   sequents       |- F1, F2        judgements   given E1, E2 |- P

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pict/syntax.hpp"

namespace pict {

struct SourceSpan {
  std::string file;
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string message, std::set<std::string> expected = {})
      : Error(format(span, message, expected)), span_(std::move(span)), expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const SourceSpan& span, const std::string& message,
                            const std::set<std::string>& expected) {
    std::ostringstream os;
    if (!span.file.empty()) os << span.file << ":";
    os << span.start << "-" << span.end << ": " << message;
    if (!expected.empty()) {
      os << " (expected one of:";
      for (auto& e : expected) os << " " << e;
      os << ")";
    }
    return os.str();
  }

  SourceSpan span_;
  std::set<std::string> expected_;
};

struct Judgement {
  Formula env;
  Process process;
};

// Sequent split for interpolation: `|- G1, G2 ; D1, D2`.
struct SplitSequent {
  std::vector<Formula> gamma;
  std::vector<Formula> delta;
};

namespace detail {

enum class Tok {
  Ident, Zero, One, Bot, In, Out, New, Given,
  LParen, RParen, TensorOp, ParOp, Lt, Gt, LBrack, RBrack,
  Comma, Dot, Bar, Turnstile, Colon, Bang, Quest, Tilde, Star, Semi, End
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::One: return "'1'";
    case Tok::Bot: return "'bot'";
    case Tok::In: return "'in'";
    case Tok::Out: return "'out'";
    case Tok::New: return "'new'";
    case Tok::Given: return "'given'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::TensorOp: return "'(*)'";
    case Tok::ParOp: return "'(%)'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Bar: return "'|'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Colon: return "':'";
    case Tok::Bang: return "'!'";
    case Tok::Quest: return "'?'";
    case Tok::Tilde: return "'~'";
    case Tok::Star: return "'*'";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(std::string_view src, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back(Token{k, std::string(src.substr(i, len)), i, i + len});
    i += len;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (src.substr(i, 3) == "(*)") {
      push(Tok::TensorOp, 3);
      continue;
    }
    if (src.substr(i, 3) == "(%)") {
      push(Tok::ParOp, 3);
      continue;
    }
    if (src.substr(i, 2) == "|-") {
      push(Tok::Turnstile, 2);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = Tok::Ident;
      if (word == "bot") k = Tok::Bot;
      else if (word == "in") k = Tok::In;
      else if (word == "out") k = Tok::Out;
      else if (word == "new") k = Tok::New;
      else if (word == "given") k = Tok::Given;
      push(k, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string_view digits = src.substr(i, j - i);
      if (digits == "0") {
        push(Tok::Zero, 1);
      } else if (digits == "1") {
        push(Tok::One, 1);
      } else {
        throw ParseError({file, i, j}, "unexpected number '" + std::string(digits) + "'");
      }
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '|': push(Tok::Bar, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '!': push(Tok::Bang, 1); continue;
      case '?': push(Tok::Quest, 1); continue;
      case '~': push(Tok::Tilde, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      default:
        throw ParseError({file, i, i + 1}, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Token{Tok::End, "", src.size(), src.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, std::string file) : file_(std::move(file)), toks_(lex(src, file_)) {}

  Process process() {
    Process p = prefix_term();
    while (peek().kind == Tok::Bar) {
      advance();
      p = Process::par(p, prefix_term());
    }
    return p;
  }

  Behaviour behaviour() {
    Behaviour b = behaviour_tensor();
    while (peek().kind == Tok::ParOp) {
      advance();
      b = Behaviour::par(b, behaviour_tensor());
    }
    return b;
  }

  Formula formula() {
    Formula f = formula_tensor();
    while (peek().kind == Tok::ParOp) {
      advance();
      f = Formula::par(f, formula_tensor());
    }
    return f;
  }

  std::vector<Formula> sequent_body(bool stop_at_semi) {
    std::vector<Formula> out;
    if (peek().kind == Tok::End || (stop_at_semi && peek().kind == Tok::Semi)) return out;
    out.push_back(formula());
    while (peek().kind == Tok::Comma) {
      advance();
      out.push_back(formula());
    }
    return out;
  }

  std::vector<Formula> sequent() {
    expect(Tok::Turnstile);
    auto out = sequent_body(false);
    expect(Tok::End);
    return out;
  }

  SplitSequent split_sequent() {
    expect(Tok::Turnstile);
    SplitSequent s;
    s.gamma = sequent_body(true);
    expect(Tok::Semi);
    s.delta = sequent_body(false);
    expect(Tok::End);
    return s;
  }

  Judgement judgement() {
    expect(Tok::Given);
    std::vector<Formula> parts;
    if (peek().kind != Tok::Turnstile) {
      parts.push_back(env_formula());
      while (peek().kind == Tok::Comma) {
        advance();
        parts.push_back(env_formula());
      }
    }
    expect(Tok::Turnstile);
    Process p = process();
    expect(Tok::End);
    return Judgement{tensor_all(parts, Formula::bot()), p};
  }

  void finish() { expect(Tok::End); }
  const Token& peek() const { return toks_[pos_]; }

 private:
  Formula env_formula() {
    std::size_t start = peek().start;
    Formula f = formula();
    if (!is_environment_type(f)) {
      throw ParseError({file_, start, toks_[pos_ == 0 ? 0 : pos_ - 1].end},
                       "environment types admit only positive literals, with exponentials on literals only");
    }
    return f;
  }

  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::set<std::string> expected) {
    const Token& t = peek();
    std::string what = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError({file_, t.start, t.end}, "unexpected " + what, std::move(expected));
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) fail({tok_name(k)});
    return advance();
  }

  Name ident() { return expect(Tok::Ident).text; }

  NameList name_list(Tok close) {
    NameList out;
    if (peek().kind == close) return out;
    out.push_back(ident());
    while (peek().kind == Tok::Comma) {
      advance();
      out.push_back(ident());
    }
    return out;
  }

  Process prefix_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Zero:
        advance();
        return Process::nop();
      case Tok::LParen: {
        advance();
        Process p = process();
        expect(Tok::RParen);
        return p;
      }
      case Tok::Star: {
        advance();
        Name u = ident();
        expect(Tok::LParen);
        std::size_t s = peek().start;
        NameList xs = name_list(Tok::RParen);
        check_distinct(xs, s);
        expect(Tok::RParen);
        expect(Tok::Dot);
        return Process::rep_input(u, xs, prefix_term());
      }
      case Tok::New: {
        advance();
        expect(Tok::LBrack);
        Kind k;
        if (peek().kind == Tok::One) {
          k = Kind::Linear;
        } else if (peek().kind == Tok::Ident && peek().text == "w") {
          k = Kind::Omega;
        } else {
          fail({"'1'", "'w'"});
        }
        advance();
        expect(Tok::RBrack);
        Name x = ident();
        expect(Tok::Colon);
        Behaviour a = behaviour();
        expect(Tok::Dot);
        return Process::make_new(x, a, k, prefix_term());
      }
      case Tok::Ident: {
        Name u = ident();
        if (peek().kind == Tok::LParen) {
          advance();
          std::size_t s = peek().start;
          NameList xs = name_list(Tok::RParen);
          check_distinct(xs, s);
          expect(Tok::RParen);
          expect(Tok::Dot);
          return Process::input(u, xs, prefix_term());
        }
        if (peek().kind == Tok::Lt) {
          advance();
          NameList vs = name_list(Tok::Gt);
          expect(Tok::Gt);
          if (peek().kind == Tok::Dot) {
            advance();
            return Process::output(u, vs, prefix_term());
          }
          return Process::output(u, vs, Process::nop());
        }
        fail({"'('", "'<'"});
      }
      default:
        fail({"'0'", "'('", "'*'", "'new'", "identifier"});
    }
  }

  void check_distinct(const NameList& xs, std::size_t start) {
    std::set<Name> seen;
    for (auto& x : xs) {
      if (!seen.insert(x).second) {
        throw ParseError({file_, start, peek().end}, "input binders must be pairwise distinct ('" + x + "' repeated)");
      }
    }
  }

  Behaviour behaviour_tensor() {
    Behaviour b = behaviour_unary();
    while (peek().kind == Tok::TensorOp) {
      advance();
      b = Behaviour::tensor(b, behaviour_unary());
    }
    return b;
  }

  Behaviour capability(Exponent e) {
    if (peek().kind == Tok::In) {
      advance();
      return Behaviour::cap(Polarity::Input, behaviour_unary(), e);
    }
    if (peek().kind == Tok::Out) {
      advance();
      return Behaviour::cap(Polarity::Output, behaviour_unary(), e);
    }
    fail({"'in'", "'out'"});
  }

  Behaviour behaviour_unary() {
    switch (peek().kind) {
      case Tok::One:
        advance();
        return Behaviour::one();
      case Tok::Bot:
        advance();
        return Behaviour::bot();
      case Tok::LParen: {
        advance();
        Behaviour b = behaviour();
        expect(Tok::RParen);
        return b;
      }
      case Tok::In:
      case Tok::Out:
        return capability(Exponent::None);
      case Tok::Bang:
        advance();
        return capability(Exponent::Bang);
      case Tok::Quest:
        advance();
        return capability(Exponent::Quest);
      default:
        fail({"'1'", "'bot'", "'('", "'in'", "'out'", "'!'", "'?'"});
    }
  }

  Formula formula_tensor() {
    Formula f = formula_unary();
    while (peek().kind == Tok::TensorOp) {
      advance();
      f = Formula::tensor(f, formula_unary());
    }
    return f;
  }

  Formula formula_unary() {
    switch (peek().kind) {
      case Tok::One:
        advance();
        return Formula::one();
      case Tok::Bot:
        advance();
        return Formula::bot();
      case Tok::LParen: {
        advance();
        Formula f = formula();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Tilde:
        advance();
        return negate(formula_unary());
      case Tok::Bang:
        advance();
        return Formula::of_course(formula_unary());
      case Tok::Quest:
        advance();
        return Formula::why_not(formula_unary());
      case Tok::Ident: {
        Name x = ident();
        if (peek().kind != Tok::Colon) return Formula::prop(x);
        advance();
        Behaviour c = capability(Exponent::None);
        return Formula::assign(x, c.capability());
      }
      default:
        fail({"'1'", "'bot'", "'('", "'~'", "'!'", "'?'", "identifier"});
    }
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Process parse_process(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  Process out = p.process();
  p.finish();
  return out;
}

inline Behaviour parse_behaviour(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  Behaviour out = p.behaviour();
  p.finish();
  return out;
}

inline Formula parse_formula(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  Formula out = p.formula();
  p.finish();
  return out;
}

// Parses an environment type (positive literals only).
inline Formula parse_environment(std::string_view text, const std::string& file = "") {
  Formula f = parse_formula(text, file);
  if (!is_environment_type(f)) {
    throw ParseError({file, 0, text.size()}, "not an environment type");
  }
  return f;
}

inline std::vector<Formula> parse_sequent(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  return p.sequent();
}

inline SplitSequent parse_split_sequent(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  return p.split_sequent();
}

inline Judgement parse_judgement(std::string_view text, const std::string& file = "") {
  detail::Parser p(text, file);
  return p.judgement();
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_behaviour(std::ostream& os, const Behaviour& b, int level);

inline void print_capability_body(std::ostream& os, const Behaviour& b) {
  os << (b.polarity() == Polarity::Input ? "in " : "out ");
  print_behaviour(os, b.payload(), 2);
}

// level: 0 par, 1 tensor, 2 unary
inline void print_behaviour(std::ostream& os, const Behaviour& b, int level) {
  using T = Behaviour::Tag;
  switch (b.tag()) {
    case T::One:
      os << "1";
      return;
    case T::Bot:
      os << "bot";
      return;
    case T::Cap:
      if (b.exponent() == Exponent::Bang) os << "!";
      if (b.exponent() == Exponent::Quest) os << "?";
      print_capability_body(os, b);
      return;
    case T::Tensor:
    case T::Par: {
      int mine = b.tag() == T::Par ? 0 : 1;
      if (level > mine) os << "(";
      print_behaviour(os, b.left(), mine);
      os << (b.tag() == T::Par ? " (%) " : " (*) ");
      print_behaviour(os, b.right(), mine + 1);
      if (level > mine) os << ")";
      return;
    }
  }
}

inline void print_atom(std::ostream& os, const Atom& a) {
  os << a.name;
  if (a.cap) {
    os << " : ";
    print_capability_body(os, Behaviour::from_capability(*a.cap));
  }
}

inline void print_formula(std::ostream& os, const Formula& f, int level) {
  using T = Formula::Tag;
  switch (f.tag()) {
    case T::One:
      os << "1";
      return;
    case T::Bot:
      os << "bot";
      return;
    case T::Atom:
      print_atom(os, f.atom());
      return;
    case T::NegAtom:
      os << "~";
      print_atom(os, f.atom());
      return;
    case T::OfCourse:
    case T::WhyNot:
      os << (f.is(T::OfCourse) ? "! " : "? ");
      print_formula(os, f.body(), 2);
      return;
    case T::Tensor:
    case T::Par: {
      int mine = f.is(T::Par) ? 0 : 1;
      if (level > mine) os << "(";
      print_formula(os, f.left(), mine);
      os << (f.is(T::Par) ? " (%) " : " (*) ");
      print_formula(os, f.right(), mine + 1);
      if (level > mine) os << ")";
      return;
    }
  }
}

inline void print_names(std::ostream& os, const NameList& ns) {
  for (std::size_t i = 0; i < ns.size(); ++i) os << (i ? "," : "") << ns[i];
}

// level: 0 parallel, 1 prefix
inline void print_process(std::ostream& os, const Process& p, int level) {
  using T = Process::Tag;
  switch (p.tag()) {
    case T::Nop:
      os << "0";
      return;
    case T::Par:
      if (level > 0) os << "(";
      print_process(os, p.left(), 0);
      os << " | ";
      print_process(os, p.right(), 1);
      if (level > 0) os << ")";
      return;
    case T::In:
    case T::RepIn:
      if (p.is(T::RepIn)) os << "*";
      os << p.subject() << "(";
      print_names(os, p.names());
      os << ").";
      print_process(os, p.body(), 1);
      return;
    case T::Out:
      os << p.subject() << "<";
      print_names(os, p.names());
      os << ">";
      if (!p.body().is(T::Nop)) {
        os << ".";
        print_process(os, p.body(), 1);
      }
      return;
    case T::New:
      os << "new[" << (p.kind() == Kind::Linear ? "1" : "w") << "] " << p.binder() << " : ";
      print_behaviour(os, p.payload(), 0);
      os << " . ";
      print_process(os, p.body(), 1);
      return;
  }
}

}  // namespace detail

inline std::string print_behaviour(const Behaviour& b) {
  std::ostringstream os;
  detail::print_behaviour(os, b, 0);
  return os.str();
}

inline std::string print_formula(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f, 0);
  return os.str();
}

inline std::string print_process(const Process& p) {
  std::ostringstream os;
  detail::print_process(os, p, 0);
  return os.str();
}

inline std::string print_sequent(const std::vector<Formula>& fs) {
  std::string out = "|-";
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? ", " : " ") + print_formula(fs[i]);
  return out;
}

inline std::string print_judgement(const Formula& env, const Process& p) {
  return "given " + print_formula(env) + " |- " + print_process(p);
}

}  // namespace pict
