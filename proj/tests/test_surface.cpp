#include <gtest/gtest.h>

#include "pict/surface.hpp"

using namespace pict;

TEST(Parse, ProcessRoundTrip) {
  for (const char* s : {"0", "u<v,w>", "u(x,y).x<y>", "*u(x).0", "u<>.v().0", "u<> | v<> | w<>",
                        "new[1] u : in bot . (u<v> | u(x).x().0)", "new[w] u : !out (1 (*) bot) . *u().0",
                        "u(x).(x<> | x().0)"}) {
    Process p = parse_process(s);
    EXPECT_EQ(print_process(p), s);
    EXPECT_EQ(parse_process(print_process(p)), p);
  }
}

TEST(Parse, ParallelIsLeftNested) {
  Process p = parse_process("a<> | b<> | c<>");
  ASSERT_EQ(p.tag(), Process::Tag::Par);
  EXPECT_EQ(p.right().subject(), "c");
}

TEST(Parse, FormulaPrecedence) {
  Formula f = parse_formula("a (*) b (%) c");
  EXPECT_EQ(f.tag(), Formula::Tag::Par);
  EXPECT_EQ(f.left().tag(), Formula::Tag::Tensor);
  Formula g = parse_formula("~(a (*) b)");
  EXPECT_EQ(g, negate(parse_formula("a (*) b")));
  EXPECT_EQ(parse_formula("! ? a").body().tag(), Formula::Tag::WhyNot);
}

TEST(Parse, FormulaRoundTrip) {
  for (const char* s : {"a (*) b (%) ~c", "! (a (%) bot)", "? ~a (*) 1", "x : in bot (*) y : out (1 (%) bot)"}) {
    Formula f = parse_formula(s);
    EXPECT_EQ(parse_formula(print_formula(f)), f) << s;
  }
}

TEST(Parse, Behaviour) {
  Behaviour b = parse_behaviour("in bot (*) ?out 1");
  EXPECT_EQ(b.tag(), Behaviour::Tag::Tensor);
  EXPECT_EQ(b.right().exponent(), Exponent::Quest);
  EXPECT_EQ(parse_behaviour(print_behaviour(b)), b);
}

TEST(Parse, JudgementContextIsTensor) {
  Judgement j = parse_judgement("given v : in bot, w : out 1 |- v().w<>");
  EXPECT_EQ(j.env.tag(), Formula::Tag::Tensor);
  EXPECT_EQ(parse_judgement(print_judgement(j.env, j.process)).env, j.env);
  EXPECT_EQ(parse_judgement("given |- 0").env, Formula::bot());
}

TEST(Parse, Sequents) {
  auto s = parse_sequent("|- ~a, a (*) b, 1");
  EXPECT_EQ(s.size(), 3u);
  auto split = parse_split_sequent("|- ~a ; a (*) b, ~b");
  EXPECT_EQ(split.gamma.size(), 1u);
  EXPECT_EQ(split.delta.size(), 2u);
}

TEST(Parse, ErrorsCarrySpans) {
  try {
    parse_process("u(x).x<", "f.pic");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().file, "f.pic");
    EXPECT_EQ(e.span().start, 7u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, Rejections) {
  EXPECT_THROW(parse_process("u(x,x).0"), ParseError);
  EXPECT_THROW(parse_process("u<> v<>"), ParseError);
  EXPECT_THROW(parse_formula("a (*)"), ParseError);
  EXPECT_THROW(parse_judgement("given x : bot |- 0"), Error);
  EXPECT_THROW(parse_behaviour("in"), ParseError);
}

TEST(Parse, CommentsAndWhitespace) {
  EXPECT_EQ(parse_process("  u<>   # trailing\n"), Process::output("u", {}));
}
