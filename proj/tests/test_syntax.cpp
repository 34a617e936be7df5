#include <gtest/gtest.h>

#include "pict/surface.hpp"

using namespace pict;

namespace {

Behaviour in_bot() { return Behaviour::input(Behaviour::bot()); }

}  // namespace

TEST(Behaviour, DualSwapsPolarityAndConnectives) {
  Behaviour a = Behaviour::tensor(in_bot(), Behaviour::cap(Polarity::Output, Behaviour::one(), Exponent::Bang));
  Behaviour d = dual(a);
  ASSERT_EQ(d.tag(), Behaviour::Tag::Par);
  EXPECT_EQ(d.left().polarity(), Polarity::Output);
  EXPECT_EQ(d.right().polarity(), Polarity::Input);
  EXPECT_EQ(d.right().exponent(), Exponent::Quest);
  EXPECT_EQ(dual(d), a);
  EXPECT_EQ(dual(Behaviour::one()), Behaviour::bot());
}

TEST(Behaviour, PayloadIsNotDualised) {
  Behaviour a = Behaviour::input(Behaviour::output(Behaviour::one()));
  EXPECT_EQ(dual(a).payload(), a.payload());
}

TEST(Behaviour, ArityCountsLeaves) {
  Behaviour a = Behaviour::par(in_bot(), Behaviour::tensor(in_bot(), Behaviour::one()));
  EXPECT_EQ(a.arity(), 2u);
  EXPECT_EQ(leaves(a).size(), 2u);
  EXPECT_EQ(Behaviour::bot().arity(), 0u);
}

TEST(Formula, NegationIsInvolutive) {
  Formula f = Formula::tensor(Formula::of_course(Formula::prop("a")), Formula::par(Formula::one(), Formula::prop("b")));
  Formula n = negate(f);
  EXPECT_EQ(n.tag(), Formula::Tag::Par);
  EXPECT_EQ(n.left().tag(), Formula::Tag::WhyNot);
  EXPECT_EQ(negate(n), f);
  EXPECT_EQ(negate(Formula::one()), Formula::bot());
}

TEST(Formula, StructuralEqualityAndHash) {
  Formula a = Formula::par(Formula::prop("a"), Formula::bot());
  Formula b = Formula::par(Formula::prop("a"), Formula::bot());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, Formula::par(Formula::bot(), Formula::prop("a")));
  EXPECT_EQ(a.size(), 3u);
}

TEST(Annotate, FollowsBehaviourShape) {
  Behaviour a = Behaviour::tensor(in_bot(), Behaviour::cap(Polarity::Output, Behaviour::one(), Exponent::Quest));
  Formula f = annotate({"x", "y"}, a);
  ASSERT_EQ(f.tag(), Formula::Tag::Tensor);
  EXPECT_EQ(f.left().atom().name, "x");
  EXPECT_EQ(f.right().tag(), Formula::Tag::WhyNot);
  EXPECT_EQ(f.right().body().atom().name, "y");
  EXPECT_EQ(erase_names(f), a);
}

TEST(Annotate, ArityMismatchThrows) {
  EXPECT_THROW(annotate({"x"}, Behaviour::tensor(in_bot(), in_bot())), ArityMismatch);
  EXPECT_EQ(annotate({}, Behaviour::bot()), Formula::bot());
}

TEST(Environment, RejectsNegativeLiterals) {
  Formula x = annotate({"x"}, in_bot());
  EXPECT_TRUE(is_environment_type(Formula::tensor(x, Formula::bot())));
  EXPECT_FALSE(is_environment_type(negate(x)));
}

TEST(Process, InputBindersMustBeDistinct) {
  EXPECT_THROW(Process::input("u", {"x", "x"}, Process::nop()), Error);
  EXPECT_NO_THROW(Process::output("u", {"x", "x"}));
}

TEST(Process, FreeNames) {
  Process p = parse_process("new[1] u : in bot . (u<v> | u(x).x().w<>)");
  EXPECT_EQ(free_names(p), (std::set<Name>{"v", "w"}));
  EXPECT_TRUE(all_names(p).count("x"));
}

TEST(Process, SubstitutionAvoidsCapture) {
  Process p = parse_process("u(x).x<y>");
  Process q = substitute(p, {{"y", "x"}});
  ASSERT_EQ(q.tag(), Process::Tag::In);
  EXPECT_NE(q.names()[0], "x");
  EXPECT_EQ(q.body().names()[0], "x");
  EXPECT_EQ(free_names(q), (std::set<Name>{"u", "x"}));
}

TEST(Process, SubstitutionLeavesBoundNames) {
  Process p = parse_process("u(x).x<> | x<>");
  Process q = substitute(p, {"x"}, {"z"});
  EXPECT_EQ(print_process(q), "u(x).x<> | z<>");
}

TEST(Process, AlphaEquality) {
  EXPECT_TRUE(alpha_equal(parse_process("u(x).x<>"), parse_process("u(y).y<>")));
  EXPECT_FALSE(alpha_equal(parse_process("u(x).x<>"), parse_process("u(y).x<>")));
  EXPECT_TRUE(alpha_equal(parse_process("new[1] a : bot . a<>"), parse_process("new[1] b : bot . b<>")));
}

TEST(FreshNames, SkipsReserved) {
  FreshNames f({"x_1"});
  EXPECT_EQ(f.next("x"), "x_2");
  EXPECT_EQ(f.next("x_2"), "x_3");
}
