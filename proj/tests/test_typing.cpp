#include <gtest/gtest.h>

#include "pict/examples.hpp"
#include "pict/surface.hpp"

using namespace pict;
using S = CheckOutcome::Status;

namespace {

CheckOutcome check_text(const char* s) {
  Judgement j = parse_judgement(s);
  return check(j.env, j.process);
}

}  // namespace

TEST(Check, Typed) {
  for (const char* s : {"given |- 0", "given v : in bot |- v().0", "given v : in bot, w : out bot |- v().w<>",
                        "given v : in bot, w : out bot |- v().0 | w<>", "given ! v : in bot |- *v().0",
                        "given u : out (in bot), v : in bot |- u<v>", "given u : in (in bot) |- u(x).x().0",
                        "given |- new[w] u : bot . (*u().0 | u<> | u<>)",
                        "given v : in bot |- new[1] u : in bot . (u<v> | u(x).x().0)"}) {
    auto c = check_text(s);
    ASSERT_EQ(c.status, S::Typed) << s;
    ASSERT_TRUE(c.derivation) << s;
    auto e = check_derivation(c.derivation, Profile::core());
    EXPECT_FALSE(e) << s << ": " << e->describe();
    EXPECT_EQ(c.derivation->env, parse_judgement(s).env);
    EXPECT_EQ(c.derivation->process, parse_judgement(s).process);
  }
}

TEST(Check, Untyped) {
  for (const char* s : {"given v : in bot |- v().0 | v().0", "given u : out (in bot), v : out bot |- u<v>",
                        "given v : in bot |- new[1] u : out bot . (u<v> | u(x).x<>)"}) {
    auto c = check_text(s);
    EXPECT_EQ(c.status, S::Untyped) << s;
    EXPECT_FALSE(c.obligations.empty()) << s;
  }
}

TEST(Check, MissingCapabilityIsAnError) {
  EXPECT_THROW(check_text("given v : in bot |- v<>"), Error);
  EXPECT_THROW(check_text("given v : out bot |- v().0"), Error);
}

TEST(Check, RejectsNonEnvironment) {
  EXPECT_THROW(check(parse_formula("~x : in bot"), Process::nop()), Error);
}

TEST(Check, ConflictingTypesForOneName) {
  EXPECT_THROW(NameTypes::from_environment(parse_formula("v : in bot (*) v : in 1")), UnknownFreeNameType);
}

TEST(Synthesize, ClosedProcess) {
  Process p = parse_process("new[1] u : in bot . (new[1] v : bot . (u<v> | u(x).x().0 | v<>))");
  auto s = synthesize(p, {});
  ASSERT_TRUE(s.typed());
  EXPECT_FALSE(check_derivation(s.derivation, Profile::core()));
  EXPECT_TRUE(check(s.env, p).typed());
}

TEST(Derivation, TamperedNodesAreRejected) {
  auto c = check_text("given v : in bot, w : out bot |- v().w<>");
  ASSERT_TRUE(c.typed());
  auto n = std::make_shared<DerivationNode>(*c.derivation->premises[0]);
  n->env = parse_formula("v : in bot");
  auto root = std::make_shared<DerivationNode>(*c.derivation);
  root->premises[0] = n;
  auto e = check_derivation(root, Profile::core());
  ASSERT_TRUE(e);

  auto swapped = std::make_shared<DerivationNode>(*c.derivation->premises[0]);
  swapped->rule = swapped->rule == DRule::In ? DRule::Out : DRule::In;
  EXPECT_TRUE(check_derivation(swapped, Profile::core()));
}

TEST(Derivation, SubNeedsValidProof) {
  auto c = check_text("given v : in bot |- v().0");
  ASSERT_TRUE(c.typed());
  ASSERT_EQ(c.derivation->rule, DRule::Sub);
  auto root = std::make_shared<DerivationNode>(*c.derivation);
  root->proof = axiom(parse_formula("a"));
  auto e = check_derivation(root, Profile::core());
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, DerivationError::Kind::BadSubProof);
}

TEST(Derived, ExpansionRemovesDerivedNodes) {
  Behaviour in_bot = Behaviour::input(Behaviour::bot());
  Formula env = Formula::tensor(out_literal("u", in_bot), annotate({"v"}, in_bot));
  Derivation d = make_derivation(DRule::OutAsync, env, Process::output("u", {"v"}));
  ASSERT_FALSE(check_derivation(d, Profile::core()));
  Derivation x = expand_derived(d);
  EXPECT_FALSE(has_derived_nodes(x));
  EXPECT_FALSE(check_derivation(x, Profile::core()));
  EXPECT_EQ(x->env, d->env);
  EXPECT_EQ(x->process, d->process);
}

TEST(Derived, NewCascadeShape) {
  Behaviour a = Behaviour::tensor(Behaviour::input(Behaviour::one()), Behaviour::input(Behaviour::one()));
  Process p = new_cascade({"y", "z"}, a, Process::nop());
  ASSERT_EQ(p.tag(), Process::Tag::New);
  EXPECT_EQ(p.binder(), "y");
  EXPECT_EQ(p.body().binder(), "z");
}

TEST(Examples, AllBehaveAsStated) {
  auto rs = run_paper_examples();
  EXPECT_EQ(rs.size(), 12u);
  for (auto& r : rs) EXPECT_TRUE(r.ok) << r.name << ": " << r.detail;
}

TEST(Names, DerivationRules) {
  for (int i = 0; i <= static_cast<int>(DRule::NewStar); ++i) {
    auto r = static_cast<DRule>(i);
    EXPECT_EQ(drule_from_name(drule_name(r)), r);
  }
  EXPECT_TRUE(is_derived(DRule::NewStar));
  EXPECT_FALSE(is_derived(DRule::NewLin));
}
