#include <gtest/gtest.h>

#include "pict/surface.hpp"
#include "pict/proof.hpp"

using namespace pict;

namespace {

Formula f(const char* s) { return parse_formula(s); }

bool ok(const Proof& p, const Profile& pr = Profile::core()) { return !check_proof(p, pr).has_value(); }

std::shared_ptr<ProofNode> copy(const Proof& p) { return std::make_shared<ProofNode>(*p); }

}  // namespace

TEST(Checker, EtaExpansionChecks) {
  for (const char* s : {"a", "a (*) ~b", "! (a (%) 1)", "? bot (*) b", "x : in bot (%) y : out 1"}) {
    Proof p = eta_axiom(f(s));
    EXPECT_TRUE(ok(p)) << s << ": " << check_proof(p, Profile::core())->describe();
    EXPECT_TRUE(same_multiset(p->conclusion, {negate(f(s)), f(s)}));
    EXPECT_TRUE(is_cut_free(p));
  }
}

TEST(Checker, AxiomNeedsDualPair) {
  auto n = copy(axiom(f("a")));
  n->conclusion = {f("a"), f("a")};
  EXPECT_FALSE(ok(n));
}

TEST(Checker, TensorSplitsContext) {
  Proof l = axiom(f("a"));
  Proof r = axiom(f("b"));
  Proof t = tensor_proof(l, f("a"), r, f("b"));
  EXPECT_TRUE(ok(t));
  auto bad = copy(t);
  bad->left = {};
  EXPECT_FALSE(ok(bad));
}

TEST(Checker, PromotionNeedsQuestContext) {
  Proof d = unary(Rule::Dereliction, axiom(f("a")), f("? ~a"));
  EXPECT_TRUE(ok(unary(Rule::Promotion, d, f("! a"))));
  EXPECT_FALSE(ok(unary(Rule::Promotion, axiom(f("a")), f("! a"))));
}

TEST(Checker, WeakeningAndContractionOnlyOnQuest) {
  Proof one = one_proof();
  EXPECT_TRUE(ok(unary(Rule::Weakening, one, f("? a"))));
  EXPECT_FALSE(ok(unary(Rule::Weakening, one, f("a"))));
  Proof w2 = unary(Rule::Weakening, unary(Rule::Weakening, one, f("? a")), f("? a"));
  EXPECT_TRUE(ok(unary(Rule::Contraction, w2, f("? a"))));
  Proof plain = tensor_proof(axiom(f("a")), f("a"), axiom(f("a")), f("a"));
  auto bad = copy(plain);
  bad->rule = Rule::Contraction;
  EXPECT_FALSE(ok(bad));
}

TEST(Checker, CutMatchesDualFormulas) {
  Proof c = cut_proof(axiom(f("a")), f("a"), axiom(f("~a")));
  EXPECT_TRUE(ok(c));
  EXPECT_FALSE(is_cut_free(c));
  auto bad = copy(c);
  bad->cut_formula = f("b");
  EXPECT_FALSE(ok(bad));
}

TEST(Checker, ProfileAxiomsNeedProfile) {
  Proof p = profile_axiom_proof(AxiomSchema::TensorToPar, f("a"), f("b"));
  EXPECT_FALSE(ok(p));
  EXPECT_TRUE(ok(p, Profile::hyb()));
  EXPECT_TRUE(ok(p, Profile::kpt()));
  EXPECT_TRUE(uses_profile_axioms(p));
  Proof q = profile_axiom_proof(AxiomSchema::BangToQuest, f("a"));
  EXPECT_FALSE(ok(q, Profile::hyb()));
  EXPECT_TRUE(ok(q, Profile::kpt()));
}

TEST(Checker, SchemaInstances) {
  auto [l, r] = schema_instance(AxiomSchema::OneToBot, f("a"), f("b"));
  EXPECT_EQ(l, Formula::one());
  EXPECT_EQ(r, Formula::bot());
  EXPECT_TRUE(matches_schema(AxiomSchema::ParToTensor, f("~(a (%) b)"), f("a (*) b")));
  EXPECT_FALSE(matches_schema(AxiomSchema::ParToTensor, f("~(a (%) b)"), f("b (*) a")));
}

TEST(Checker, ErrorPathPointsAtBadNode) {
  auto leaf = copy(axiom(f("a")));
  leaf->conclusion = {f("a"), f("b")};
  Proof t = tensor_proof(axiom(f("c")), f("c"), leaf, f("b"));
  auto e = check_proof(t, Profile::core());
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->path, (std::vector<std::size_t>{1}));
}

TEST(Names, RulesAndProfilesRoundTrip) {
  for (Rule r : {Rule::Axiom, Rule::Cut, Rule::Tensor, Rule::Par, Rule::One, Rule::Bot, Rule::Dereliction,
                 Rule::Weakening, Rule::Contraction, Rule::Promotion, Rule::ProfileAxiom}) {
    EXPECT_EQ(rule_from_name(rule_name(r)), r);
  }
  for (auto p : {ProfileName::Core, ProfileName::Kpt, ProfileName::Hyb}) EXPECT_EQ(profile_from_name(profile_name(p)), p);
  EXPECT_FALSE(profile_from_name("classical").has_value());
}
