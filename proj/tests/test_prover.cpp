#include <gtest/gtest.h>

#include "oracle.hpp"
#include "pict/prover.hpp"
#include "pict/surface.hpp"

using namespace pict;

namespace {

ProveOutcome run(const char* s, const Profile& pr = Profile::core(), const Budget& b = {}) {
  return prove(parse_sequent(s), pr, b);
}

void expect_proved(const char* s, const Profile& pr = Profile::core()) {
  auto r = run(s, pr);
  ASSERT_TRUE(r.proved()) << s << " -> " << status_name(r.status) << " " << r.diagnostics;
  EXPECT_FALSE(check_proof(r.proof, pr).has_value()) << s;
  EXPECT_TRUE(same_multiset(r.proof->conclusion, parse_sequent(s))) << s;
}

}  // namespace

TEST(Prover, Mll) {
  expect_proved("|- ~a, a");
  expect_proved("|- ~a (%) ~b, a (*) b");
  expect_proved("|- 1");
  expect_proved("|- bot, 1");
  expect_proved("|- ~a (%) (~b (%) ~c), (a (*) b) (*) c");
  EXPECT_TRUE(run("|- a (*) ~a").refuted());
  EXPECT_TRUE(run("|- ~a, a, 1 (*) 1").refuted());
  EXPECT_TRUE(run("|- bot").refuted());
}

TEST(Prover, Exponentials) {
  expect_proved("|- ? ~a, ! a");
  expect_proved("|- ? ~a, ! a (*) ! a");
  expect_proved("|- ? a, 1");
  expect_proved("|- ? ~a (%) ? ~b, ! (a (*) b) (%) bot");
  EXPECT_FALSE(run("|- ? ~a (%) ? ~b, ! (a (*) b) (%) bot, 1 (*) 1").proved());
  expect_proved("|- ~(! a), ? a");
}

TEST(Prover, ProfileAxioms) {
  EXPECT_TRUE(run("|- ~(a (%) b), a (*) b").refuted());
  expect_proved("|- ~(a (%) b), a (*) b", Profile::hyb());
  expect_proved("|- ~1, bot", Profile::hyb());
  expect_proved("|- ~bot, 1", Profile::kpt());
  expect_proved("|- ~(? a), ! a", Profile::kpt());
  EXPECT_FALSE(run("|- ~(? a), ! a", Profile::hyb()).proved());
}

TEST(Prover, BudgetGivesUnknown) {
  Budget tiny;
  tiny.max_nodes = 2;
  auto r = run("|- ? ~a, ! a (*) ! a", Profile::core(), tiny);
  EXPECT_TRUE(r.unknown());
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Prover, Entails) {
  Formula x = parse_formula("x : in bot");
  EXPECT_TRUE(entails(Formula::tensor(x, Formula::one()), x).proved());
  EXPECT_TRUE(entails(x, Formula::tensor(x, Formula::one())).proved());
  EXPECT_TRUE(entails(x, Formula::tensor(x, x)).refuted());
}

TEST(Budget, Parsing) {
  Budget b = parse_budget("nodes=5,depth=3", {});
  EXPECT_EQ(b.max_nodes, 5u);
  EXPECT_EQ(b.max_depth, 3u);
  EXPECT_EQ(b.max_contractions, Budget{}.max_contractions);
  EXPECT_THROW(parse_budget("nodes", {}), Error);
  EXPECT_THROW(parse_budget("bogus=1", {}), Error);
  EXPECT_THROW(parse_budget("nodes=x", {}), Error);
}

TEST(Prover, AgreesWithOracleOnSmallSequents) {
  oracle::Enumerator en;
  oracle::Mll mll;
  std::size_t n = 0;
  for (std::size_t i = 0; i <= 3; ++i) {
    for (std::size_t j = i; i + j <= 4; ++j) {
      for (auto& a : en.of_size(i)) {
        for (auto& b : en.of_size(j)) {
          Sequent s{oracle::to_formula(a), oracle::to_formula(b)};
          auto r = prove(s);
          bool want = mll.provable({a, b});
          ASSERT_EQ(r.proved(), want) << print_sequent(s);
          ASSERT_EQ(r.refuted(), !want) << print_sequent(s);
          ++n;
        }
      }
    }
  }
  EXPECT_GT(n, 1000u);
}

TEST(Oracle, KnownCases) {
  oracle::Mll mll;
  EXPECT_TRUE(mll.provable({"a", "A"}));
  EXPECT_TRUE(mll.provable({"%AB", "*ab"}));
  EXPECT_FALSE(mll.provable({"*aA"}));
  EXPECT_FALSE(mll.provable({"0"}));
  EXPECT_TRUE(mll.provable({"0", "1"}));
  EXPECT_TRUE(mll.provable({"%01"}));
}
