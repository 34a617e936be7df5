#include <gtest/gtest.h>

#include "pict/serialize.hpp"
#include "pict/surface.hpp"

using namespace pict;

namespace {

Derivation typed(const char* s) {
  Judgement j = parse_judgement(s);
  auto c = check(j.env, j.process);
  if (!c.typed()) throw Error(std::string("fixture not typed: ") + s);
  return c.derivation;
}

bool same(const Derivation& a, const Derivation& b) {
  return print_derivation(a) == print_derivation(b);
}

}  // namespace

TEST(Json, DerivationRoundTrip) {
  for (const char* s : {"given |- 0", "given v : in bot, w : out bot |- v().w<>",
                        "given v : in bot |- new[1] u : in bot . (u<v> | u(x).x().0)",
                        "given |- new[w] u : bot . (*u().0 | u<> | u<>)"}) {
    Derivation d = typed(s);
    Derivation back = parse_derivation(print_derivation(d));
    EXPECT_TRUE(same(d, back)) << s;
    EXPECT_FALSE(check_derivation(back, Profile::core())) << s;
  }
}

TEST(Json, DerivedNodesKeepTypeAndNames) {
  Behaviour in_bot = Behaviour::input(Behaviour::bot());
  Process proc = new_cascade({"x"}, in_bot, Process::output("u", {"x"}, Process::output("x", {})));
  Formula pre = Formula::tensor(out_literal("x", Behaviour::bot()), Formula::bot());
  Derivation p = make_derivation(DRule::OutAsync, pre, Process::output("x", {}));
  Derivation d = make_derivation(DRule::OutBound, Formula::tensor(out_literal("u", in_bot), Formula::bot()), proc, {p},
                                 nullptr, in_bot, {"x"});
  Json j = derivation_to_json(d);
  EXPECT_EQ(j["type"], "in bot");
  EXPECT_EQ(j["names"], Json::array({"x"}));
  Derivation back = derivation_from_json(j);
  EXPECT_EQ(back->type, d->type);
  EXPECT_EQ(back->names, d->names);
}

TEST(Json, ProofRoundTrip) {
  Proof p = eta_axiom(parse_formula("! (a (*) b) (%) ? c"));
  Proof back = proof_from_json(proof_to_json(p));
  EXPECT_EQ(proof_to_json(back), proof_to_json(p));
  EXPECT_FALSE(check_proof(back, Profile::core()));
}

TEST(Json, VersionIsChecked) {
  Json j = derivation_to_json(typed("given |- 0"));
  EXPECT_EQ(j["version"], kDerivationVersion);
  j["version"] = kDerivationVersion + 1;
  EXPECT_THROW(derivation_from_json(j), SchemaError);
  j.erase("version");
  EXPECT_THROW(derivation_from_json(j), SchemaError);
}

TEST(Json, SchemaErrors) {
  EXPECT_THROW(parse_derivation("{"), SchemaError);
  EXPECT_THROW(parse_derivation(R"({"version": 1})"), SchemaError);
  EXPECT_THROW(parse_derivation(R"({"version": 1, "rule": "teleport", "conclusion": {"env": "bot", "process": "0"}})"),
               SchemaError);
  EXPECT_THROW(parse_derivation(R"({"version": 1, "rule": "nop", "conclusion": {"env": 3, "process": "0"}})"),
               SchemaError);
  EXPECT_THROW(proof_from_json(Json::parse(R"({"rule": "ax", "conclusion": [1, 2]})")), SchemaError);
  EXPECT_THROW(proof_from_json(Json::parse(R"({"rule": "ax", "conclusion": ["a"], "principal": [-1]})")),
               SchemaError);
}

TEST(Json, BadSyntaxInsideIsAParseError) {
  EXPECT_THROW(parse_derivation(R"({"version": 1, "rule": "nop", "conclusion": {"env": "bot", "process": "u<"}})"),
               ParseError);
}

TEST(Json, StructureIsNotSoundness) {
  Json j = derivation_to_json(typed("given v : in bot |- v().0"));
  j["conclusion"]["env"] = "bot";
  Derivation d = derivation_from_json(j);
  EXPECT_TRUE(check_derivation(d, Profile::core()));
}

TEST(Json, Traces) {
  Process p = parse_process("new[1] u : in bot . (u<v> | u(x).x().0)");
  Json t = trace_to_json(trace_leftmost(p, 10));
  EXPECT_EQ(t["steps"].size(), 1u);
  EXPECT_EQ(t["steps"][0]["label"], "tau");
  EXPECT_TRUE(t["exhausted"].get<bool>());
  Json tree = trace_tree_to_json(trace_all(p, 10));
  EXPECT_EQ(tree["children"].size(), 1u);
}
