#pragma once

// Small judgements and derivations from the calculus, each paired with the
// outcome it must have. Used by `pict selftest` and the acceptance run.

#include "pict/typing.hpp"

namespace pict {

struct ExampleResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace detail {

inline std::string checked(const Derivation& d, const Profile& profile) {
  if (auto e = check_derivation(d, profile)) return e->describe();
  return "";
}

// The derived node must check, and so must its expansion into core rules.
inline ExampleResult derived_example(std::string name, const Derivation& d) {
  ExampleResult r{std::move(name), false, ""};
  if (auto e = checked(d, Profile::core()); !e.empty()) {
    r.detail = "derived: " + e;
    return r;
  }
  Derivation x;
  try {
    x = expand_derived(d);
  } catch (const Error& e) {
    r.detail = std::string("expansion: ") + e.what();
    return r;
  }
  if (has_derived_nodes(x)) {
    r.detail = "expansion left derived nodes";
    return r;
  }
  if (auto e = checked(x, Profile::core()); !e.empty()) {
    r.detail = "expanded: " + e;
    return r;
  }
  if (x->env != d->env || x->process != d->process) {
    r.detail = "expansion changed the conclusion";
    return r;
  }
  auto c = check(d->env, d->process);
  r.ok = c.typed();
  r.detail = std::string("check: ") + status_name(c.status);
  return r;
}

inline ExampleResult expect_status(std::string name, const Formula& e, const Process& p,
                                   CheckOutcome::Status want) {
  auto c = check(e, p);
  return {std::move(name), c.status == want,
          print_judgement(e, p) + " : " + status_name(c.status) + ", expected " + status_name(want)};
}

// new* over `a`, with a body that uses both ends of each created name.
inline ExampleResult new_star_example(const std::string& label, const NameList& xs, const Behaviour& a,
                                      const Process& body, const Formula& e) {
  Formula premise = Formula::tensor(Formula::par(annotate(xs, a), annotate(xs, dual(a))), e);
  auto c = check(premise, body);
  if (!c.typed()) return {"new* at " + label, false, "premiss: " + std::string(status_name(c.status))};
  Process p = new_cascade(xs, a, body);
  Derivation d = make_derivation(DRule::NewStar, e, p, {c.derivation}, nullptr, a, xs);
  return derived_example("new* at " + label, d);
}

}  // namespace detail

inline std::vector<ExampleResult> run_paper_examples() {
  using S = CheckOutcome::Status;
  std::vector<ExampleResult> out;
  Behaviour in_bot = Behaviour::input(Behaviour::bot());
  Behaviour out_bot = Behaviour::output(Behaviour::bot());

  {
    Derivation d = make_derivation(DRule::Nop, Formula::bot(), Process::nop());
    auto e = detail::checked(d, Profile::core());
    ExampleResult r = detail::expect_status("nop", Formula::bot(), Process::nop(), S::Typed);
    if (!e.empty()) r = {"nop", false, e};
    out.push_back(r);
  }

  {
    // u:↑A ⊗ v:A ⊢ u<v> with A = ↓⊥
    Formula env = Formula::tensor(out_literal("u", in_bot), annotate({"v"}, in_bot));
    Derivation d = make_derivation(DRule::OutAsync, env, Process::output("u", {"v"}));
    out.push_back(detail::derived_example("out-async", d));
  }

  {
    // u:↑A ⊗ E ⊢ new x.u<x>.P from x:A̅ ⊗ E ⊢ P, with A = ↓⊥, E = ⊥, P = x<>
    Formula e = Formula::bot();
    Formula pre = Formula::tensor(out_literal("x", Behaviour::bot()), Formula::bot());
    Derivation p = make_derivation(DRule::OutAsync, pre, Process::output("x", {}));
    Process proc = new_cascade({"x"}, in_bot, Process::output("u", {"x"}, p->process));
    Derivation d = make_derivation(DRule::OutBound, Formula::tensor(out_literal("u", in_bot), e), proc, {p},
                                   nullptr, in_bot, {"x"});
    out.push_back(detail::derived_example("out-bound", d));
  }

  {
    Process use_x = Process::par(Process::output("x", {}), Process::input("x", {}, Process::nop()));
    out.push_back(detail::new_star_example("↓B", {"x"}, in_bot, use_x, Formula::bot()));
    out.push_back(detail::new_star_example("1", {}, Behaviour::one(), Process::nop(), Formula::bot()));
    out.push_back(detail::new_star_example("⊥", {}, Behaviour::bot(), Process::nop(), Formula::bot()));
    Process use_yz = Process::par(
        Process::par(Process::output("y", {}), Process::input("y", {}, Process::nop())),
        Process::par(Process::output("z", {}), Process::input("z", {}, Process::nop())));
    out.push_back(detail::new_star_example("B⅋C", {"y", "z"}, Behaviour::par(in_bot, in_bot), use_yz,
                                           Formula::bot()));
    Behaviour in_one = Behaviour::input(Behaviour::one());
    Process seq_yz = Process::par(Process::input("y", {}, Process::input("z", {}, Process::nop())),
                                  Process::par(Process::output("y", {}), Process::output("z", {})));
    out.push_back(detail::new_star_example("B⊗C", {"y", "z"}, Behaviour::tensor(in_one, in_one), seq_yz,
                                           Formula::bot()));
  }

  {
    // u<v>.0 | u(x).Q with v:A, x:B and A ≠ B types as a parallel; no new
    // rule closes u over it. With A = B the new goes through.
    Process send = Process::output("u", {"v"}, Process::nop());
    Process bad_recv = Process::input("u", {"x"}, Process::output("x", {}));
    Formula left = Formula::tensor(out_literal("u", in_bot), Formula::par(annotate({"v"}, in_bot), Formula::bot()));
    Formula right = Formula::tensor(in_literal("u", out_bot), Formula::bot());
    Process comp = Process::par(send, bad_recv);
    out.push_back(detail::expect_status("mismatched composition", Formula::par(left, right), comp, S::Typed));
    Formula rest = annotate({"v"}, in_bot);
    for (auto& [label, payload] : {std::pair{"A", in_bot}, std::pair{"B", out_bot}}) {
      Process closed = Process::make_new("u", payload, Kind::Linear, comp);
      auto c = check(rest, closed);
      out.push_back({std::string("mismatched composition under new at ") + label, !c.typed(),
                     print_judgement(rest, closed) + " : " + status_name(c.status)});
    }
    Process good_recv = Process::input("u", {"x"}, Process::input("x", {}, Process::nop()));
    Process matched = Process::make_new("u", in_bot, Kind::Linear, Process::par(send, good_recv));
    out.push_back(detail::expect_status("matched composition under new", rest, matched, S::Typed));
  }
  return out;
}

}  // namespace pict
