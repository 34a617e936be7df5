#pragma once

// Bounded proof search for MELL and its relaxed profiles.

#include <cstdlib>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "pict/proof.hpp"

namespace pict {

struct Budget {
  std::size_t max_depth = 64;
  std::size_t max_contractions = 2;
  std::size_t max_nodes = 200000;
};

// "depth=N,contractions=N,nodes=N" (any subset, any order) over `base`.
inline Budget parse_budget(std::string_view spec, Budget base) {
    std::size_t pos = 0;
    while (pos < spec.size()) {
      std::size_t end = spec.find(',', pos);
      if (end == std::string_view::npos) end = spec.size();
      std::string_view item = spec.substr(pos, end - pos);
      pos = end + 1;
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw Error("bad budget item '" + std::string(item) + "'");
      std::string key(item.substr(0, eq));
      std::string value(item.substr(eq + 1));
      char* stop = nullptr;
      unsigned long long v = std::strtoull(value.c_str(), &stop, 10);
      if (value.empty() || *stop != '\0') throw Error("bad budget value '" + value + "'");
      if (key == "depth") {
        base.max_depth = v;
      } else if (key == "contractions") {
        base.max_contractions = v;
      } else if (key == "nodes") {
        base.max_nodes = v;
      } else {
        throw Error("unknown budget key '" + key + "'");
      }
    }
  return base;
}

struct ProveOutcome {
  enum class Status : std::uint8_t { Proved, Refuted, Unknown };
  Status status = Status::Unknown;
  Proof proof;
  std::string diagnostics;
  std::size_t nodes = 0;

  bool proved() const { return status == Status::Proved; }
  bool refuted() const { return status == Status::Refuted; }
  bool unknown() const { return status == Status::Unknown; }
};

inline const char* status_name(ProveOutcome::Status s) {
  switch (s) {
    case ProveOutcome::Status::Proved: return "Proved";
    case ProveOutcome::Status::Refuted: return "Refuted";
    case ProveOutcome::Status::Unknown: return "Unknown";
  }
  return "?";
}

namespace detail {

inline void sort_sequent(Sequent& s) { std::sort(s.begin(), s.end()); }

struct SequentHash {
  std::size_t operator()(const Sequent& s) const {
    std::size_t h = s.size();
    for (auto& f : s) h = mix_hash(h, f.hash());
    return h;
  }
};

inline bool sequent_has_exponential(const Sequent& s) {
  return std::any_of(s.begin(), s.end(), [](const Formula& f) { return f.has_exponential(); });
}

// Necessary conditions for MLL provability: every atom is balanced and
// #axioms + #ones = #tensors + 1.
struct MllCount {
  std::map<Atom, int> balance;
  int literals = 0;
  int ones = 0;
  int tensors = 0;

  void add(const Formula& f) {
    using T = Formula::Tag;
    switch (f.tag()) {
      case T::Atom:
        ++balance[f.atom()];
        ++literals;
        break;
      case T::NegAtom:
        --balance[f.atom()];
        ++literals;
        break;
      case T::One:
        ++ones;
        break;
      case T::Tensor:
        ++tensors;
        add(f.left());
        add(f.right());
        break;
      case T::Par:
        add(f.left());
        add(f.right());
        break;
      default:
        break;
    }
  }
  bool feasible() const {
    if (literals % 2 != 0) return false;
    if (literals / 2 + ones != tensors + 1) return false;
    return std::all_of(balance.begin(), balance.end(), [](auto& kv) { return kv.second == 0; });
  }
};

inline bool mll_feasible(const Sequent& s) {
  MllCount c;
  for (auto& f : s) c.add(f);
  return c.feasible();
}

// Every literal occurrence outside a ? must meet a dual occurrence, and
// atoms that never occur under an exponential must balance exactly.
inline bool literals_supported(const Sequent& s) {
  struct Use {
    int pos = 0, neg = 0;
    bool exponential = false;
    bool pos_required = false, neg_required = false;
  };
  std::map<Atom, Use> uses;
  std::function<void(const Formula&, bool, bool)> go = [&](const Formula& f, bool under_quest, bool under_exp) {
    using T = Formula::Tag;
    switch (f.tag()) {
      case T::Atom:
      case T::NegAtom: {
        Use& u = uses[f.atom()];
        bool neg = f.is(T::NegAtom);
        ++(neg ? u.neg : u.pos);
        u.exponential = u.exponential || under_exp;
        if (!under_quest) (neg ? u.neg_required : u.pos_required) = true;
        break;
      }
      case T::Tensor:
      case T::Par:
        go(f.left(), under_quest, under_exp);
        go(f.right(), under_quest, under_exp);
        break;
      case T::OfCourse:
        go(f.body(), under_quest, true);
        break;
      case T::WhyNot:
        go(f.body(), true, true);
        break;
      default:
        break;
    }
  };
  for (auto& f : s) go(f, false, false);
  for (auto& [a, u] : uses) {
    if (!u.exponential && u.pos != u.neg) return false;
    if (u.pos_required && u.neg == 0) return false;
    if (u.neg_required && u.pos == 0) return false;
  }
  return true;
}

struct SearchResult {
  Proof proof;
  bool cut = false;
};

using Contractions = std::map<Formula, std::size_t>;

inline Proof weaken_all(Proof p, const Sequent& qs) {
  for (auto& q : qs) p = unary(Rule::Weakening, p, q);
  return p;
}

class CoreSearch {
 public:
  explicit CoreSearch(const Budget& b) : budget_(b) {}

  SearchResult run(const Sequent& s) { return search(s, 0, {}); }
  std::size_t nodes() const { return nodes_; }
  bool exhausted_nodes() const { return out_of_nodes_; }

 private:
  using T = Formula::Tag;

  struct Step {
    Rule rule;
    Formula f;
  };

  // ⅋ and ⊥ are decomposed eagerly; duplicate ?-formulas are merged (the
  // extra copy is weakened back in). Returns the steps to replay bottom-up.
  static std::vector<Step> invertible(Sequent& s) {
    std::vector<Step> steps;
    for (;;) {
      bool changed = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        Formula f = s[i];
        if (f.is(T::Par)) {
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
          s.push_back(f.left());
          s.push_back(f.right());
          steps.push_back({Rule::Par, f});
          changed = true;
          break;
        }
        if (f.is(T::Bot)) {
          s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
          steps.push_back({Rule::Bot, f});
          changed = true;
          break;
        }
      }
      if (!changed) break;
    }
    sort_sequent(s);
    for (std::size_t i = 0; i + 1 < s.size();) {
      if (s[i].is(T::WhyNot) && s[i] == s[i + 1]) {
        steps.push_back({Rule::Weakening, s[i]});
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    return steps;
  }

  static Proof replay(Proof p, const std::vector<Step>& steps) {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) p = unary(it->rule, p, it->f);
    return p;
  }

  SearchResult search(Sequent s, std::size_t depth, Contractions contr) {
    if (out_of_nodes_ || ++nodes_ > budget_.max_nodes) {
      out_of_nodes_ = true;
      return {nullptr, true};
    }
    auto steps = invertible(s);
    SearchResult r = search_reduced(s, depth, contr);
    if (r.proof) r.proof = replay(r.proof, steps);
    return r;
  }

  SearchResult search_reduced(const Sequent& s, std::size_t depth, const Contractions& contr) {
    if (auto it = proved_.find(s); it != proved_.end()) return {it->second, false};
    if (failed_.count(s)) return {nullptr, false};
    bool exponential = sequent_has_exponential(s);
    if ((!exponential && !mll_feasible(s)) || (exponential && !literals_supported(s))) {
      failed_.insert(s);
      return {nullptr, false};
    }
    if (depth > budget_.max_depth) return {nullptr, true};

    SearchResult r = decide(s, depth, contr, exponential);
    if (r.proof) {
      proved_.emplace(s, r.proof);
    } else if (!r.cut) {
      failed_.insert(s);
    }
    return r;
  }

  SearchResult decide(const Sequent& s, std::size_t depth, const Contractions& contr, bool exponential) {
    Sequent plain, quests;
    for (auto& f : s) (f.is(T::WhyNot) ? quests : plain).push_back(f);
    bool cut = false;

    if (plain.size() == 2 && plain[0].is_literal() && plain[1] == negate(plain[0])) {
      return {weaken_all(axiom(plain[1]), quests), false};
    }
    if (plain.size() == 1 && plain[0].is(T::One)) return {weaken_all(one_proof(), quests), false};
    // a ?-literal is only ever derelicted right below its axiom
    if (plain.size() == 1 && plain[0].is_literal()) {
      Formula q = Formula::why_not(negate(plain[0]));
      if (auto it = std::find(quests.begin(), quests.end(), q); it != quests.end()) {
        Sequent rest = quests;
        rest.erase(rest.begin() + (it - quests.begin()));
        Proof p = unary(Rule::Dereliction, axiom(plain[0]), q);
        return {weaken_all(p, rest), false};
      }
    }
    if (plain.empty()) {
      for (std::size_t i = 0; i < quests.size(); ++i) {
        if (!quests[i].body().is_literal()) continue;
        Formula q = Formula::why_not(negate(quests[i].body()));
        auto it = std::find(quests.begin(), quests.end(), q);
        if (it == quests.end()) continue;
        Sequent rest = quests;
        rest.erase(rest.begin() + (it - quests.begin()));
        rest.erase(std::find(rest.begin(), rest.end(), quests[i]));
        Proof p = unary(Rule::Dereliction, axiom(quests[i].body()), quests[i]);
        p = unary(Rule::Dereliction, p, q);
        return {weaken_all(p, rest), false};
      }
    }
    if (plain.size() == 1 && plain[0].is(T::OfCourse)) {
      Sequent premise = quests;
      premise.push_back(plain[0].body());
      auto r = search(premise, depth + 1, contr);
      if (r.proof) return {unary(Rule::Promotion, r.proof, plain[0]), false};
      cut = cut || r.cut;
    }

    // ⊗ decisions
    for (std::size_t i = 0; i < plain.size(); ++i) {
      if (!plain[i].is(T::Tensor)) continue;
      if (i > 0 && plain[i] == plain[i - 1]) continue;
      auto r = try_tensor(plain, quests, i, depth, contr, exponential);
      if (r.proof) return r;
      cut = cut || r.cut;
      if (out_of_nodes_) return {nullptr, true};
    }

    // dereliction decisions
    for (auto& q : quests) {
      if (q.body().is_literal()) continue;
      std::size_t used = contr.count(q) ? contr.at(q) : 0;
      Sequent premise = s;
      premise.push_back(q.body());
      Contractions next = contr;
      bool copy = used < budget_.max_contractions;
      if (copy) {
        next[q] = used + 1;
      } else {
        premise.erase(premise.begin() + static_cast<std::ptrdiff_t>(index_of(premise, q)));
        cut = true;
      }
      auto r = search(premise, depth + 1, next);
      cut = cut || r.cut;
      if (r.proof) {
        Proof p = unary(Rule::Dereliction, r.proof, q);
        if (copy) p = unary(Rule::Contraction, p, q);
        return {p, false};
      }
      if (out_of_nodes_) return {nullptr, true};
    }
    return {nullptr, cut};
  }

  SearchResult try_tensor(const Sequent& plain, const Sequent& quests, std::size_t principal, std::size_t depth,
                          const Contractions& contr, bool exponential) {
    const Formula& f = plain[principal];
    // Remaining plain formulas grouped by multiplicity (plain is sorted).
    std::vector<std::pair<Formula, std::size_t>> groups;
    for (std::size_t i = 0; i < plain.size(); ++i) {
      if (i == principal) continue;
      if (!groups.empty() && groups.back().first == plain[i]) {
        ++groups.back().second;
      } else {
        groups.emplace_back(plain[i], 1);
      }
    }
    std::vector<std::size_t> take(groups.size(), 0);
    bool cut = false;
    for (;;) {
      Sequent l = quests, r = quests;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t k = 0; k < groups[g].second; ++k) (k < take[g] ? l : r).push_back(groups[g].first);
      }
      l.push_back(f.left());
      r.push_back(f.right());
      if (exponential ? literals_supported(l) && literals_supported(r) : mll_feasible(l) && mll_feasible(r)) {
        auto lr = search(l, depth + 1, contr);
        cut = cut || lr.cut;
        if (lr.proof) {
          auto rr = search(r, depth + 1, contr);
          cut = cut || rr.cut;
          if (rr.proof) {
            Proof p = tensor_proof(lr.proof, f.left(), rr.proof, f.right());
            for (auto& q : quests) p = unary(Rule::Contraction, p, q);
            return {p, false};
          }
        }
        if (out_of_nodes_) return {nullptr, true};
      }
      std::size_t g = 0;
      while (g < groups.size() && take[g] == groups[g].second) take[g++] = 0;
      if (g == groups.size()) break;
      ++take[g];
    }
    return {nullptr, cut};
  }

  Budget budget_;
  std::size_t nodes_ = 0;
  bool out_of_nodes_ = false;
  std::unordered_map<Sequent, Proof, SequentHash> proved_;
  std::unordered_set<Sequent, SequentHash> failed_;
};

// ---------------------------------------------------------------------------
// Relaxed profiles. Every formula is rewritten to its profile normal form
// (⊗ as ⅋, 1 as ⊥, and under kpt ! as ?) through cuts with profile axioms;
// the normal form is then searched with the derived mix and empty rules.

inline Proof empty_proof() {
  Proof bot = cut_proof(one_proof(), Formula::one(), profile_axiom_proof(AxiomSchema::OneToBot, Formula::one()));
  return cut_proof(one_proof(), Formula::one(), bot);
}

inline Proof mix_proof(const Proof& p1, const Proof& p2) {
  Formula b = Formula::bot(), o = Formula::one();
  Proof t = tensor_proof(unary(Rule::Bot, p1, b), b, unary(Rule::Bot, p2, b), b);
  Proof one_one = tensor_proof(one_proof(), o, one_proof(), o);
  Proof one_par_one = cut_proof(one_one, Formula::tensor(o, o), profile_axiom_proof(AxiomSchema::TensorToPar, o, o));
  return cut_proof(t, Formula::tensor(b, b), one_par_one);
}

// Returns (M, proof of ⊢ M⊥, f).
inline std::pair<Formula, Proof> relax_normal(const Formula& f, const Profile& profile) {
  switch (f.tag()) {
    case Formula::Tag::Atom:
    case Formula::Tag::NegAtom:
      return {f, axiom(f)};
    case Formula::Tag::Bot:
      return {f, eta_axiom(f)};
    case Formula::Tag::One:
      return {Formula::bot(), profile_axiom_proof(AxiomSchema::BotToOne, Formula::one())};
    case Formula::Tag::Par:
    case Formula::Tag::Tensor: {
      auto [ma, pa] = relax_normal(f.left(), profile);
      auto [mb, pb] = relax_normal(f.right(), profile);
      Formula m = Formula::par(ma, mb);
      if (f.is(Formula::Tag::Par)) {
        Proof t = tensor_proof(pa, negate(ma), pb, negate(mb));
        return {m, par_proof(t, f.left(), f.right())};
      }
      Proof t = tensor_proof(pa, f.left(), pb, f.right());
      Proof p = par_proof(t, negate(ma), negate(mb));
      Formula mt = Formula::tensor(ma, mb);
      return {m, cut_proof(profile_axiom_proof(AxiomSchema::ParToTensor, ma, mb), mt, p)};
    }
    case Formula::Tag::WhyNot: {
      auto [ma, pa] = relax_normal(f.body(), profile);
      Proof d = unary(Rule::Dereliction, pa, f);
      return {Formula::why_not(ma), unary(Rule::Promotion, d, Formula::of_course(negate(ma)))};
    }
    case Formula::Tag::OfCourse: {
      auto [ma, pa] = relax_normal(f.body(), profile);
      Proof d = unary(Rule::Dereliction, pa, Formula::why_not(negate(ma)));
      Proof p = unary(Rule::Promotion, d, f);
      if (!profile.has(AxiomSchema::QuestToBang)) return {Formula::of_course(ma), p};
      Formula bang = Formula::of_course(ma);
      return {Formula::why_not(ma), cut_proof(profile_axiom_proof(AxiomSchema::QuestToBang, ma), bang, p)};
    }
  }
  return {f, eta_axiom(f)};
}

class MixSearch {
 public:
  MixSearch(const Budget& b, std::size_t nodes) : budget_(b), nodes_(nodes) {}

  Proof run(const Sequent& s) { return search(s, 0, {}); }
  std::size_t nodes() const { return nodes_; }

 private:
  using T = Formula::Tag;

  Proof search(Sequent s, std::size_t depth, Contractions contr) {
    if (++nodes_ > budget_.max_nodes || depth > budget_.max_depth) return nullptr;
    // ⅋ and ⊥ first.
    for (std::size_t i = 0; i < s.size(); ++i) {
      Formula f = s[i];
      if (f.is(T::Par) || f.is(T::Bot)) {
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
        if (f.is(T::Par)) {
          s.push_back(f.left());
          s.push_back(f.right());
        }
        Proof p = search(s, depth, contr);
        if (!p) return nullptr;
        return f.is(T::Par) ? par_proof(p, f.left(), f.right()) : unary(Rule::Bot, p, f);
      }
    }
    sort_sequent(s);
    if (s.empty()) return empty_proof();

    Sequent plain, quests;
    for (auto& f : s) (f.is(T::WhyNot) ? quests : plain).push_back(f);
    if (plain.empty()) return weaken_all(empty_proof(), quests);

    const Formula& first = plain.front();
    if (first.is_literal()) {
      Formula dual = negate(first);
      Sequent rest = s;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(index_of(rest, first)));
      if (auto it = std::find(rest.begin(), rest.end(), dual); it != rest.end()) {
        rest.erase(it);
        Proof ax = axiom(first);
        if (rest.empty()) return ax;
        if (Proof p = search(rest, depth + 1, contr)) return mix_proof(ax, p);
      }
      for (auto& q : quests) {
        if (!signed_atoms(q.body()).count({dual.atom(), dual.is(T::NegAtom)})) continue;
        std::size_t used = contr.count(q) ? contr.at(q) : 0;
        if (used >= budget_.max_contractions) continue;
        Contractions next = contr;
        next[q] = used + 1;
        Sequent premise = s;
        premise.push_back(q.body());
        if (Proof p = search(premise, depth + 1, next)) {
          return unary(Rule::Contraction, unary(Rule::Dereliction, p, q), q);
        }
      }
      return nullptr;
    }
    if (first.is(T::OfCourse)) {
      Sequent inner = quests;
      inner.push_back(first.body());
      Proof prom = search(inner, depth + 1, contr);
      if (!prom) return nullptr;
      prom = unary(Rule::Promotion, prom, first);
      Sequent rest = s;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(index_of(rest, first)));
      if (std::all_of(rest.begin(), rest.end(), [](const Formula& f) { return f.is(T::WhyNot); })) return prom;
      // the ?-context is shared by contraction
      Proof p = search(rest, depth + 1, contr);
      if (!p) return nullptr;
      p = mix_proof(prom, p);
      for (auto& q : quests) p = unary(Rule::Contraction, p, q);
      return p;
    }
    return nullptr;
  }

  Budget budget_;
  std::size_t nodes_;
};

}  // namespace detail

// Proved carries a proof checked by the caller's profile; Refuted is only
// reported for exponential-free sequents whose core search was exhaustive.
inline ProveOutcome prove(const Sequent& s, const Profile& profile = Profile::core(), const Budget& budget = {}) {
  ProveOutcome out;
  detail::CoreSearch core(budget);
  auto r = core.run(s);
  out.nodes = core.nodes();
  if (r.proof) {
    out.status = ProveOutcome::Status::Proved;
    out.proof = r.proof;
    return out;
  }
  bool exhaustive = !r.cut && !detail::sequent_has_exponential(s);
  if (!profile.relaxed()) {
    if (exhaustive) {
      out.status = ProveOutcome::Status::Refuted;
      return out;
    }
    out.status = ProveOutcome::Status::Unknown;
    out.diagnostics = core.exhausted_nodes() ? "node budget exhausted"
                      : r.cut               ? "depth or contraction budget exhausted"
                                            : "search exhausted on a sequent with exponentials";
    return out;
  }

  Sequent normal;
  std::vector<Proof> bridges;
  for (auto& f : s) {
    auto [m, p] = detail::relax_normal(f, profile);
    normal.push_back(m);
    bridges.push_back(p);
  }
  detail::MixSearch mix(budget, out.nodes);
  Proof p = mix.run(normal);
  out.nodes = mix.nodes();
  if (!p) {
    out.status = ProveOutcome::Status::Unknown;
    out.diagnostics = std::string("no proof found under profile ") + profile_name(profile.name);
    return out;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (normal[i] == s[i]) continue;
    p = cut_proof(p, normal[i], bridges[i]);
  }
  out.status = ProveOutcome::Status::Proved;
  out.proof = p;
  return out;
}

// e ≤ f
inline ProveOutcome entails(const Formula& e, const Formula& f, const Profile& profile = Profile::core(),
                            const Budget& budget = {}) {
  return prove({negate(e), f}, profile, budget);
}

}  // namespace pict
