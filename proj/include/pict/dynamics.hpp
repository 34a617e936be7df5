#pragma once

// Structural congruence, reduction and bounded exploration of executions.

#include <deque>

#include "pict/typing.hpp"

namespace pict {

struct Label {
  std::optional<Name> name;  // empty for τ

  static Label tau() { return {}; }
  static Label on(Name n) { return {std::move(n)}; }
  bool is_tau() const { return !name.has_value(); }
  std::string str() const { return name ? *name : "tau"; }

  friend bool operator==(const Label& a, const Label& b) { return a.name == b.name; }
  friend bool operator<(const Label& a, const Label& b) { return a.name < b.name; }
};

struct Step {
  Label label;
  Process process;
};

struct Reducts {
  std::vector<Step> steps;
  std::vector<std::string> diagnostics;  // arity mismatches at redexes
};

namespace detail {

struct Binder {
  Name name;
  Behaviour payload;
  Kind kind;
};

// new b1 … new bn (t1 | … | tm), with every prefix body already canonical.
struct Flat {
  std::vector<Binder> binders;
  std::vector<Process> threads;
};

inline Process normalize(const Process& p);

inline void flatten(const Process& p, Flat& out, FreshNames& fresh, std::set<Name>& taken) {
  using T = Process::Tag;
  switch (p.tag()) {
    case T::Nop:
      return;
    case T::Par:
      flatten(p.left(), out, fresh, taken);
      flatten(p.right(), out, fresh, taken);
      return;
    case T::New: {
      Name x = p.binder();
      Process body = p.body();
      if (taken.count(x)) {
        Name y = fresh.next(x);
        body = substitute(body, NameMap{{x, y}});
        x = y;
      }
      taken.insert(x);
      out.binders.push_back({x, p.payload(), p.kind()});
      flatten(body, out, fresh, taken);
      return;
    }
    case T::Out:
      out.threads.push_back(Process::output(p.subject(), p.names(), normalize(p.body())));
      return;
    case T::In:
      out.threads.push_back(Process::input(p.subject(), p.names(), normalize(p.body())));
      return;
    case T::RepIn:
      out.threads.push_back(Process::rep_input(p.subject(), p.names(), normalize(p.body())));
      return;
  }
}

inline void names_in_order(const Process& p, std::vector<Name>& out) {
  using T = Process::Tag;
  auto add = [&](const Name& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  switch (p.tag()) {
    case T::Nop:
      return;
    case T::Par:
      names_in_order(p.left(), out);
      names_in_order(p.right(), out);
      return;
    case T::New:
      names_in_order(p.body(), out);
      return;
    default:
      add(p.subject());
      for (auto& n : p.names()) add(n);
      names_in_order(p.body(), out);
      return;
  }
}

inline Process rebuild(const Flat& f) {
  Process body = Process::nop();
  if (!f.threads.empty()) {
    body = f.threads.back();
    for (std::size_t i = f.threads.size() - 1; i-- > 0;) body = Process::par(f.threads[i], body);
  }
  for (std::size_t i = f.binders.size(); i-- > 0;) {
    body = Process::make_new(f.binders[i].name, f.binders[i].payload, f.binders[i].kind, body);
  }
  return body;
}

// Sorts threads by their shape with top-level binders erased, then orders
// binders by first use.
inline Process canonical(Flat f) {
  std::set<Name> bound;
  for (auto& b : f.binders) bound.insert(b.name);
  NameMap erase;
  for (auto& b : f.binders) erase[b.name] = "%";
  std::vector<std::pair<std::string, Process>> keyed;
  for (auto& t : f.threads) {
    std::string shape = print_process(alpha_canonical(substitute(t, erase)));
    keyed.emplace_back(shape + "\x01" + print_process(alpha_canonical(t)), t);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) { return a.first < b.first; });
  f.threads.clear();
  for (auto& [k, t] : keyed) f.threads.push_back(t);

  std::vector<Name> order;
  for (auto& t : f.threads) names_in_order(t, order);
  std::vector<Binder> used, unused;
  for (auto& n : order) {
    for (auto& b : f.binders) {
      if (b.name == n) used.push_back(b);
    }
  }
  for (auto& b : f.binders) {
    if (std::find(order.begin(), order.end(), b.name) == order.end()) unused.push_back(b);
  }
  std::stable_sort(unused.begin(), unused.end(), [](const Binder& a, const Binder& b) {
    auto ka = std::make_pair(print_behaviour(a.payload), a.kind);
    auto kb = std::make_pair(print_behaviour(b.payload), b.kind);
    return ka < kb;
  });
  used.insert(used.end(), unused.begin(), unused.end());
  f.binders = used;
  return rebuild(f);
}

inline Flat flat_of(const Process& p) {
  Flat f;
  std::set<Name> taken = free_names(p);
  FreshNames fresh(all_names(p));
  flatten(p, f, fresh, taken);
  return f;
}

inline Process normalize(const Process& p) { return canonical(flat_of(p)); }

}  // namespace detail

// Canonical representative up to structural congruence: parallel
// compositions flattened and sorted, 0 dropped, binders hoisted to the top.
inline Process congruence_normalize(const Process& p) { return detail::normalize(p); }

namespace detail {

// Matches two terms up to congruence by pairing hoisted binders and
// parallel threads, backtracking over the pairing. Sorting alone is not
// enough: the order it picks depends on the names of bound channels.
class CongruenceMatcher {
 public:
  bool run(const Process& p, const Process& q) {
    Scope s;
    return procs(p, q, {}, s, 0);
  }

 private:
  struct Pending {
    Behaviour payload;
    Kind kind;
    int level;
    bool operator==(const Pending& o) const { return payload == o.payload && kind == o.kind && level == o.level; }
  };
  // new-bound names: assigned pairs and binders still free to pair
  struct Scope {
    std::map<Name, Name> fwd, bwd;
    std::map<Name, Pending> pend_a, pend_b;
  };
  // input-bound names, lexically scoped
  struct Lexical {
    std::map<Name, Name> fwd, bwd;
    void bind(const Name& x, const Name& y) {
      unbind_a(x);
      unbind_b(y);
      fwd[x] = y;
      bwd[y] = x;
    }
    void unbind_a(const Name& x) {
      if (auto it = fwd.find(x); it != fwd.end()) {
        bwd.erase(it->second);
        fwd.erase(it);
      }
    }
    void unbind_b(const Name& y) {
      if (auto it = bwd.find(y); it != bwd.end()) {
        fwd.erase(it->second);
        bwd.erase(it);
      }
    }
  };

  static bool name(const Name& x, const Name& y, const Lexical& r, Scope& s) {
    auto ra = r.fwd.find(x);
    auto rb = r.bwd.find(y);
    if (ra != r.fwd.end() || rb != r.bwd.end()) return ra != r.fwd.end() && ra->second == y;
    auto sa = s.fwd.find(x);
    auto sb = s.bwd.find(y);
    if (sa != s.fwd.end() || sb != s.bwd.end()) return sa != s.fwd.end() && sa->second == y;
    auto pa = s.pend_a.find(x);
    auto pb = s.pend_b.find(y);
    if (pa != s.pend_a.end() || pb != s.pend_b.end()) {
      if (pa == s.pend_a.end() || pb == s.pend_b.end() || !(pa->second == pb->second)) return false;
      s.pend_a.erase(pa);
      s.pend_b.erase(pb);
      s.fwd[x] = y;
      s.bwd[y] = x;
      return true;
    }
    return x == y;
  }

  bool thread(const Process& a, const Process& b, const Lexical& r, Scope& s, int level) {
    using T = Process::Tag;
    if (a.tag() != b.tag() || a.names().size() != b.names().size()) return false;
    if (!name(a.subject(), b.subject(), r, s)) return false;
    if (a.is(T::Out)) {
      for (std::size_t i = 0; i < a.names().size(); ++i) {
        if (!name(a.names()[i], b.names()[i], r, s)) return false;
      }
      return procs(a.body(), b.body(), r, s, level + 1);
    }
    Lexical inner = r;
    for (std::size_t i = 0; i < a.names().size(); ++i) inner.bind(a.names()[i], b.names()[i]);
    return procs(a.body(), b.body(), inner, s, level + 1);
  }

  bool threads(const std::vector<Process>& as, const std::vector<Process>& bs, std::size_t i,
               std::vector<bool>& used, const Lexical& r, Scope& s, int level) {
    if (i == as.size()) return true;
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (used[j]) continue;
      Scope trial = s;
      if (!thread(as[i], bs[j], r, trial, level)) continue;
      used[j] = true;
      if (threads(as, bs, i + 1, used, r, trial, level)) {
        s = std::move(trial);
        return true;
      }
      used[j] = false;
    }
    return false;
  }

  bool procs(const Process& p, const Process& q, const Lexical& r, Scope& s, int level) {
    Flat fa = flat_of(p);
    Flat fb = flat_of(q);
    if (fa.binders.size() != fb.binders.size() || fa.threads.size() != fb.threads.size()) return false;
    Scope local = s;
    Lexical lex = r;
    auto hide = [](std::map<Name, Name>& mine, std::map<Name, Name>& other, std::map<Name, Pending>& pend,
                   const Name& n) {
      if (auto it = mine.find(n); it != mine.end()) {
        other.erase(it->second);
        mine.erase(it);
      }
      pend.erase(n);
    };
    for (auto& b : fa.binders) {
      hide(local.fwd, local.bwd, local.pend_a, b.name);
      lex.unbind_a(b.name);
      local.pend_a[b.name] = {b.payload, b.kind, level};
    }
    for (auto& b : fb.binders) {
      hide(local.bwd, local.fwd, local.pend_b, b.name);
      lex.unbind_b(b.name);
      local.pend_b[b.name] = {b.payload, b.kind, level};
    }
    std::vector<bool> used(fb.threads.size(), false);
    if (!threads(fa.threads, fb.threads, 0, used, lex, local, level)) return false;

    // binders no thread mentions pair up by type alone
    std::vector<Pending> left_a, left_b;
    for (auto& b : fa.binders) {
      if (auto it = local.pend_a.find(b.name); it != local.pend_a.end() && it->second.level == level) {
        left_a.push_back(it->second);
      }
    }
    for (auto& b : fb.binders) {
      if (auto it = local.pend_b.find(b.name); it != local.pend_b.end() && it->second.level == level) {
        left_b.push_back(it->second);
      }
    }
    if (left_a.size() != left_b.size()) return false;
    for (auto& x : left_a) {
      auto it = std::find(left_b.begin(), left_b.end(), x);
      if (it == left_b.end()) return false;
      left_b.erase(it);
    }

    // drop this level's binders and bring back what they shadowed
    Scope out = s;
    for (auto& [x, y] : local.fwd) {
      bool mine = std::any_of(fa.binders.begin(), fa.binders.end(), [&](const Binder& b) { return b.name == x; });
      if (!mine && !out.fwd.count(x)) {
        out.fwd[x] = y;
        out.bwd[y] = x;
        out.pend_a.erase(x);
        out.pend_b.erase(y);
      }
    }
    s = std::move(out);
    return true;
  }
};

}  // namespace detail

inline bool congruent(const Process& p, const Process& q) { return detail::CongruenceMatcher().run(p, q); }

// All one-step reducts, each in canonical form, without duplicates.
inline Reducts reduce_steps(const Process& p) {
  using T = Process::Tag;
  Reducts out;
  detail::Flat f = detail::flat_of(congruence_normalize(p));
  std::set<std::pair<Label, std::string>> seen;
  for (std::size_t i = 0; i < f.threads.size(); ++i) {
    const Process& o = f.threads[i];
    if (!o.is(T::Out)) continue;
    for (std::size_t j = 0; j < f.threads.size(); ++j) {
      const Process& r = f.threads[j];
      if (i == j || !(r.is(T::In) || r.is(T::RepIn)) || r.subject() != o.subject()) continue;
      if (r.names().size() != o.names().size()) {
        out.diagnostics.push_back("arity mismatch on " + o.subject() + ": " + std::to_string(o.names().size()) +
                                  " sent, " + std::to_string(r.names().size()) + " expected");
        continue;
      }
      detail::Flat next;
      Label label = Label::on(o.subject());
      for (auto& b : f.binders) {
        if (b.name == o.subject()) {
          label = Label::tau();
          if (b.kind == Kind::Linear) continue;
        }
        next.binders.push_back(b);
      }
      for (std::size_t k = 0; k < f.threads.size(); ++k) {
        if (k == i || (k == j && r.is(T::In))) continue;
        next.threads.push_back(f.threads[k]);
      }
      next.threads.push_back(o.body());
      next.threads.push_back(substitute(r.body(), r.names(), o.names()));
      Process q = congruence_normalize(detail::rebuild(next));
      if (seen.emplace(label, print_process(alpha_canonical(q))).second) out.steps.push_back({label, q});
    }
  }
  return out;
}

struct Trace {
  Process root;
  std::vector<Step> steps;
  bool exhausted = false;
};

struct TraceTree {
  Process process;
  std::vector<std::pair<Label, TraceTree>> children;
  bool exhausted = false;  // no reduct
  bool truncated = false;  // step bound reached with reducts left
};

inline Trace trace_leftmost(const Process& p, std::size_t max_steps) {
  Trace t{congruence_normalize(p), {}, false};
  Process cur = t.root;
  for (std::size_t i = 0;; ++i) {
    auto r = reduce_steps(cur);
    if (r.steps.empty()) {
      t.exhausted = true;
      break;
    }
    if (i == max_steps) break;
    t.steps.push_back(r.steps.front());
    cur = r.steps.front().process;
  }
  return t;
}

inline TraceTree trace_all(const Process& p, std::size_t max_steps) {
  TraceTree t;
  t.process = congruence_normalize(p);
  auto r = reduce_steps(t.process);
  if (r.steps.empty()) {
    t.exhausted = true;
    return t;
  }
  if (max_steps == 0) {
    t.truncated = true;
    return t;
  }
  for (auto& s : r.steps) t.children.emplace_back(s.label, trace_all(s.process, max_steps - 1));
  return t;
}

// Length of the longest τ-path from p, capped at `cap` + 1; states are
// shared up to congruence.
inline std::size_t longest_tau_path(const Process& p, std::size_t cap) {
  std::map<std::string, std::size_t> memo;
  std::function<std::size_t(const Process&, std::size_t)> go = [&](const Process& q, std::size_t depth) {
    std::string key = print_process(alpha_canonical(q));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = 0;
    if (depth <= cap) {
      for (auto& s : reduce_steps(q).steps) {
        if (!s.label.is_tau()) continue;
        best = std::max(best, 1 + go(s.process, depth + 1));
        if (best > cap) break;
      }
    }
    memo[key] = best;
    return best;
  };
  return go(congruence_normalize(p), 0);
}

struct SubjectReductionFailure {
  Process from;
  Label label;
  Process to;
  CheckOutcome::Status status;
  std::vector<std::string> obligations;
};

struct SubjectReductionReport {
  std::size_t states = 0;
  std::size_t tau_steps = 0;
  std::vector<SubjectReductionFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Re-checks E ⊢ P′ for every τ-step P → P′ reachable within `max_steps`.
inline SubjectReductionReport subject_reduction_check(const Formula& e, const Process& p, std::size_t max_steps,
                                                      const Profile& profile = Profile::core(),
                                                      const Budget& budget = {}) {
  SubjectReductionReport rep;
  std::set<std::string> visited;
  std::deque<std::pair<Process, std::size_t>> queue;
  Process root = congruence_normalize(p);
  queue.emplace_back(root, 0);
  visited.insert(print_process(alpha_canonical(root)));
  while (!queue.empty()) {
    auto [q, depth] = queue.front();
    queue.pop_front();
    ++rep.states;
    if (depth == max_steps) continue;
    for (auto& s : reduce_steps(q).steps) {
      if (!s.label.is_tau()) continue;
      ++rep.tau_steps;
      auto c = check(e, s.process, profile, budget);
      if (!c.typed()) rep.failures.push_back({q, s.label, s.process, c.status, c.obligations});
      if (visited.insert(print_process(alpha_canonical(s.process))).second) queue.emplace_back(s.process, depth + 1);
    }
  }
  return rep;
}

}  // namespace pict
