#pragma once

// Random generation of closed, well-typed processes.

#include <random>

#include "pict/dynamics.hpp"

namespace pict {

struct CorpusEntry {
  Formula env;
  Process process;
};

namespace detail {

// An obligation or permission a branch holds on a name.
struct Endpoint {
  enum class Use : std::uint8_t { Linear, Reusable, Replicated };
  Name name;
  Polarity polarity;
  Behaviour payload;
  Use use;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Process closed(std::size_t budget) {
    counter_ = 0;
    budget_ = budget;
    std::vector<Endpoint> eps;
    std::vector<std::tuple<Name, Behaviour, Kind>> binders;
    std::size_t channels = 1 + pick(2);
    for (std::size_t i = 0; i < channels; ++i) {
      Behaviour a = payload();
      bool omega = coin(0.35);
      Name u = fresh();
      binders.emplace_back(u, a, omega ? Kind::Omega : Kind::Linear);
      add_channel(u, a, omega ? Kind::Omega : Kind::Linear, eps);
    }
    Process body = branch(eps, 0);
    for (std::size_t i = binders.size(); i-- > 0;) {
      auto& [u, a, k] = binders[i];
      body = Process::make_new(u, a, k, body);
    }
    return body;
  }

 private:
  using Use = Endpoint::Use;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  Name fresh() { return "c" + std::to_string(counter_++); }

  Behaviour payload() {
    static const std::vector<Behaviour> pool = [] {
      std::vector<Behaviour> v;
      for (auto* s : {"1", "bot", "out 1", "in 1", "out bot", "in bot", "! out 1", "out 1 (*) in 1",
                      "in 1 (%) in bot", "out (in 1)", "in (out 1)"}) {
        v.push_back(parse_behaviour(s));
      }
      return v;
    }();
    return pool[pick(pool.size() - 1)];
  }

  static void add_channel(const Name& u, const Behaviour& a, Kind k, std::vector<Endpoint>& eps) {
    if (k == Kind::Linear) {
      eps.push_back({u, Polarity::Output, a, Use::Linear});
      eps.push_back({u, Polarity::Input, a, Use::Linear});
    } else {
      eps.push_back({u, Polarity::Output, a, Use::Reusable});
      eps.push_back({u, Polarity::Input, a, Use::Replicated});
    }
  }

  // Endpoints for names received or kept at the capabilities of a tuple.
  static std::vector<Endpoint> endpoints_of(const NameList& xs, const Behaviour& a) {
    std::vector<Endpoint> out;
    auto ls = leaves(a);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Behaviour& l = ls[i];
      Use use = Use::Linear;
      if (l.exponent() == Exponent::Bang) use = Use::Reusable;
      if (l.exponent() == Exponent::Quest) use = Use::Replicated;
      out.push_back({xs[i], l.polarity(), l.payload(), use});
    }
    return out;
  }

  static bool pending(const std::vector<Endpoint>& eps) {
    return std::any_of(eps.begin(), eps.end(), [](const Endpoint& e) { return e.use != Use::Reusable; });
  }

  // Sends fresh names for the tuple type `a`: the sent ends go out, the
  // dual ends stay with the sender.
  std::pair<NameList, std::vector<std::tuple<Name, Behaviour, Kind>>> fresh_tuple(const Behaviour& a,
                                                                                  std::vector<Endpoint>& keep) {
    NameList ys;
    std::vector<std::tuple<Name, Behaviour, Kind>> binders;
    for (auto& l : leaves(a)) {
      Name y = fresh();
      ys.push_back(y);
      Kind k = leaf_kind(l);
      binders.emplace_back(y, l.payload(), k);
      Polarity kept = l.polarity() == Polarity::Output ? Polarity::Input : Polarity::Output;
      Use use = Use::Linear;
      if (k == Kind::Omega) use = kept == Polarity::Input ? Use::Replicated : Use::Reusable;
      keep.push_back({y, kept, l.payload(), use});
    }
    return {ys, binders};
  }

  Process act(std::vector<Endpoint> eps, std::size_t i, std::size_t depth) {
    Endpoint e = eps[i];
    if (e.use != Use::Reusable) eps.erase(eps.begin() + static_cast<std::ptrdiff_t>(i));
    if (e.polarity == Polarity::Output) {
      std::vector<Endpoint> rest = eps;
      auto [ys, binders] = fresh_tuple(e.payload, rest);
      Process out;
      if (coin(0.5)) {
        out = Process::output(e.name, ys);
        if (pending(rest) || (!rest.empty() && coin(0.3))) out = Process::par(out, branch(rest, depth + 1));
      } else {
        out = Process::output(e.name, ys, branch(rest, depth + 1));
      }
      for (std::size_t k = binders.size(); k-- > 0;) {
        auto& [y, b, kind] = binders[k];
        out = Process::make_new(y, b, kind, out);
      }
      return out;
    }
    NameList xs;
    for (std::size_t k = 0; k < e.payload.arity(); ++k) xs.push_back(fresh());
    auto received = endpoints_of(xs, e.payload);
    if (e.use == Use::Replicated) {
      std::vector<Endpoint> inner = received;
      for (auto& o : eps) {
        if (o.use == Use::Reusable) inner.push_back(o);
      }
      Process p = Process::rep_input(e.name, xs, branch(inner, depth + 1));
      if (pending(eps)) p = Process::par(p, branch(eps, depth + 1));
      return p;
    }
    eps.insert(eps.end(), received.begin(), received.end());
    return Process::input(e.name, xs, branch(eps, depth + 1));
  }

  Process branch(std::vector<Endpoint> eps, std::size_t depth) {
    if (counter_ > budget_ || depth > 8) {
      // discharge what must be used
      std::vector<std::size_t> must;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i].use != Use::Reusable) must.push_back(i);
      }
      if (must.empty()) return Process::nop();
      return act(eps, must.front(), depth);
    }
    if (!pending(eps) && (eps.empty() || coin(0.5))) return Process::nop();
    // parallel split
    if (eps.size() >= 2 && coin(0.4)) {
      std::vector<Endpoint> l, r;
      for (auto& e : eps) {
        if (e.use == Use::Reusable) {
          l.push_back(e);
          r.push_back(e);
        } else {
          (coin(0.5) ? l : r).push_back(e);
        }
      }
      if (pending(l) && pending(r)) return Process::par(branch(l, depth + 1), branch(r, depth + 1));
    }
    // a fresh private channel now and then
    if (coin(0.15)) {
      Behaviour a = payload();
      Kind k = coin(0.3) ? Kind::Omega : Kind::Linear;
      Name u = fresh();
      add_channel(u, a, k, eps);
      return Process::make_new(u, a, k, branch(eps, depth + 1));
    }
    std::vector<std::size_t> choices;
    for (std::size_t i = 0; i < eps.size(); ++i) choices.push_back(i);
    return act(eps, choices[pick(choices.size() - 1)], depth);
  }

  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
  std::size_t budget_ = 0;
};

}  // namespace detail

// Typed closed terms with sizes in [1, max_size]; the environment of each is
// the synthesized one.
inline std::vector<CorpusEntry> generate_corpus(std::size_t count, std::uint64_t seed, std::size_t max_size = 25,
                                                const Profile& profile = Profile::core(), const Budget& budget = {},
                                                std::size_t max_attempts = 20000) {
  std::vector<CorpusEntry> out;
  std::set<std::string> seen;
  detail::Generator gen(seed);
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    Process p = gen.closed(2 + attempt % 10);
    if (p.size() > max_size) continue;
    if (!seen.insert(print_process(alpha_canonical(p))).second) continue;
    auto s = synthesize(p, {}, profile, budget);
    if (!s.typed()) continue;
    out.push_back({s.env, p});
  }
  return out;
}

}  // namespace pict
