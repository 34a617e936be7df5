#pragma once

// Test-only reference for MLL provability: exhaustive cut-free search that
// tries every rule on every formula, with memoisation. Shares no code with
// the library prover.
//
// Formulas are prefix strings: a A b B (A, B negated), 1, 0 (⊥), *XY, %XY.

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pict/syntax.hpp"

namespace oracle {

using Seq = std::vector<std::string>;

inline std::size_t skip(const std::string& s, std::size_t i) {
  if (s[i] == '*' || s[i] == '%') return skip(s, skip(s, i + 1));
  return i + 1;
}

inline std::pair<std::string, std::string> children(const std::string& s) {
  std::size_t mid = skip(s, 1);
  return {s.substr(1, mid - 1), s.substr(mid)};
}

inline bool dual_literals(const std::string& x, const std::string& y) {
  if (x.size() != 1 || y.size() != 1 || !std::isalpha(static_cast<unsigned char>(x[0]))) return false;
  return x[0] != y[0] && std::tolower(x[0]) == std::tolower(y[0]);
}

class Mll {
 public:
  bool provable(Seq s) {
    std::sort(s.begin(), s.end());
    std::string key;
    for (auto& f : s) key += f + ",";
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = search(s);
    memo_[key] = r;
    return r;
  }

  std::size_t size() const { return memo_.size(); }

 private:
  bool search(const Seq& s) {
    if (s.size() == 2 && dual_literals(s[0], s[1])) return true;
    if (s.size() == 1 && s[0] == "1") return true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0 && s[i] == s[i - 1]) continue;
      const std::string& f = s[i];
      Seq rest = s;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (f == "0") {
        if (provable(rest)) return true;
      } else if (f[0] == '%') {
        auto [a, b] = children(f);
        Seq t = rest;
        t.push_back(a);
        t.push_back(b);
        if (provable(t)) return true;
      } else if (f[0] == '*') {
        auto [a, b] = children(f);
        std::size_t n = rest.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          Seq l{a}, r{b};
          for (std::size_t k = 0; k < n; ++k) ((mask >> k) & 1 ? l : r).push_back(rest[k]);
          if (provable(l) && provable(r)) return true;
        }
      }
    }
    return false;
  }

  std::unordered_map<std::string, bool> memo_;
};

inline pict::Formula to_formula(const std::string& s) {
  using pict::Formula;
  std::size_t i = 0;
  std::function<Formula()> go = [&]() -> Formula {
    char c = s[i++];
    switch (c) {
      case '1': return Formula::one();
      case '0': return Formula::bot();
      case '*': {
        Formula a = go();
        return Formula::tensor(a, go());
      }
      case '%': {
        Formula a = go();
        return Formula::par(a, go());
      }
      default: {
        Formula p = Formula::prop(std::string(1, static_cast<char>(std::tolower(c))));
        return std::isupper(static_cast<unsigned char>(c)) ? pict::negate(p) : p;
      }
    }
  };
  return go();
}

// Formulas with exactly `k` connectives (⊗, ⅋, 1, ⊥) over the literals a,
// A, b, B, up to commutativity of ⊗ and ⅋ (children in nondecreasing order).
class Enumerator {
 public:
  const std::vector<std::string>& of_size(std::size_t k) {
    while (table_.size() <= k) grow();
    return table_[k];
  }

 private:
  void grow() {
    std::size_t k = table_.size();
    std::vector<std::string> out;
    if (k == 0) {
      out = {"A", "B", "a", "b"};
    } else {
      if (k == 1) {
        out.push_back("0");
        out.push_back("1");
      }
      for (std::size_t i = 0; i + 1 <= k - 1; ++i) {
        std::size_t j = k - 1 - i;
        if (i > j) break;
        for (auto& x : table_[i]) {
          for (auto& y : table_[j]) {
            if (i == j && y < x) continue;
            out.push_back("*" + x + y);
            out.push_back("%" + x + y);
          }
        }
      }
    }
    table_.push_back(std::move(out));
  }

  std::vector<std::vector<std::string>> table_;
};

}  // namespace oracle
