// Acceptance run: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "generators.hpp"
#include "oracle.hpp"
#include "pict/corpus.hpp"
#include "pict/encodings.hpp"
#include "pict/examples.hpp"
#include "pict/proof_ops.hpp"
#include "pict/surface.hpp"

using namespace pict;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Line {
  int id;
  bool pass;
  std::string summary;
  bool known_conflict = false;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& summary, bool known_conflict = false) {
  lines.push_back({id, pass, summary, known_conflict});
  std::cout << "criterion " << std::setw(2) << id << ": " << (pass ? "PASS" : "FAIL") << "  " << summary
            << (known_conflict && !pass ? "  [known conflict]" : "") << std::endl;
}

std::string fmt(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << s << "s";
  return os.str();
}

// ---------------------------------------------------------------------------

void prover_oracle() {
  auto t0 = Clock::now();
  oracle::Enumerator en;
  oracle::Mll mll;
  std::size_t n = 0, agree = 0, provable = 0;
  std::string first_miss;
  auto run = [&](const oracle::Seq& s) {
    ++n;
    bool want = mll.provable(s);
    Sequent seq;
    for (auto& f : s) seq.push_back(oracle::to_formula(f));
    auto r = prove(seq);
    bool ok = want ? r.proved() : r.refuted();
    provable += want;
    if (ok) {
      ++agree;
    } else if (first_miss.empty()) {
      first_miss = print_sequent(seq) + " -> " + status_name(r.status);
    }
  };
  // one formula with up to 7 connectives, or two with up to 7 in total
  for (std::size_t k = 0; k <= 7; ++k) {
    for (auto& f : en.of_size(k)) run({f});
  }
  for (std::size_t i = 0; i <= 7; ++i) {
    for (std::size_t j = i; i + j <= 7; ++j) {
      const auto& fi = en.of_size(i);
      const auto& fj = en.of_size(j);
      for (std::size_t a = 0; a < fi.size(); ++a) {
        for (std::size_t b = i == j ? a : 0; b < fj.size(); ++b) run({fi[a], fj[b]});
      }
    }
  }
  double t = seconds_since(t0);
  std::ostringstream os;
  os << "prover/oracle agreement " << agree << "/" << n << " (" << provable << " provable), " << fmt(t)
     << " (limit 300s)";
  if (!first_miss.empty()) os << "; first disagreement " << first_miss;
  report(1, agree == n && t < 300, os.str());
}

// ---------------------------------------------------------------------------

std::vector<Proof> valid_proofs(std::size_t count, std::uint64_t seed) {
  gen::Random rnd(seed);
  std::vector<Proof> out;
  std::set<std::string> seen;
  while (out.size() < count) {
    // a formula next to its negation, or a random sequent, keeps the
    // provable fraction reasonable
    Sequent s;
    Formula f = rnd.mell(3);
    if (rnd.coin(0.6)) {
      s = {f, negate(f)};
      if (rnd.coin()) s.push_back(Formula::bot());
    } else {
      for (std::size_t i = 0, k = 1 + rnd.below(3); i < k; ++i) s.push_back(rnd.mell(2));
    }
    if (!seen.insert(print_sequent(s)).second) continue;
    auto r = prove(s);
    if (r.proved()) out.push_back(r.proof);
  }
  return out;
}

std::size_t count_nodes(const Proof& p) {
  std::size_t n = 1;
  for (auto& q : p->premises) n += count_nodes(q);
  return n;
}

// Copies the path to the `k`-th node (preorder) and lets `edit` change it.
Proof edit_node(const Proof& p, std::size_t& k, const std::function<void(ProofNode&)>& edit) {
  if (k == 0) {
    auto n = std::make_shared<ProofNode>(*p);
    edit(*n);
    k = static_cast<std::size_t>(-1);
    return n;
  }
  --k;
  for (std::size_t i = 0; i < p->premises.size(); ++i) {
    Proof q = edit_node(p->premises[i], k, edit);
    if (q != p->premises[i]) {
      auto n = std::make_shared<ProofNode>(*p);
      n->premises[i] = q;
      return n;
    }
  }
  return p;
}

const ProofNode& node_at(const Proof& p, std::size_t k) {
  std::vector<Proof> stack{p};
  while (true) {
    Proof cur = stack.back();
    stack.pop_back();
    if (k-- == 0) return *cur;
    for (auto it = cur->premises.rbegin(); it != cur->premises.rend(); ++it) stack.push_back(*it);
  }
}

std::optional<Proof> mutate(const Proof& p, gen::Random& rnd, int kind) {
  std::size_t size = count_nodes(p);
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::size_t k = rnd.below(size);
    const ProofNode& n = node_at(p, k);
    std::function<void(ProofNode&)> edit;
    if (kind == 0) {
      auto r = static_cast<Rule>(rnd.below(static_cast<std::size_t>(Rule::ProfileAxiom) + 1));
      if (r == n.rule) continue;
      edit = [r](ProofNode& m) { m.rule = r; };
    } else if (kind == 1) {
      if (n.premises.empty()) continue;
      std::size_t i = rnd.below(n.premises.size());
      edit = [i](ProofNode& m) { m.premises.erase(m.premises.begin() + static_cast<std::ptrdiff_t>(i)); };
    } else {
      if (n.principal.empty() || n.conclusion.size() < 2) continue;
      std::size_t slot = rnd.below(n.principal.size());
      std::size_t from = n.principal[slot];
      std::vector<std::size_t> others;
      for (std::size_t i = 0; i < n.conclusion.size(); ++i) {
        if (n.conclusion[i] != n.conclusion[from]) others.push_back(i);
      }
      if (others.empty()) continue;
      std::size_t to = others[rnd.below(others.size())];
      edit = [slot, to](ProofNode& m) { m.principal[slot] = to; };
    }
    std::size_t idx = k;
    return edit_node(p, idx, edit);
  }
  return std::nullopt;
}

void mutation() {
  auto proofs = valid_proofs(500, 11);
  std::size_t valid = 0;
  for (auto& p : proofs) valid += !check_proof(p, Profile::core());
  gen::Random rnd(12);
  std::size_t made = 0, rejected = 0;
  std::size_t by_kind[3] = {0, 0, 0};
  for (std::size_t i = 0; made < 500 && i < 5000; ++i) {
    int kind = static_cast<int>(made % 3);
    auto m = mutate(proofs[i % proofs.size()], rnd, kind);
    if (!m) continue;
    ++made;
    ++by_kind[kind];
    rejected += check_proof(*m, Profile::core()).has_value();
  }
  std::ostringstream os;
  os << valid << "/" << proofs.size() << " valid proofs re-check; " << rejected << "/" << made
     << " mutations rejected (rule swap " << by_kind[0] << ", dropped premiss " << by_kind[1]
     << ", moved principal " << by_kind[2] << ")";
  report(2, valid == 500 && made == 500 && rejected == 500, os.str());
}

// ---------------------------------------------------------------------------

void interpolation() {
  auto t0 = Clock::now();
  oracle::Enumerator en;
  oracle::Mll mll;
  gen::Random rnd(21);
  std::size_t done = 0, ok = 0;
  std::string first_bad;
  std::set<std::string> seen;
  while (done < 200) {
    oracle::Seq s;
    for (std::size_t i = 0, k = 2 + rnd.below(3); i < k; ++i) {
      const auto& pool = en.of_size(rnd.below(4));
      s.push_back(pool[rnd.below(pool.size())]);
    }
    std::sort(s.begin(), s.end());
    std::string key;
    for (auto& f : s) key += f + ",";
    if (!seen.insert(key).second || !mll.provable(s)) continue;
    Sequent gamma, delta;
    for (auto& f : s) (rnd.coin() ? gamma : delta).push_back(oracle::to_formula(f));
    Sequent all = gamma;
    all.insert(all.end(), delta.begin(), delta.end());
    ++done;
    auto r = prove(all);
    bool good = false;
    std::string why;
    if (!r.proved()) {
      why = "not proved";
    } else {
      try {
        Interpolant in = interpolate(r.proof, gamma, delta);
        Sequent left = gamma, right{negate(in.formula)};
        left.push_back(in.formula);
        right.insert(right.end(), delta.begin(), delta.end());
        good = interpolant_literals_ok(in.formula, gamma, delta) && !check_proof(in.gamma_proof, Profile::core()) &&
               !check_proof(in.delta_proof, Profile::core()) && same_multiset(in.gamma_proof->conclusion, left) &&
               same_multiset(in.delta_proof->conclusion, right);
        if (!good) why = "interpolant " + print_formula(in.formula) + " fails the contract";
      } catch (const Error& e) {
        why = e.what();
      }
    }
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = print_sequent(gamma) + " ; " + print_sequent(delta) + ": " + why;
    }
  }
  double t = seconds_since(t0);
  std::ostringstream os;
  os << ok << "/" << done << " interpolants meet the contract, " << fmt(t) << " (limit 120s)";
  if (!first_bad.empty()) os << "; first failure " << first_bad;
  report(3, ok == done && t < 120, os.str());
}

// ---------------------------------------------------------------------------

void substitutivity() {
  auto proofs = valid_proofs(100, 31);
  gen::Random rnd(32);
  std::size_t ok = 0;
  for (auto& p : proofs) {
    std::set<std::pair<Atom, bool>> atoms;
    for (auto& f : p->conclusion) {
      auto s = signed_atoms(f);
      atoms.insert(s.begin(), s.end());
    }
    Atom a = atoms.empty() ? Atom::prop("a") : std::next(atoms.begin(), static_cast<std::ptrdiff_t>(rnd.below(atoms.size())))->first;
    Formula by = rnd.mell(2);
    Proof q = substitute_proof(p, a, by);
    Sequent want;
    for (auto& f : p->conclusion) want.push_back(substitute_atom(f, a, by));
    ok += !check_proof(q, Profile::core()) && same_multiset(q->conclusion, want);
  }
  std::ostringstream os;
  os << ok << "/" << proofs.size() << " substituted proofs re-check";
  report(4, ok == proofs.size() && proofs.size() == 100, os.str());
}

// ---------------------------------------------------------------------------

void paper_examples() {
  auto rs = run_paper_examples();
  std::size_t ok = 0;
  std::string bad;
  for (auto& r : rs) {
    if (r.ok) {
      ++ok;
    } else if (bad.empty()) {
      bad = r.name + ": " + r.detail;
    }
  }
  std::ostringstream os;
  os << ok << "/" << rs.size() << " examples behave as stated";
  if (!bad.empty()) os << "; first failure " << bad;
  report(5, ok == rs.size(), os.str());
}

// ---------------------------------------------------------------------------

std::vector<CorpusEntry> corpus;

void subject_reduction() {
  auto t0 = Clock::now();
  std::size_t failures = 0, steps = 0;
  std::string first;
  for (auto& e : corpus) {
    auto r = subject_reduction_check(e.env, e.process, 8);
    steps += r.tau_steps;
    failures += r.failures.size();
    if (!r.failures.empty() && first.empty()) {
      first = print_process(r.failures[0].from) + " -> " + print_process(r.failures[0].to);
    }
  }
  double t = seconds_since(t0);
  std::ostringstream os;
  os << corpus.size() << " corpus terms, " << steps << " τ-steps re-checked to depth 8, " << failures
     << " failures, " << fmt(t) << " (limit 600s)";
  if (!first.empty()) os << "; first failure " << first;
  report(6, corpus.size() >= 100 && failures == 0 && t < 600, os.str());
}

void congruence() {
  std::size_t agree = 0, n = 0;
  std::string first;
  auto compare = [&](const Formula& e, const Process& p, const Process& q) {
    ++n;
    auto a = check(e, p);
    auto b = check(e, q);
    if (a.status == b.status) {
      ++agree;
    } else if (first.empty()) {
      first = print_process(p) + " vs " + print_process(q);
    }
  };
  for (auto& e : corpus) compare(e.env, e.process, congruence_normalize(e.process));
  // scope extrusion: new x.(P | Q) ≡ new x.P | Q when x is not free in Q
  std::size_t extrusions = 0, typed_extrusions = 0;
  for (const char* j : {"given v : in bot, w : out bot |- new[1] u : in bot . (u<v> | u(x).x().0 | w<>)",
                        "given v : in bot, w : out bot |- new[1] u : in bot . (u(x).x().0 | u<v> | w<>)",
                        "given v : in bot, w : out bot |- new[w] u : in bot . (u<v> | *u(x).x().0 | w<>)"}) {
    Judgement jd = parse_judgement(j);
    const Process& inner = jd.process.body();
    Process extruded = Process::par(
        Process::make_new(jd.process.binder(), jd.process.payload(), jd.process.kind(), inner.left()),
        inner.right());
    Formula e = jd.env;
    auto s = synthesize(jd.process, NameTypes::from_environment(e));
    if (s.typed()) e = s.env;
    compare(e, jd.process, extruded);
    compare(e, extruded, jd.process);
    extrusions += 2;
    if (check(e, jd.process).typed()) ++typed_extrusions;
  }
  std::ostringstream os;
  os << agree << "/" << n << " checks agree across congruence (" << extrusions << " scope-extrusion pairs, " << typed_extrusions
     << "/3 typed)";
  if (!first.empty()) os << "; first disagreement " << first;
  report(7, agree == n && typed_extrusions == 3, os.str());
}

// ---------------------------------------------------------------------------

std::vector<std::string> sample_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto i = line.find_first_not_of(" \t\r");
    if (i != std::string::npos && line[i] != '#') out.push_back(line);
  }
  return out;
}

bool has_quest_or_bang(const Sequent& s) { return std::any_of(s.begin(), s.end(), [](auto& f) { return f.has_exponential(); }); }

void profiles() {
  std::vector<std::pair<std::string, std::string>> directions = {
      {"A⊗B ≤ A⅋B", "|- ~(a (*) b), a (%) b"}, {"A⅋B ≤ A⊗B", "|- ~(a (%) b), a (*) b"},
      {"1 ≤ ⊥", "|- ~1, bot"},                 {"⊥ ≤ 1", "|- ~bot, 1"},
      {"!A ≤ ?A", "|- ~(!a), ?a"},             {"?A ≤ !A", "|- ~(?a), !a"}};
  std::size_t kpt_ok = 0, core_ok = 0;
  std::vector<std::string> notes;
  oracle::Mll mll;
  for (auto& [label, text] : directions) {
    Sequent s = parse_sequent(text);
    kpt_ok += prove(s, Profile::kpt()).proved();
    auto r = prove(s, Profile::core());
    bool ok;
    if (has_quest_or_bang(s)) {
      ok = r.unknown() || r.refuted();
    } else {
      // the oracle speaks for the exponential-free directions
      oracle::Seq os;
      std::function<std::string(const Formula&)> enc = [&](const Formula& f) -> std::string {
        using T = Formula::Tag;
        switch (f.tag()) {
          case T::Atom: return f.atom().name;
          case T::NegAtom: {
            std::string n = f.atom().name;
            n[0] = static_cast<char>(std::toupper(n[0]));
            return n;
          }
          case T::One: return "1";
          case T::Bot: return "0";
          case T::Tensor: return "*" + enc(f.left()) + enc(f.right());
          case T::Par: return "%" + enc(f.left()) + enc(f.right());
          default: return "?";
        }
      };
      for (auto& f : s) os.push_back(enc(f));
      ok = r.refuted() && !mll.provable(os);
    }
    core_ok += ok;
    if (!ok) notes.push_back(label + " is " + status_name(r.status) + " under core");
  }
  std::size_t typed = 0, total = 0;
  std::vector<std::string> corpora_notes;
  for (auto* sys : {"kpt", "hyb", "dcpt"}) {
    auto ls = sample_lines(std::string(PICT_SAMPLES_DIR) + "/encodings/" + sys + ".txt");
    std::size_t t = 0;
    for (auto& l : ls) {
      try {
        Translation tr = translate_source(*source_from_name(sys), l);
        t += check(tr.env, tr.process, tr.profile).typed();
      } catch (const Error&) {
      }
    }
    typed += t;
    total += ls.size();
    corpora_notes.push_back(std::string(sys) + " " + std::to_string(t) + "/" + std::to_string(ls.size()));
    if (ls.size() < 10) notes.push_back(std::string(sys) + " corpus has fewer than 10 judgements");
  }
  std::ostringstream os;
  os << "kpt proves " << kpt_ok << "/6 directions; core behaves as expected on " << core_ok
     << "/6; translated corpora typed:";
  for (auto& c : corpora_notes) os << " " << c;
  for (auto& n : notes) os << "; " << n;
  bool pass = kpt_ok == 6 && core_ok == 6 && typed == total && notes.empty();
  // ⊢ ?a⊥, ?a has a plain MELL proof (two derelictions); see README
  bool only_known = kpt_ok == 6 && core_ok == 5 && typed == total && notes.size() == 1 &&
                    notes[0].rfind("!A ≤ ?A is Proved", 0) == 0;
  report(8, pass, os.str(), only_known);
}

// ---------------------------------------------------------------------------

void prefix_commutation() {
  gen::Random rnd(91);
  std::vector<Behaviour> leaves = {Behaviour::input(Behaviour::one()), Behaviour::input(Behaviour::bot()),
                                   Behaviour::output(Behaviour::one()), Behaviour::output(Behaviour::bot())};
  auto use = [](const Name& x, const Behaviour& leaf) {
    return leaf.capability().polarity == Polarity::Output ? Process::output(x, {})
                                                          : Process::input(x, {}, Process::nop());
  };
  std::size_t ok = 0, made = 0;
  std::set<std::string> seen;
  std::string first;
  while (made < 20) {
    // u receives one or two names, v receives one
    std::size_t nx = 1 + rnd.below(2);
    Behaviour a = leaves[rnd.below(4)];
    NameList xs{"x"};
    std::vector<Behaviour> xleaves{a};
    if (nx == 2) {
      Behaviour a2 = leaves[rnd.below(4)];
      a = rnd.coin() ? Behaviour::tensor(a, a2) : Behaviour::par(a, a2);
      xs.push_back("x2");
      xleaves.push_back(a2);
    }
    Behaviour b = leaves[rnd.below(4)];
    Process body = use("y", b);
    for (std::size_t i = 0; i < xs.size(); ++i) body = Process::par(use(xs[i], xleaves[i]), body);
    Process p1 = Process::input("u", xs, Process::input("v", {"y"}, body));
    Process p2 = Process::input("v", {"y"}, Process::input("u", xs, body));
    Formula types = Formula::tensor(in_literal("u", a), in_literal("v", b));
    if (!seen.insert(print_judgement(types, p1)).second) continue;
    ++made;
    auto s = synthesize(p1, NameTypes::from_environment(types));
    bool good = s.typed() && check(s.env, p1).typed() && check(s.env, p2).typed();
    if (good) {
      ++ok;
    } else if (first.empty()) {
      first = print_judgement(types, p1);
    }
  }
  std::ostringstream os;
  os << ok << "/" << made << " instances type both prefix orders at one environment";
  if (!first.empty()) os << "; first failure " << first;
  report(9, ok == made, os.str());
}

void termination() {
  std::size_t longest = 0;
  for (auto& e : corpus) longest = std::max(longest, longest_tau_path(e.process, 201));
  std::ostringstream os;
  os << "longest τ-path over " << corpus.size() << " corpus terms: " << longest << " steps (bound 200)";
  report(10, longest <= 200, os.str());
}

// ---------------------------------------------------------------------------

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string("cd '") + PICT_SAMPLES_DIR + "' && '" + PICT_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void round_trip() {
  gen::Random rnd(111);
  std::size_t ok = 0, n = 0;
  for (int i = 0; i < 250; ++i) {
    Formula f = rnd.mell(4);
    Formula e = rnd.environment(3);
    Behaviour b = rnd.behaviour(4);
    Process p = rnd.process(5);
    ok += parse_formula(print_formula(f)) == f;
    ok += parse_formula(print_formula(e)) == e;
    ok += parse_behaviour(print_behaviour(b)) == b;
    ok += parse_process(print_process(p)) == p;
    n += 4;
  }
  std::size_t fx = 0, fx_ok = 0;
  std::set<int> codes;
  std::string first;
  std::ifstream table(std::string(PICT_SAMPLES_DIR) + "/fixtures.tsv");
  std::string line;
  while (std::getline(table, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, '\t')) cols.push_back(c);
    if (cols.size() < 2) continue;
    ++fx;
    int want = std::stoi(cols[1]);
    auto [code, out] = run_cli(cols[0]);
    bool good = code == want && (cols.size() < 3 || cols[2].empty() || out.find(cols[2]) != std::string::npos);
    codes.insert(code);
    if (good) {
      ++fx_ok;
    } else if (first.empty()) {
      first = cols[0] + " exited " + std::to_string(code);
    }
  }
  bool all_codes = codes.count(0) && codes.count(1) && codes.count(2) && codes.count(64) && codes.count(65);
  std::ostringstream os;
  os << ok << "/" << n << " round trips; " << fx_ok << "/" << fx << " CLI fixtures"
     << (all_codes ? " covering exit codes 0 1 2 64 65" : " (some exit code not covered)");
  if (!first.empty()) os << "; first mismatch " << first;
  report(11, ok == n && n >= 1000 && fx_ok == fx && fx > 0 && all_codes, os.str());
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  prover_oracle();
  mutation();
  interpolation();
  substitutivity();
  paper_examples();
  corpus = generate_corpus(100, 7);
  subject_reduction();
  congruence();
  profiles();
  prefix_commutation();
  termination();
  round_trip();
  std::size_t passed = 0, known = 0;
  for (auto& l : lines) {
    passed += l.pass;
    known += !l.pass && l.known_conflict;
  }
  std::cout << passed << "/" << lines.size() << " criteria pass";
  if (known) std::cout << ", " << known << " failing on a documented conflict";
  std::cout << " (" << fmt(seconds_since(t0)) << ")" << std::endl;
  return passed + known == lines.size() ? 0 : 1;
}
