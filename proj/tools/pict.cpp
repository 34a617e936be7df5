// pict: command-line front end.
//
// Exit codes: 0 success/Typed/Proved, 1 Untyped/Refuted, 2 Unknown,
// 64 parse or usage error, 65 fragment error, 66 unreadable input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pict/encodings.hpp"
#include "pict/examples.hpp"
#include "pict/proof_ops.hpp"
#include "pict/serialize.hpp"

namespace {

using namespace pict;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUnknown = 2;
constexpr int kParse = 64;
constexpr int kFragment = 65;
constexpr int kNoInput = 66;

struct RunConfig {
  std::string profile = "core";
  bool profile_given = false;
  std::string format = "text";
  std::string budget;
  Budget resolved;

  bool json() const { return format == "json"; }
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A sequent argument is given inline when it starts with the turnstile.
std::pair<std::string, std::string> sequent_source(const std::string& arg) {
  std::size_t i = arg.find_first_not_of(" \t\n");
  if (i != std::string::npos && arg.compare(i, 2, "|-") == 0) return {arg, ""};
  return {read_file(arg), arg};
}

Profile resolve_profile(const std::string& name) {
  auto p = profile_from_name(name);
  if (!p) throw InputError("unknown profile '" + name + "'");
  return Profile::named(*p);
}

// `# profile: NAME` in a judgement file selects the profile unless one is
// given on the command line.
std::optional<std::string> profile_header(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find("# profile:");
    if (pos == std::string::npos) continue;
    std::string rest = line.substr(pos + 10);
    rest.erase(0, rest.find_first_not_of(" \t"));
    rest.erase(rest.find_last_not_of(" \t\r") + 1);
    return rest;
  }
  return std::nullopt;
}

// Judgement files hold one or more judgements, each starting with `given`
// at the beginning of a line.
std::vector<std::string> split_judgements(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line, cur;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t");
    bool starts = i != std::string::npos && line.compare(i, 5, "given") == 0 &&
                  (line.size() == i + 5 || !detail::ident_char(line[i + 5]));
    if (starts && !cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
    cur += line + "\n";
  }
  if (!cur.empty()) out.push_back(cur);
  // leading comments belong to the first judgement
  if (out.size() > 1 && out.front().find("given") == std::string::npos) {
    out[1] = out[0] + out[1];
    out.erase(out.begin());
  }
  return out;
}

void print_proof_tree(std::ostream& os, const Proof& p, int indent) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << rule_name(p->rule);
  if (!p->axiom.empty()) os << " [" << p->axiom << "]";
  os << "  " << print_sequent(p->conclusion) << "\n";
  for (auto& q : p->premises) print_proof_tree(os, q, indent + 1);
}

void print_derivation_tree(std::ostream& os, const Derivation& d, int indent) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << drule_name(d->rule) << "  "
     << print_judgement(d->env, d->process) << "\n";
  for (auto& q : d->premises) print_derivation_tree(os, q, indent + 1);
}

int status_code(CheckOutcome::Status s) {
  switch (s) {
    case CheckOutcome::Status::Typed: return kOk;
    case CheckOutcome::Status::Untyped: return kNegative;
    case CheckOutcome::Status::Unknown: return kUnknown;
  }
  return kUnknown;
}

int status_code(ProveOutcome::Status s) {
  switch (s) {
    case ProveOutcome::Status::Proved: return kOk;
    case ProveOutcome::Status::Refuted: return kNegative;
    case ProveOutcome::Status::Unknown: return kUnknown;
  }
  return kUnknown;
}

// Untyped dominates Unknown when several judgements are checked.
int combine(int a, int b) {
  if (a == kNegative || b == kNegative) return kNegative;
  return std::max(a, b);
}

void emit(const RunConfig& cfg, const Json& j, const std::string& text) {
  if (cfg.json()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

int run_check(const RunConfig& cfg, const std::string& path) {
  std::string text = read_file(path);
  std::string profile_name = cfg.profile;
  if (!cfg.profile_given) {
    if (auto h = profile_header(text)) profile_name = *h;
  }
  Profile profile = resolve_profile(profile_name);
  int code = kOk;
  Json results = Json::array();
  std::ostringstream os;
  for (auto& chunk : split_judgements(text)) {
    Judgement j = parse_judgement(chunk, path);
    auto c = check(j.env, j.process, profile, cfg.resolved);
    code = combine(code, status_code(c.status));
    Json r;
    r["status"] = status_name(c.status);
    r["environment"] = print_formula(j.env);
    r["process"] = print_process(j.process);
    r["obligations"] = c.obligations;
    if (c.derivation) r["derivation"] = derivation_to_json(c.derivation);
    results.push_back(r);
    os << status_name(c.status) << "  " << print_judgement(j.env, j.process) << "\n";
    for (auto& o : c.obligations) os << "  " << o << "\n";
  }
  emit(cfg, {{"command", "check"}, {"profile", profile_name}, {"results", results}}, os.str());
  return code;
}

int run_infer(const RunConfig& cfg, const std::string& path) {
  std::string text = read_file(path);
  Profile profile = resolve_profile(cfg.profile);
  std::size_t i = text.find_first_not_of(" \t\r\n");
  NameTypes types;
  Process p;
  if (i != std::string::npos && text.compare(i, 5, "given") == 0) {
    Judgement j = parse_judgement(text, path);
    types = NameTypes::from_environment(j.env);
    p = j.process;
  } else {
    p = parse_process(text, path);
  }
  auto c = synthesize(p, types, profile, cfg.resolved);
  Json j{{"command", "infer"}, {"profile", cfg.profile}, {"status", status_name(c.status)},
         {"process", print_process(p)}};
  std::ostringstream os;
  os << status_name(c.status) << "\n";
  if (c.typed()) {
    j["environment"] = print_formula(c.env);
    j["derivation"] = derivation_to_json(c.derivation);
    os << "environment: " << print_formula(c.env) << "\n";
    print_derivation_tree(os, c.derivation, 0);
  }
  j["obligations"] = c.obligations;
  for (auto& o : c.obligations) os << "  " << o << "\n";
  emit(cfg, j, os.str());
  return status_code(c.status);
}

int run_prove(const RunConfig& cfg, const std::string& arg) {
  auto [text, file] = sequent_source(arg);
  Sequent s = parse_sequent(text, file);
  auto r = prove(s, resolve_profile(cfg.profile), cfg.resolved);
  Json j{{"command", "prove"}, {"profile", cfg.profile}, {"status", status_name(r.status)},
         {"sequent", print_sequent(s)}};
  if (r.proof) j["proof"] = proof_to_json(r.proof);
  std::ostringstream os;
  os << status_name(r.status) << "  " << print_sequent(s) << "\n";
  if (r.proof) print_proof_tree(os, r.proof, 1);
  if (!r.diagnostics.empty()) os << "  " << r.diagnostics << "\n";
  emit(cfg, j, os.str());
  return status_code(r.status);
}

int run_interpolate(const RunConfig& cfg, const std::string& arg) {
  auto [text, file] = sequent_source(arg);
  SplitSequent s = parse_split_sequent(text, file);
  Sequent all = s.gamma;
  all.insert(all.end(), s.delta.begin(), s.delta.end());
  auto r = prove(all, resolve_profile(cfg.profile), cfg.resolved);
  Json j{{"command", "interpolate"}, {"profile", cfg.profile}, {"status", status_name(r.status)},
         {"gamma", print_sequent(s.gamma)}, {"delta", print_sequent(s.delta)}};
  std::ostringstream os;
  if (!r.proved()) {
    os << status_name(r.status) << "  " << print_sequent(all) << "\n";
    emit(cfg, j, os.str());
    return status_code(r.status);
  }
  Interpolant in = interpolate(r.proof, s.gamma, s.delta);
  j["interpolant"] = print_formula(in.formula);
  j["gamma_proof"] = proof_to_json(in.gamma_proof);
  j["delta_proof"] = proof_to_json(in.delta_proof);
  os << print_formula(in.formula) << "\n";
  emit(cfg, j, os.str());
  return kOk;
}

Process process_of(const std::string& path) {
  std::string text = read_file(path);
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text.compare(i, 5, "given") == 0) return parse_judgement(text, path).process;
  return parse_process(text, path);
}

int run_reduce(const RunConfig& cfg, const std::string& path, std::size_t steps) {
  Trace t = trace_leftmost(process_of(path), steps);
  Process last = t.steps.empty() ? t.root : t.steps.back().process;
  Json j{{"command", "reduce"},
         {"steps", t.steps.size()},
         {"process", print_process(last)},
         {"exhausted", t.exhausted && t.steps.size() <= steps}};
  emit(cfg, j, print_process(last) + "\n");
  return kOk;
}

int run_trace(const RunConfig& cfg, const std::string& path, std::size_t steps, bool all) {
  Process p = process_of(path);
  if (all) {
    TraceTree t = trace_all(p, steps);
    Json j = trace_tree_to_json(t);
    std::ostringstream os;
    std::function<void(const TraceTree&, int)> go = [&](const TraceTree& n, int indent) {
      os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << print_process(n.process)
         << (n.truncated ? "  ..." : "") << "\n";
      for (auto& [label, c] : n.children) {
        os << std::string(static_cast<std::size_t>(indent) * 2 + 2, ' ') << "-" << label.str() << "->\n";
        go(c, indent + 2);
      }
    };
    go(t, 0);
    emit(cfg, {{"command", "trace"}, {"tree", j}}, os.str());
    return kOk;
  }
  Trace t = trace_leftmost(p, steps);
  std::ostringstream os;
  os << print_process(t.root) << "\n";
  for (auto& s : t.steps) os << "  -" << s.label.str() << "-> " << print_process(s.process) << "\n";
  if (!t.exhausted) os << "  (step bound reached)\n";
  Json j = trace_to_json(t);
  j["command"] = "trace";
  emit(cfg, j, os.str());
  return kOk;
}

int run_translate(const RunConfig& cfg, const std::string& from, const std::string& path) {
  auto sys = source_from_name(from);
  if (!sys) throw InputError("unknown source system '" + from + "'");
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  Json items = Json::array();
  std::string profile;
  std::ostringstream body;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    Translation t = translate_source(*sys, line, path);
    profile = profile_name(t.profile.name);
    std::string j = print_judgement(t.env, t.process);
    items.push_back(j);
    body << j << "\n";
  }
  if (profile.empty()) profile = from == "dcpt" ? "core" : from;
  emit(cfg, {{"command", "translate"}, {"from", from}, {"profile", profile}, {"judgements", items}},
       "# profile: " + profile + "\n" + body.str());
  return kOk;
}

int run_selftest(const RunConfig& cfg) {
  auto results = run_paper_examples();
  Json items = Json::array();
  std::ostringstream os;
  bool ok = true;
  for (auto& r : results) {
    ok = ok && r.ok;
    items.push_back({{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    os << (r.ok ? "ok    " : "FAIL  ") << r.name << "  " << r.detail << "\n";
  }
  emit(cfg, {{"command", "selftest"}, {"passed", ok}, {"examples", items}}, os.str());
  return ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typing π-calculus processes with MELL environments"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--profile", cfg.profile, "core, kpt or hyb")->check(CLI::IsMember({"core", "kpt", "hyb"}));
  app.add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--budget", cfg.budget, "depth=N,contractions=N,nodes=N");

  std::string file, from;
  std::size_t steps = 1;
  std::size_t trace_steps = 200;
  bool all = false;

  auto* check_cmd = app.add_subcommand("check", "check a judgement file");
  check_cmd->add_option("file", file)->required();
  auto* infer_cmd = app.add_subcommand("infer", "synthesize an environment for a process");
  infer_cmd->add_option("file", file)->required();
  auto* prove_cmd = app.add_subcommand("prove", "search for a proof of a sequent");
  prove_cmd->add_option("sequent", file, "inline `|- ...` or a file")->required();
  auto* interp_cmd = app.add_subcommand("interpolate", "interpolant of a split sequent `|- G ; D`");
  interp_cmd->add_option("sequent", file, "inline `|- ...` or a file")->required();
  auto* reduce_cmd = app.add_subcommand("reduce", "apply leftmost τ-steps");
  reduce_cmd->add_option("file", file)->required();
  reduce_cmd->add_option("--steps", steps);
  auto* trace_cmd = app.add_subcommand("trace", "list the τ-steps of a process");
  trace_cmd->add_option("file", file)->required();
  trace_cmd->add_option("--steps", trace_steps);
  trace_cmd->add_flag("--all", all, "every branch instead of the leftmost one");
  auto* translate_cmd = app.add_subcommand("translate", "translate a kpt, hyb or dcpt file into core syntax");
  translate_cmd->add_option("--from", from)->required()->check(CLI::IsMember({"kpt", "hyb", "dcpt"}));
  translate_cmd->add_option("file", file)->required();
  auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in example suite");

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }
  cfg.profile_given = app.count("--profile") > 0;

  try {
    if (const char* env = std::getenv("PICT_MELL_BUDGET")) cfg.resolved = parse_budget(env, cfg.resolved);
    if (!cfg.budget.empty()) cfg.resolved = parse_budget(cfg.budget, cfg.resolved);
  } catch (const Error& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kParse;
  }

  try {
    if (*check_cmd) return run_check(cfg, file);
    if (*infer_cmd) return run_infer(cfg, file);
    if (*prove_cmd) return run_prove(cfg, file);
    if (*interp_cmd) return run_interpolate(cfg, file);
    if (*reduce_cmd) return run_reduce(cfg, file, steps);
    if (*trace_cmd) return run_trace(cfg, file, trace_steps, all);
    if (*translate_cmd) return run_translate(cfg, from, file);
    if (*selftest_cmd) return run_selftest(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SchemaError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kNoInput;
  } catch (const Error& e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return kFragment;
  }
  return kParse;
}
