#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ptsem/report.hpp"

namespace {

using namespace ptsem;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

struct Options {
  std::string net_path;
  std::string seq;
  std::string out_path;
  std::string policy = "fifo";
  std::size_t max_seq_len = 12;
  bool max_seq_len_given = false;
  Multiset::Count max_tokens = 8;
  std::size_t max_states = 100000;
  std::size_t class_budget = 20000;

  ExploreBounds bounds() const { return {max_seq_len, max_tokens, max_states}; }
  ClassBudget budget() const {
    ClassBudget b;
    b.max_members = class_budget;
    return b;
  }
  TokenPolicy token_policy() const {
    return policy == "lifo" ? TokenPolicy::Lifo : TokenPolicy::Fifo;
  }
  // Trace-level analyses default to a shorter horizon than simulation
  // bounds; an explicit --max-seq-len overrides it.
  std::size_t trace_horizon() const { return max_seq_len_given ? max_seq_len : 6; }
};

void add_common(CLI::App* cmd, Options& opt, bool with_seq) {
  cmd->add_option("net", opt.net_path, "net description file")->required();
  cmd->add_option("--max-seq-len", opt.max_seq_len, "firing sequence length bound")
      ->each([&opt](const std::string&) { opt.max_seq_len_given = true; });
  cmd->add_option("--max-tokens", opt.max_tokens, "token bound per place");
  cmd->add_option("--max-states", opt.max_states, "state/sequence bound");
  cmd->add_option("--class-budget", opt.class_budget, "swap closure budget");
  cmd->add_option("--policy", opt.policy, "token pick policy (fifo|lifo)")
      ->check(CLI::IsMember({"fifo", "lifo"}));
  cmd->add_option("--out", opt.out_path, "write the JSON report to a file");
  if (with_seq) cmd->add_option("--seq", opt.seq, "space-separated transition word");
}

int emit(const Options& opt, const Json& report, int code) {
  std::string text = report.dump(2) + "\n";
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << opt.out_path << "\n";
      return kExitUsage;
    }
    out << text;
  }
  return code;
}

int worst_exit(const std::vector<Verdict>& verdicts) {
  bool any_unknown = false;
  for (const Verdict& v : verdicts) {
    if (v.is_fails()) return kExitFails;
    if (v.is_unknown()) any_unknown = true;
  }
  return any_unknown ? kExitUnknown : kExitHolds;
}

int verdict_exit(const Verdict& v) {
  if (v.is_fails()) return kExitFails;
  if (v.is_unknown()) return kExitUnknown;
  return kExitHolds;
}

int run_simulate(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "simulate";
  auto word = net.word(opt.seq);
  report["sequence"] = word_json(net, word);
  try {
    Multiset final_marking = fire_sequence(net, word);
    report["final_marking"] = multiset_json(net, final_marking);
    return emit(opt, report, kExitHolds);
  } catch (const NotEnabledError& e) {
    Json error = Json::object();
    error["message"] = e.what();
    if (e.position) error["position"] = *e.position;
    error["deficient_places"] = multiset_json(net, e.deficient);
    report["error"] = std::move(error);
    return emit(opt, report, kExitFails);
  }
}

int run_processes(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "processes";
  report["policy"] = opt.policy;
  auto word = net.word(opt.seq);
  report["sequence"] = word_json(net, word);
  try {
    Process p = proc(net, word, opt.token_policy());
    report["process"] = process_json(net, p);
    ProcessCut c = cut(p);
    Json cut_json = Json::object();
    cut_json["conditions"] = Json(c.conditions);
    cut_json["marking"] = multiset_json(net, c.marking);
    report["cut"] = std::move(cut_json);
    report["linearization"] = word_json(net, linearize(p));
    return emit(opt, report, kExitHolds);
  } catch (const NotEnabledError& e) {
    Json error = Json::object();
    error["message"] = e.what();
    if (e.position) error["position"] = *e.position;
    report["error"] = std::move(error);
    return emit(opt, report, kExitFails);
  }
}

int run_traces(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "traces";
  std::size_t horizon = opt.trace_horizon();
  report["length_bound"] = horizon;

  ExploreBounds bounds = opt.bounds();
  bounds.max_seq_len = horizon;
  ExploreResult fs = explore(net, bounds);
  Json classes = Json::array();
  std::set<std::vector<NodeId>> classified;
  Verdict closure_verdict = Verdict::holds();
  try {
    for (const auto& seq : fs.sequences) {
      if (classified.count(seq)) continue;
      TraceClass cls = trace_class(net, seq);
      for (const auto& member : cls.members) classified.insert(member);
      Json entry = Json::object();
      entry["canonical_member"] = word_json(net, cls.canonical_member());
      entry["size"] = cls.members.size();
      entry["transition_multiset"] = multiset_json(net, cls.transition_multiset);
      classes.push_back(std::move(entry));
    }
  } catch (const BudgetError& e) {
    closure_verdict = Verdict::unknown(e.budget);
  }
  report["sequence_count"] = fs.sequences.size();
  report["classes"] = std::move(classes);

  CorrespondenceReport corr = correspondence_check(net, horizon, opt.max_states, opt.budget());
  report["correspondence"] = correspondence_report_json(net, corr);
  if (closure_verdict.is_unknown() && !corr.verdict.is_fails()) {
    return emit(opt, report, kExitUnknown);
  }
  return emit(opt, report, verdict_exit(corr.verdict));
}

int run_conflicts(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "conflicts";
  std::vector<ConflictReport> checks{
      check_conflict_freeness(net, ConflictMode::General, opt.bounds()),
      check_conflict_freeness(net, ConflictMode::Binary, opt.bounds()),
      check_structural(net, opt.bounds()),
  };
  Json properties = Json::array();
  std::vector<Verdict> verdicts;
  for (const ConflictReport& check : checks) {
    properties.push_back(conflict_report_json(net, check));
    verdicts.push_back(check.verdict);
  }
  report["properties"] = std::move(properties);
  return emit(opt, report, worst_exit(verdicts));
}

int run_maximality(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "maximality";
  MaximalityReport max = enumerate_maximal(net, opt.bounds(), opt.budget());
  report["maximality"] = maximality_report_json(net, max);
  return emit(opt, report, max.completeness.is_holds() ? kExitHolds : kExitUnknown);
}

int run_corollary(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "corollary";
  CorollaryReport cor = corollary_check(net, opt.bounds(), opt.budget());
  report["corollary"] = corollary_report_json(net, cor);
  return emit(opt, report, verdict_exit(cor.biconditional));
}

int run_correspond(const Net& net, const Options& opt) {
  Json report;
  report["net"] = net.name;
  report["command"] = "correspond";
  CorrespondenceReport corr =
      correspondence_check(net, opt.trace_horizon(), opt.max_states, opt.budget());
  report["correspondence"] = correspondence_report_json(net, corr);
  return emit(opt, report, verdict_exit(corr.verdict));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal semantics analyses for place/transition nets"};
  app.require_subcommand(1);

  Options opt;
  auto* simulate = app.add_subcommand("simulate", "fire a transition word");
  add_common(simulate, opt, true);
  auto* processes = app.add_subcommand("processes", "build and dump a process");
  add_common(processes, opt, true);
  processes->add_flag("--dump", "kept for compatibility; the dump is always emitted");
  auto* traces = app.add_subcommand("traces", "trace classes and the correspondence report");
  add_common(traces, opt, false);
  auto* conflicts = app.add_subcommand("conflicts", "conflict and structural analyses");
  add_common(conflicts, opt, false);
  auto* maximality = app.add_subcommand("maximality", "maximal processes and classes");
  add_common(maximality, opt, false);
  auto* corollary = app.add_subcommand("corollary", "conflict-freeness vs maximal classes");
  add_common(corollary, opt, false);
  auto* correspond = app.add_subcommand("correspond", "trace/swap correspondence check");
  add_common(correspond, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  std::ifstream in(opt.net_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << opt.net_path << "\n";
    return kExitUsage;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  Net net;
  try {
    net = parse_net(buffer.str());
  } catch (const ParseError& e) {
    Json report;
    report["error"] = Json::object();
    report["error"]["message"] = e.what();
    report["error"]["line"] = e.line;
    std::cout << report.dump(2) << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      if (opt.seq.empty()) {
        std::cerr << "simulate requires --seq\n";
        return kExitUsage;
      }
      return run_simulate(net, opt);
    }
    if (processes->parsed()) return run_processes(net, opt);
    if (traces->parsed()) return run_traces(net, opt);
    if (conflicts->parsed()) return run_conflicts(net, opt);
    if (maximality->parsed()) return run_maximality(net, opt);
    if (corollary->parsed()) return run_corollary(net, opt);
    if (correspond->parsed()) return run_correspond(net, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
