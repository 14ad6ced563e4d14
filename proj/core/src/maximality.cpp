#include "ptsem/maximality.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ptsem {

namespace {

bool cut_within_token_bound(const Multiset& marking, Multiset::Count cap) {
  for (const auto& [_, c] : marking.entries()) {
    if (c > cap) return false;
  }
  return true;
}

}  // namespace

MaximalityReport enumerate_maximal(const Net& net, const ExploreBounds& bounds,
                                   ClassBudget budget) {
  MaximalityReport report;
  bool closed = true;
  std::string bound_hit;
  auto note_bound = [&](const std::string& which) {
    if (closed) bound_hit = which;
    closed = false;
  };

  std::map<CanonicalForm, Process> maximal;
  std::set<CanonicalForm> visited;
  std::vector<Process> stack;

  try {
    Process init = initial_process(net);
    visited.insert(canonical_form(init, budget.canon));
    stack.push_back(std::move(init));
    while (!stack.empty()) {
      Process p = std::move(stack.back());
      stack.pop_back();
      Multiset cut_marking = p.cut_marking();
      auto enabled = enabled_transitions(net, cut_marking);
      if (enabled.empty()) {
        maximal.emplace(canonical_form(p, budget.canon), std::move(p));
        continue;
      }
      if (p.events.size() >= bounds.max_seq_len) {
        note_bound("max_seq_len");
        continue;
      }
      for (NodeId t : enabled) {
        for (const auto& choice : consumption_choices(net, p, t)) {
          Process q = extend_with(net, p, t, choice);
          if (!cut_within_token_bound(q.cut_marking(), bounds.max_tokens_per_place)) {
            note_bound("max_tokens_per_place");
            continue;
          }
          CanonicalForm f = canonical_form(q, budget.canon);
          if (visited.count(f)) continue;
          if (visited.size() >= bounds.max_states) {
            note_bound("max_states");
            continue;
          }
          visited.insert(std::move(f));
          stack.push_back(std::move(q));
        }
      }
    }

    report.maximal_process_count = maximal.size();

    ClassCache cache(net, budget);
    std::map<CanonicalForm, const Process*> class_examples;
    std::map<CanonicalForm, std::uint32_t> class_sizes;
    // Identify everything first so the class table settles, then snapshot;
    // snapshotting itself can heal splits, so repeat until quiet.
    std::map<const Process*, ClassCache::ClassId> ids;
    for (const auto& [form, process] : maximal) ids[&process] = cache.identify(process);
    while (true) {
      std::uint64_t merges_before = cache.merge_count();
      class_examples.clear();
      class_sizes.clear();
      for (const auto& [form, process] : maximal) {
        SwapClass cls = cache.to_class(ids[&process]);
        class_examples.emplace(cls.canonical_form, &process);
        ++class_sizes[cls.canonical_form];
      }
      if (cache.merge_count() == merges_before) break;
    }
    report.maximal_class_count = class_examples.size();
    for (const auto& [class_form, example] : class_examples) {
      ClassReport cr;
      cr.cls = SwapClass{class_form, class_sizes[class_form],
                         example->transition_multiset()};
      cr.example_linearization = linearize(*example);
      report.classes.push_back(std::move(cr));
    }
  } catch (const BudgetError& e) {
    note_bound(e.budget);
  }

  report.completeness = closed ? Verdict::holds() : Verdict::unknown(bound_hit);
  report.counts_are_lower_bounds = !closed;
  return report;
}

namespace {

// The maximality notions are only decided when the net's whole behaviour
// was enumerated.
std::optional<Verdict> closure_gate(const Net& net, const ExploreBounds& bounds) {
  Verdict v = explore(net, bounds).verdict;
  if (!v.is_holds()) {
    return Verdict::unknown("exploration did not close: " + v.bound_hit.value_or("bound"));
  }
  return std::nullopt;
}

// The cut marking is invariant across a class: swaps only exchange
// outgoing arcs between same-place conditions, so the multiset of places
// left without a consumer is unchanged, and isomorphisms preserve it
// outright. One member therefore decides extensibility for all of them.
Verdict decide_maximal(const Net& net, const SwapClass& cls) {
  Process member = decode_form(cls.canonical_form);
  Multiset cut_marking = member.cut_marking();
  auto enabled = enabled_transitions(net, cut_marking);
  if (enabled.empty()) return Verdict::holds();
  Witness w;
  w.marking = cut_marking;
  w.step = Multiset::single(enabled.front());
  return Verdict::fails(std::move(w));
}

}  // namespace

Verdict weakly_maximal(const Net& net, const SwapClass& cls, const ExploreBounds& bounds,
                       ClassBudget budget) {
  (void)budget;
  if (auto gate = closure_gate(net, bounds)) return *gate;
  Verdict v = decide_maximal(net, cls);
  if (v.is_fails()) v.witness->note = "every member's cut enables a transition";
  return v;
}

Verdict class_maximal(const Net& net, const SwapClass& cls, const ExploreBounds& bounds,
                      ClassBudget budget) {
  (void)budget;
  if (auto gate = closure_gate(net, bounds)) return *gate;
  Verdict v = decide_maximal(net, cls);
  if (v.is_fails()) v.witness->note = "a member admits an extension";
  return v;
}

CorollaryReport corollary_check(const Net& net, const ExploreBounds& bounds, ClassBudget budget) {
  CorollaryReport report;
  report.structural = check_structural(net, bounds);
  report.conflict_free = check_conflict_freeness(net, ConflictMode::General, bounds);
  report.binary_conflict_free = check_conflict_freeness(net, ConflictMode::Binary, bounds);
  report.maximality = enumerate_maximal(net, bounds, budget);

  if (!report.structural.verdict.is_holds()) {
    report.biconditional = Verdict::unknown("not a structural conflict net");
    report.note =
        "the conflict-freeness/unique-maximal-class correspondence is asserted only for "
        "structural conflict nets";
    return report;
  }
  if (!report.maximality.completeness.is_holds() ||
      report.conflict_free.verdict.is_unknown()) {
    report.biconditional = Verdict::unknown("analysis incomplete within bounds");
    report.note = "maximal classes or conflicts were not exhaustively enumerated";
    return report;
  }

  bool conflict_free = report.conflict_free.verdict.is_holds();
  bool unique_class = report.maximality.maximal_class_count == 1;
  if (conflict_free == unique_class) {
    report.biconditional = Verdict::holds();
    report.note = conflict_free ? "conflict-free with exactly one maximal class"
                                : "conflicting with several or no maximal classes";
  } else {
    Witness w;
    if (report.conflict_free.verdict.witness) w = *report.conflict_free.verdict.witness;
    w.note = "conflict-freeness and unique-maximal-class disagree";
    report.biconditional = Verdict::fails(std::move(w));
    report.note = "disagreement indicates an implementation defect";
  }
  return report;
}

}  // namespace ptsem
