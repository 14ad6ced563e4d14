#include "ptsem/conflict.hpp"

#include <algorithm>
#include <limits>

namespace ptsem {

bool in_conflict(const Net& net, const Multiset& marking, const Multiset& step) {
  if (step.empty()) return false;
  for (const auto& [t, mult] : step.entries()) {
    if (!step_enabled(net, marking, Multiset::single(t, mult))) return false;
  }
  return !step_enabled(net, marking, step);
}

namespace {

// Largest k with k·•t ⊆ M; zero when t is not enabled.
Multiset::Count max_multiplicity(const Net& net, const Multiset& marking, NodeId t) {
  Multiset::Count result = std::numeric_limits<Multiset::Count>::max();
  for (const auto& [place, weight] : net.pre[t].entries()) {
    result = std::min(result, marking.count(place) / weight);
  }
  return result;
}

// Multisets over `candidates` with the given total size, multiplicities
// bounded per transition, in lexicographic order of the count vectors.
void conflicting_multisets(const Net& net, const Multiset& marking,
                           const std::vector<std::pair<NodeId, Multiset::Count>>& candidates,
                           std::size_t level, std::vector<Multiset::Entry>& current,
                           Multiset::Count remaining, std::vector<Multiset>& hits) {
  if (remaining == 0) {
    Multiset step{std::vector<Multiset::Entry>(current)};
    if (!step_enabled(net, marking, step)) hits.push_back(std::move(step));
    return;
  }
  if (level == candidates.size()) return;
  auto [t, cap] = candidates[level];
  for (Multiset::Count take = 0; take <= std::min(cap, remaining); ++take) {
    if (take > 0) current.emplace_back(t, take);
    conflicting_multisets(net, marking, candidates, level + 1, current, remaining - take, hits);
    if (take > 0) current.pop_back();
  }
}

}  // namespace

ConflictReport check_conflict_freeness(const Net& net, ConflictMode mode,
                                       const ExploreBounds& bounds) {
  ConflictReport report;
  report.property = mode == ConflictMode::Binary ? "binary_conflict_free" : "conflict_free";

  ReachResult reach = reachable_markings(net, bounds);
  for (const Multiset& marking : reach.markings) {
    std::vector<std::pair<NodeId, Multiset::Count>> candidates;
    Multiset::Count total_cap = 0;
    for (NodeId t : net.transitions) {
      Multiset::Count cap = max_multiplicity(net, marking, t);
      if (cap > 0) {
        candidates.emplace_back(t, cap);
        total_cap = checked_add(total_cap, cap);
      }
    }
    if (mode == ConflictMode::Binary) {
      // {t,t} never qualifies: its only restriction is the multiset itself.
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
          Multiset step{{candidates[i].first, 1}, {candidates[j].first, 1}};
          if (!step_enabled(net, marking, step)) {
            Witness w;
            w.marking = marking;
            w.step = std::move(step);
            report.verdict = Verdict::fails(std::move(w));
            return report;
          }
        }
      }
    } else {
      std::vector<Multiset::Entry> current;
      std::vector<Multiset> hits;
      for (Multiset::Count size = 2; size <= total_cap && hits.empty(); ++size) {
        conflicting_multisets(net, marking, candidates, 0, current, size, hits);
      }
      if (!hits.empty()) {
        Witness w;
        w.marking = marking;
        w.step = hits.front();
        report.verdict = Verdict::fails(std::move(w));
        return report;
      }
    }
  }

  report.verdict = reach.verdict.is_holds()
                       ? Verdict::holds()
                       : Verdict::unknown(*reach.verdict.bound_hit);
  return report;
}

ConflictReport check_structural(const Net& net, const ExploreBounds& bounds) {
  ConflictReport report;
  report.property = "structural";

  ReachResult reach = reachable_markings(net, bounds);
  for (const Multiset& marking : reach.markings) {
    for (std::size_t i = 0; i < net.transitions.size(); ++i) {
      for (std::size_t j = i; j < net.transitions.size(); ++j) {
        NodeId t = net.transitions[i];
        NodeId u = net.transitions[j];
        Multiset step = combine(Multiset::single(t), Multiset::single(u), CombineMode::Sum);
        if (!step_enabled(net, marking, step)) continue;
        Multiset shared = combine(net.pre[t], net.pre[u], CombineMode::Intersection);
        if (!shared.empty()) {
          Witness w;
          w.marking = marking;
          w.step = std::move(step);
          w.shared_place = shared.entries().front().first;
          report.verdict = Verdict::fails(std::move(w));
          return report;
        }
      }
    }
  }

  report.verdict = reach.verdict.is_holds()
                       ? Verdict::holds()
                       : Verdict::unknown(*reach.verdict.bound_hit);
  return report;
}

}  // namespace ptsem
