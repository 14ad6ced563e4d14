#include "ptsem/traces.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

namespace ptsem {

namespace {

std::string word_text(const Net& net, std::span<const NodeId> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += net.name_of(word[i]);
  }
  return out;
}

// Markings after each prefix of the word: result[i] is the marking after
// the first i transitions.
std::vector<Multiset> prefix_markings(const Net& net, std::span<const NodeId> word) {
  std::vector<Multiset> out;
  out.reserve(word.size() + 1);
  out.push_back(net.initial_marking);
  for (NodeId t : word) out.push_back(fire_step(net, out.back(), Multiset::single(t)));
  return out;
}

}  // namespace

bool adjacent(const Net& net, std::span<const NodeId> sigma, std::span<const NodeId> rho) {
  fire_sequence(net, sigma);  // both must be firing sequences
  fire_sequence(net, rho);
  if (sigma.size() != rho.size() || sigma.size() < 2) return false;
  auto markings = prefix_markings(net, sigma);
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
    if (sigma[i] != rho[i + 1] || sigma[i + 1] != rho[i]) continue;
    bool same_elsewhere = true;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (j == i || j == i + 1) continue;
      if (sigma[j] != rho[j]) {
        same_elsewhere = false;
        break;
      }
    }
    if (!same_elsewhere) continue;
    Multiset step = combine(Multiset::single(sigma[i]), Multiset::single(sigma[i + 1]),
                            CombineMode::Sum);
    if (step_enabled(net, markings[i], step)) return true;
  }
  return false;
}

TraceClass trace_class(const Net& net, std::span<const NodeId> sigma, std::size_t budget) {
  fire_sequence(net, sigma);
  std::vector<NodeId> start(sigma.begin(), sigma.end());
  std::set<std::vector<NodeId>> visited{start};
  std::deque<std::vector<NodeId>> queue{start};
  while (!queue.empty()) {
    std::vector<NodeId> cur = std::move(queue.front());
    queue.pop_front();
    auto markings = prefix_markings(net, cur);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i] == cur[i + 1]) continue;  // transposition would be a no-op
      Multiset step = combine(Multiset::single(cur[i]), Multiset::single(cur[i + 1]),
                              CombineMode::Sum);
      if (!step_enabled(net, markings[i], step)) continue;
      std::vector<NodeId> next = cur;
      std::swap(next[i], next[i + 1]);
      if (visited.count(next)) continue;
      if (visited.size() >= budget) {
        throw BudgetError("trace class budget", "adjacency closure exceeded the class budget");
      }
      visited.insert(next);
      queue.push_back(std::move(next));
    }
  }
  TraceClass cls;
  cls.members.assign(visited.begin(), visited.end());
  std::vector<Multiset::Entry> entries;
  for (NodeId t : sigma) entries.emplace_back(t, 1);
  cls.transition_multiset = Multiset(std::move(entries));
  return cls;
}

bool trace_leq(const TraceClass& smaller, const TraceClass& larger) {
  if (!leq(smaller.transition_multiset, larger.transition_multiset)) return false;
  const std::size_t k = smaller.canonical_member().size();
  for (const auto& member : larger.members) {
    std::vector<NodeId> prefix(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(k));
    if (std::binary_search(smaller.members.begin(), smaller.members.end(), prefix)) return true;
  }
  return false;
}

CorrespondenceReport correspondence_check(const Net& net, std::size_t max_len,
                                          std::size_t state_cap, ClassBudget budget) {
  CorrespondenceReport report;
  report.length_bound = max_len;

  ExploreBounds bounds;
  bounds.max_seq_len = max_len;
  bounds.max_tokens_per_place = std::numeric_limits<Multiset::Count>::max();
  bounds.max_states = state_cap;
  ExploreResult fs = explore(net, bounds);
  if (fs.verdict.is_unknown() && *fs.verdict.bound_hit != "max_seq_len") {
    report.verdict = Verdict::unknown("sequence enumeration hit " + *fs.verdict.bound_hit);
    return report;
  }
  report.sequence_count = fs.sequences.size();

  std::map<std::vector<NodeId>, std::size_t> seq_index;
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) seq_index.emplace(fs.sequences[i], i);

  // Trace side: closure-assigned class ids.
  std::vector<std::size_t> trace_id(fs.sequences.size(), SIZE_MAX);
  std::vector<TraceClass> trace_classes;
  try {
    for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
      if (trace_id[i] != SIZE_MAX) continue;
      TraceClass cls = trace_class(net, fs.sequences[i]);
      std::size_t id = trace_classes.size();
      for (const auto& member : cls.members) {
        auto it = seq_index.find(member);
        if (it == seq_index.end()) continue;  // only possible at the length horizon
        trace_id[it->second] = id;
      }
      trace_classes.push_back(std::move(cls));
    }
  } catch (const BudgetError& e) {
    report.verdict = Verdict::unknown(e.budget);
    return report;
  }
  report.trace_class_count = trace_classes.size();

  // Swap side: identify the constructed process of every sequence, then
  // snapshot the class forms once the table has settled.
  ClassCache cache(net, budget);
  std::vector<ClassCache::ClassId> swap_id(fs.sequences.size());
  std::vector<CanonicalForm> swap_form(fs.sequences.size());
  std::set<CanonicalForm> swap_forms;
  try {
    for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
      swap_id[i] = cache.identify(proc(net, fs.sequences[i], TokenPolicy::Fifo));
    }
    // Snapshot forms; to_class can heal table splits (merges), in which
    // case the pass is repeated until the table is quiet.
    while (true) {
      std::uint64_t merges_before = cache.merge_count();
      swap_forms.clear();
      std::map<ClassCache::ClassId, CanonicalForm> form_of;
      for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
        ClassCache::ClassId root = cache.find(swap_id[i]);
        auto it = form_of.find(root);
        if (it == form_of.end()) {
          it = form_of.emplace(root, cache.to_class(root).canonical_form).first;
        }
        swap_form[i] = it->second;
        swap_forms.insert(swap_form[i]);
      }
      if (cache.merge_count() == merges_before) break;
    }
  } catch (const BudgetError& e) {
    report.verdict = Verdict::unknown(e.budget);
    return report;
  }
  report.swap_class_count = swap_forms.size();

  // The two partitions must coincide.
  std::map<std::size_t, CanonicalForm> trace_to_form;
  std::map<CanonicalForm, std::size_t> form_to_trace;
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    auto [it1, fresh1] = trace_to_form.emplace(trace_id[i], swap_form[i]);
    auto [it2, fresh2] = form_to_trace.emplace(swap_form[i], trace_id[i]);
    if (it1->second != swap_form[i] || it2->second != trace_id[i]) {
      // Locate the earliest sequence on the other side of the disagreement.
      std::size_t other = i;
      for (std::size_t j = 0; j < i; ++j) {
        bool same_trace = trace_id[j] == trace_id[i];
        bool same_swap = swap_form[j] == swap_form[i];
        if (same_trace != same_swap) {
          other = j;
          break;
        }
      }
      Witness w;
      w.sequence = fs.sequences[i];
      w.note = "trace/swap equivalence disagree on '" + word_text(net, fs.sequences[i]) +
               "' vs '" + word_text(net, fs.sequences[other]) + "'";
      report.verdict = Verdict::fails(std::move(w));
      return report;
    }
  }

  // Prefix orders must agree on all class pairs.
  std::vector<std::size_t> representative(trace_classes.size(), SIZE_MAX);
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    if (representative[trace_id[i]] == SIZE_MAX) representative[trace_id[i]] = i;
  }
  try {
    for (std::size_t a = 0; a < trace_classes.size(); ++a) {
      for (std::size_t b = 0; b < trace_classes.size(); ++b) {
        if (a == b) continue;
        bool t_le = trace_leq(trace_classes[a], trace_classes[b]);
        bool s_le =
            cache.id_leq(swap_id[representative[a]], swap_id[representative[b]]);
        ++report.leq_pairs_checked;
        if (t_le != s_le) {
          Witness w;
          w.sequence = fs.sequences[representative[a]];
          w.note = "prefix orders disagree: [" + word_text(net, fs.sequences[representative[a]]) +
                   "] vs [" + word_text(net, fs.sequences[representative[b]]) + "]: trace " +
                   (t_le ? "<=" : "!<=") + ", swap " + (s_le ? "<=" : "!<=");
          report.verdict = Verdict::fails(std::move(w));
          return report;
        }
      }
    }
  } catch (const BudgetError& e) {
    report.verdict = Verdict::unknown(e.budget);
    return report;
  }

  report.verdict = Verdict::holds();
  return report;
}

Verdict directedness_check(const Net& net, std::size_t max_len, const ExploreBounds& bounds) {
  ExploreResult fs = explore(net, bounds);
  if (!fs.verdict.is_holds()) {
    return Verdict::unknown("exploration did not close: " +
                            fs.verdict.bound_hit.value_or("bound"));
  }

  std::map<std::vector<NodeId>, std::size_t> seq_index;
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) seq_index.emplace(fs.sequences[i], i);

  std::vector<std::size_t> trace_id(fs.sequences.size(), SIZE_MAX);
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    if (trace_id[i] != SIZE_MAX) continue;
    TraceClass cls = trace_class(net, fs.sequences[i]);
    for (const auto& member : cls.members) trace_id[seq_index.at(member)] = next_id;
    ++next_id;
  }

  // Classes reachable by extending each sequence (the sequence included).
  std::vector<std::vector<std::size_t>> ext(fs.sequences.size());
  std::vector<std::size_t> order(fs.sequences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&fs](std::size_t a, std::size_t b) {
    return fs.sequences[a].size() > fs.sequences[b].size();
  });
  for (std::size_t i : order) {
    std::vector<std::size_t> acc{trace_id[i]};
    for (NodeId t : enabled_transitions(net, fs.final_markings[i])) {
      std::vector<NodeId> child = fs.sequences[i];
      child.push_back(t);
      const auto& child_ext = ext[seq_index.at(child)];
      acc.insert(acc.end(), child_ext.begin(), child_ext.end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    ext[i] = std::move(acc);
  }

  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    if (fs.sequences[i].size() > max_len) continue;
    for (std::size_t j = i + 1; j < fs.sequences.size(); ++j) {
      if (fs.sequences[j].size() > max_len) continue;
      std::vector<std::size_t> meet;
      std::set_intersection(ext[i].begin(), ext[i].end(), ext[j].begin(), ext[j].end(),
                            std::back_inserter(meet));
      if (meet.empty()) {
        Witness w;
        w.sequence = fs.sequences[i];
        w.note = "no joinable extensions: '" + word_text(net, fs.sequences[i]) + "' vs '" +
                 word_text(net, fs.sequences[j]) + "'";
        return Verdict::fails(std::move(w));
      }
    }
  }
  return Verdict::holds();
}

}  // namespace ptsem
