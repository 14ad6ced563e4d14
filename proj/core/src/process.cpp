#include "ptsem/process.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace ptsem {

std::vector<std::uint32_t> Process::cut_conditions() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < conditions.size(); ++c) {
    if (conditions[c].post_event < 0) out.push_back(c);
  }
  return out;
}

Multiset Process::cut_marking() const {
  std::vector<Multiset::Entry> entries;
  for (std::uint32_t c : cut_conditions()) entries.emplace_back(conditions[c].place, 1);
  return Multiset(std::move(entries));
}

Multiset Process::transition_multiset() const {
  std::vector<Multiset::Entry> entries;
  for (const Event& e : events) entries.emplace_back(e.transition, 1);
  return Multiset(std::move(entries));
}

std::vector<std::vector<std::uint32_t>> Process::direct_causes() const {
  std::vector<std::vector<std::uint32_t>> causes(events.size());
  for (std::uint32_t e = 0; e < events.size(); ++e) {
    for (std::uint32_t c : events[e].pre) {
      if (conditions[c].pre_event >= 0) {
        causes[e].push_back(static_cast<std::uint32_t>(conditions[c].pre_event));
      }
    }
    std::sort(causes[e].begin(), causes[e].end());
    causes[e].erase(std::unique(causes[e].begin(), causes[e].end()), causes[e].end());
  }
  return causes;
}

bool Process::causally_before(std::uint32_t p, std::uint32_t q) const {
  if (p == q) return false;
  if (conditions[p].post_event < 0) return false;
  // BFS over events from p's consumer; q is reached iff its producer shows up.
  if (conditions[q].pre_event < 0) return false;
  const auto target = static_cast<std::uint32_t>(conditions[q].pre_event);
  std::vector<bool> seen(events.size(), false);
  std::deque<std::uint32_t> frontier{static_cast<std::uint32_t>(conditions[p].post_event)};
  seen[frontier.front()] = true;
  while (!frontier.empty()) {
    std::uint32_t e = frontier.front();
    frontier.pop_front();
    if (e == target) return true;
    for (std::uint32_t c : events[e].post) {
      if (conditions[c].post_event >= 0) {
        auto next = static_cast<std::uint32_t>(conditions[c].post_event);
        if (!seen[next]) {
          seen[next] = true;
          frontier.push_back(next);
        }
      }
    }
  }
  return false;
}

namespace {

// Occupancy of each condition as seen from the event arc lists.
struct Occupancy {
  std::vector<std::vector<std::uint32_t>> producers;  // events with c in post
  std::vector<std::vector<std::uint32_t>> consumers;  // events with c in pre
};

Occupancy occupancy(const Process& p) {
  Occupancy occ;
  occ.producers.resize(p.conditions.size());
  occ.consumers.resize(p.conditions.size());
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    for (std::uint32_t c : p.events[e].pre) {
      if (c < p.conditions.size()) occ.consumers[c].push_back(e);
    }
    for (std::uint32_t c : p.events[e].post) {
      if (c < p.conditions.size()) occ.producers[c].push_back(e);
    }
  }
  return occ;
}

bool acyclic(const Process& p, const Occupancy& occ) {
  // DFS over events; event u follows e iff e produces a condition u consumes.
  std::vector<int> state(p.events.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t start = 0; start < p.events.size(); ++start) {
    if (state[start] != 0) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      std::uint32_t e = stack.back();
      if (state[e] == 0) {
        state[e] = 1;
        for (std::uint32_t c : p.events[e].post) {
          if (c >= p.conditions.size()) continue;
          for (std::uint32_t u : occ.consumers[c]) {
            if (state[u] == 1) return false;
            if (state[u] == 0) stack.push_back(u);
          }
        }
      } else {
        if (state[e] == 1) state[e] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace

std::vector<Violation> validate(const Net& net, const Process& p) {
  std::vector<Violation> out;
  auto flag = [&out](std::string clause, std::string detail) {
    out.push_back({std::move(clause), std::move(detail)});
  };

  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
    NodeId place = p.conditions[c].place;
    if (place >= net.node_count() || !net.is_place(place)) {
      flag("fold-range", "condition " + std::to_string(c) + " does not map to a place");
    }
  }
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    NodeId t = p.events[e].transition;
    if (t >= net.node_count() || !net.is_transition(t)) {
      flag("fold-range", "event " + std::to_string(e) + " does not map to a transition");
      return out;
    }
    for (std::uint32_t c : p.events[e].pre) {
      if (c >= p.conditions.size()) {
        flag("index-range", "event " + std::to_string(e) + " consumes unknown condition");
        return out;
      }
    }
    for (std::uint32_t c : p.events[e].post) {
      if (c >= p.conditions.size()) {
        flag("index-range", "event " + std::to_string(e) + " produces unknown condition");
        return out;
      }
    }
  }

  Occupancy occ = occupancy(p);
  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
    if (occ.producers[c].size() > 1) {
      flag("|pre(s)| <= 1", "condition " + std::to_string(c) + " has " +
                               std::to_string(occ.producers[c].size()) + " pre-events");
    }
    if (occ.consumers[c].size() > 1) {
      flag("|post(s)| <= 1", "condition " + std::to_string(c) + " has " +
                                std::to_string(occ.consumers[c].size()) + " post-events");
    }
  }

  if (!acyclic(p, occ)) flag("acyclicity", "causal flow contains a cycle");

  // pi(M0) = M0: per place, initial conditions must match the marking.
  for (NodeId place : net.places) {
    Multiset::Count have = 0;
    for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
      if (p.conditions[c].place == place && occ.producers[c].empty()) ++have;
    }
    Multiset::Count want = net.initial_marking.count(place);
    if (have != want) {
      flag("initial-marking fold", "place '" + net.name_of(place) + "': " + std::to_string(have) +
                                       " initial conditions, marking has " + std::to_string(want));
    }
  }

  // Arc-weight fold: F(s, fold(e)) and F(fold(e), s) vs. preimage counts.
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    NodeId t = p.events[e].transition;
    std::map<NodeId, Multiset::Count> pre_count, post_count;
    for (std::uint32_t c : p.events[e].pre) ++pre_count[p.conditions[c].place];
    for (std::uint32_t c : p.events[e].post) ++post_count[p.conditions[c].place];
    for (NodeId place : net.places) {
      Multiset::Count want_pre = net.arc_weight(place, t);
      Multiset::Count want_post = net.arc_weight(t, place);
      Multiset::Count have_pre = pre_count.count(place) ? pre_count[place] : 0;
      Multiset::Count have_post = post_count.count(place) ? post_count[place] : 0;
      if (want_pre != have_pre) {
        flag("arc-weight fold (preset)",
             "event " + std::to_string(e) + " ('" + net.name_of(t) + "'), place '" +
                 net.name_of(place) + "': expected " + std::to_string(want_pre) + ", found " +
                 std::to_string(have_pre));
      }
      if (want_post != have_post) {
        flag("arc-weight fold (postset)",
             "event " + std::to_string(e) + " ('" + net.name_of(t) + "'), place '" +
                 net.name_of(place) + "': expected " + std::to_string(want_post) + ", found " +
                 std::to_string(have_post));
      }
    }
  }
  return out;
}

Process initial_process(const Net& net) {
  Process p;
  for (NodeId place : net.places) {
    for (Multiset::Count i = 0; i < net.initial_marking.count(place); ++i) {
      p.conditions.push_back({place, -1, -1});
    }
  }
  return p;
}

std::vector<std::vector<std::uint32_t>> consumption_choices(const Net& net, const Process& p,
                                                            NodeId t) {
  auto cut = p.cut_conditions();
  std::vector<std::vector<std::uint32_t>> per_place;  // one combination list per preset place
  std::vector<std::vector<std::vector<std::uint32_t>>> combos;
  for (const auto& [place, need] : net.pre[t].entries()) {
    std::vector<std::uint32_t> avail;
    for (std::uint32_t c : cut) {
      if (p.conditions[c].place == place) avail.push_back(c);
    }
    if (avail.size() < need) return {};
    // k-combinations of avail in lexicographic order.
    std::vector<std::vector<std::uint32_t>> list;
    std::vector<std::uint32_t> pick;
    auto rec = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
      if (remaining == 0) {
        list.push_back(pick);
        return;
      }
      for (std::size_t i = start; i + remaining <= avail.size() + 0; ++i) {
        if (avail.size() - i < remaining) break;
        pick.push_back(avail[i]);
        self(self, i + 1, remaining - 1);
        pick.pop_back();
      }
    };
    rec(rec, 0, static_cast<std::size_t>(need));
    combos.push_back(std::move(list));
  }

  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> current;
  auto cross = [&](auto&& self, std::size_t level) -> void {
    if (level == combos.size()) {
      auto sorted = current;
      std::sort(sorted.begin(), sorted.end());
      out.push_back(std::move(sorted));
      return;
    }
    for (const auto& pick : combos[level]) {
      current.insert(current.end(), pick.begin(), pick.end());
      self(self, level + 1);
      current.resize(current.size() - pick.size());
    }
  };
  cross(cross, 0);
  return out;
}

Process extend_with(const Net& net, const Process& p, NodeId t,
                    std::span<const std::uint32_t> chosen) {
  // The chosen conditions must sit in the cut and match •t per place.
  std::map<NodeId, Multiset::Count> counts;
  for (std::uint32_t c : chosen) {
    if (c >= p.conditions.size() || p.conditions[c].post_event >= 0) {
      throw std::runtime_error("chosen condition not in the cut");
    }
    ++counts[p.conditions[c].place];
  }
  for (const auto& [place, need] : net.pre[t].entries()) {
    if (counts[place] != need) throw std::runtime_error("chosen conditions do not match preset");
  }
  if (counts.size() != net.pre[t].entries().size()) {
    throw std::runtime_error("chosen conditions do not match preset");
  }

  Process q = p;
  auto eid = static_cast<std::int32_t>(q.events.size());
  Event ev;
  ev.transition = t;
  ev.pre.assign(chosen.begin(), chosen.end());
  std::sort(ev.pre.begin(), ev.pre.end());
  for (std::uint32_t c : ev.pre) q.conditions[c].post_event = eid;
  for (const auto& [place, produced] : net.post[t].entries()) {
    for (Multiset::Count i = 0; i < produced; ++i) {
      ev.post.push_back(static_cast<std::uint32_t>(q.conditions.size()));
      q.conditions.push_back({place, eid, -1});
    }
  }
  q.events.push_back(std::move(ev));
  return q;
}

Process extend(const Net& net, const Process& p, NodeId t, TokenPolicy policy) {
  auto cut = p.cut_conditions();
  Multiset cut_marking = p.cut_marking();
  if (!leq(net.pre[t], cut_marking)) {
    Multiset deficient = monus(net.pre[t], cut_marking);
    std::string msg = "not enabled at cut; deficient places:";
    for (const auto& [place, c] : deficient.entries()) {
      msg += " " + net.name_of(place) + "(" + std::to_string(c) + ")";
    }
    throw NotEnabledError(msg, std::move(deficient));
  }
  std::vector<std::uint32_t> chosen;
  for (const auto& [place, need] : net.pre[t].entries()) {
    std::vector<std::uint32_t> avail;
    for (std::uint32_t c : cut) {
      if (p.conditions[c].place == place) avail.push_back(c);
    }
    if (policy == TokenPolicy::Fifo) {
      chosen.insert(chosen.end(), avail.begin(), avail.begin() + need);
    } else {
      chosen.insert(chosen.end(), avail.end() - need, avail.end());
    }
  }
  return extend_with(net, p, t, chosen);
}

Process proc(const Net& net, std::span<const NodeId> word, TokenPolicy policy) {
  Process p = initial_process(net);
  for (std::size_t i = 0; i < word.size(); ++i) {
    try {
      p = extend(net, p, word[i], policy);
    } catch (const NotEnabledError& e) {
      throw NotEnabledError("not a firing sequence at position " + std::to_string(i) + " ('" +
                                net.name_of(word[i]) + "'): " + e.what(),
                            e.deficient, i);
    }
  }
  return p;
}

bool prefix_of(const Process& smaller, const Process& larger) {
  if (smaller.events.size() > larger.events.size()) return false;
  if (smaller.conditions.size() > larger.conditions.size()) return false;
  for (std::size_t e = 0; e < smaller.events.size(); ++e) {
    if (!(smaller.events[e] == larger.events[e])) return false;
  }
  // The conditions present must be exactly those created by the shared
  // prefix: initial ones plus the postsets of the shared events.
  for (std::size_t c = 0; c < smaller.conditions.size(); ++c) {
    const Condition& sc = smaller.conditions[c];
    const Condition& lc = larger.conditions[c];
    if (sc.place != lc.place || sc.pre_event != lc.pre_event) return false;
    // Post-events beyond the shared events are absent in the prefix.
    std::int32_t expected_post =
        (lc.post_event >= 0 && lc.post_event < static_cast<std::int32_t>(smaller.events.size()))
            ? lc.post_event
            : -1;
    if (sc.post_event != expected_post) return false;
  }
  for (std::size_t c = smaller.conditions.size(); c < larger.conditions.size(); ++c) {
    std::int32_t producer = larger.conditions[c].pre_event;
    if (producer < 0 || producer < static_cast<std::int32_t>(smaller.events.size())) {
      return false;  // a condition of the prefix window is missing
    }
  }
  return true;
}

Process prefix_by_events(const Process& p, const std::vector<bool>& keep) {
  if (keep.size() != p.events.size()) throw std::runtime_error("keep mask size mismatch");
  auto causes = p.direct_causes();
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    if (!keep[e]) continue;
    for (std::uint32_t cause : causes[e]) {
      if (!keep[cause]) throw std::runtime_error("event set is not downward closed");
    }
  }

  std::vector<std::int32_t> cond_map(p.conditions.size(), -1);
  Process q;
  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
    std::int32_t producer = p.conditions[c].pre_event;
    if (producer >= 0 && !keep[static_cast<std::uint32_t>(producer)]) continue;
    cond_map[c] = static_cast<std::int32_t>(q.conditions.size());
    q.conditions.push_back({p.conditions[c].place, -1, -1});
  }
  std::vector<std::int32_t> event_map(p.events.size(), -1);
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    if (!keep[e]) continue;
    auto eid = static_cast<std::int32_t>(q.events.size());
    event_map[e] = eid;
    Event ev;
    ev.transition = p.events[e].transition;
    for (std::uint32_t c : p.events[e].pre) {
      auto nc = static_cast<std::uint32_t>(cond_map[c]);
      ev.pre.push_back(nc);
      q.conditions[nc].post_event = eid;
    }
    for (std::uint32_t c : p.events[e].post) {
      auto nc = static_cast<std::uint32_t>(cond_map[c]);
      ev.post.push_back(nc);
      q.conditions[nc].pre_event = eid;
    }
    std::sort(ev.pre.begin(), ev.pre.end());
    std::sort(ev.post.begin(), ev.post.end());
    q.events.push_back(std::move(ev));
  }
  return q;
}

std::vector<std::vector<bool>> downward_closed_event_sets(const Process& p) {
  auto causes = p.direct_causes();
  // Scan events in a topological order so causes are decided before their
  // dependents; the stored event order need not be topological.
  std::vector<std::size_t> missing(p.events.size(), 0);
  std::vector<std::vector<std::uint32_t>> dependents(p.events.size());
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    missing[e] = causes[e].size();
    for (std::uint32_t cause : causes[e]) dependents[cause].push_back(e);
  }
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> ready;
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    if (missing[e] == 0) ready.push_back(e);
  }
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    std::uint32_t e = *it;
    ready.erase(it);
    order.push_back(e);
    for (std::uint32_t d : dependents[e]) {
      if (--missing[d] == 0) ready.push_back(d);
    }
  }

  std::vector<std::vector<bool>> out;
  std::vector<bool> keep(p.events.size(), false);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == order.size()) {
      out.push_back(keep);
      return;
    }
    std::uint32_t e = order[pos];
    self(self, pos + 1);  // exclude e (and transitively its dependents)
    bool ok = true;
    for (std::uint32_t cause : causes[e]) {
      if (!keep[cause]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      keep[e] = true;
      self(self, pos + 1);
      keep[e] = false;
    }
  };
  rec(rec, 0);
  return out;
}

ProcessCut cut(const Process& p) {
  return ProcessCut{p.cut_conditions(), p.cut_marking()};
}

std::vector<NodeId> linearize(const Process& p) {
  auto causes = p.direct_causes();
  std::vector<std::size_t> missing(p.events.size(), 0);
  std::vector<std::vector<std::uint32_t>> dependents(p.events.size());
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    missing[e] = causes[e].size();
    for (std::uint32_t cause : causes[e]) dependents[cause].push_back(e);
  }
  // Kahn's algorithm, smallest creation index first.
  std::vector<std::uint32_t> ready;
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    if (missing[e] == 0) ready.push_back(e);
  }
  std::vector<NodeId> word;
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    std::uint32_t e = *it;
    ready.erase(it);
    word.push_back(p.events[e].transition);
    for (std::uint32_t d : dependents[e]) {
      if (--missing[d] == 0) ready.push_back(d);
    }
  }
  if (word.size() != p.events.size()) throw std::runtime_error("causal flow contains a cycle");
  return word;
}

}  // namespace ptsem
