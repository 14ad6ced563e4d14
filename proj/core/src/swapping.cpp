#include "ptsem/swapping.hpp"

#include <algorithm>
#include <deque>

namespace ptsem {

Process swap(const Process& p, std::uint32_t a, std::uint32_t b) {
  if (a >= p.conditions.size() || b >= p.conditions.size()) {
    throw SwapError("no such condition");
  }
  if (p.conditions[a].place != p.conditions[b].place) throw SwapError("not same place");
  if (a == b) return p;
  if (p.causally_before(a, b) || p.causally_before(b, a)) {
    throw SwapError("causally ordered conditions");
  }
  Process q = p;
  std::int32_t ea = q.conditions[a].post_event;
  std::int32_t eb = q.conditions[b].post_event;
  if (ea == eb) return q;  // identical outgoing arcs, nothing to exchange
  if (ea >= 0) {
    auto& pre = q.events[static_cast<std::uint32_t>(ea)].pre;
    std::replace(pre.begin(), pre.end(), a, b);
    std::sort(pre.begin(), pre.end());
  }
  if (eb >= 0) {
    auto& pre = q.events[static_cast<std::uint32_t>(eb)].pre;
    std::replace(pre.begin(), pre.end(), b, a);
    std::sort(pre.begin(), pre.end());
  }
  std::swap(q.conditions[a].post_event, q.conditions[b].post_event);
  return q;
}

bool isomorphic(const Process& p, const Process& q) {
  if (p.conditions.size() != q.conditions.size() || p.events.size() != q.events.size()) {
    return false;
  }
  return canonical_form(p) == canonical_form(q);
}

namespace {

// Removes one maximal event, re-indexing the remainder.
Process remove_event(const Process& p, std::uint32_t event) {
  std::vector<bool> keep(p.events.size(), true);
  keep[event] = false;
  return prefix_by_events(p, keep);
}

std::vector<std::uint32_t> maximal_events(const Process& p) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    bool maximal = true;
    for (std::uint32_t c : p.events[e].post) {
      if (p.conditions[c].post_event >= 0) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(e);
  }
  return out;
}

}  // namespace

ClassCache::ClassCache(const Net& net, ClassBudget budget) : net_(&net), budget_(budget) {}

ClassCache::ClassId ClassCache::find(ClassId id) {
  while (entries_[id].parent != id) {
    entries_[id].parent = entries_[entries_[id].parent].parent;
    id = entries_[id].parent;
  }
  return id;
}

ClassCache::ClassId ClassCache::union_ids(ClassId a, ClassId b) {
  a = find(a);
  b = find(b);
  if (a == b) return a;
  if (b < a) std::swap(a, b);  // keep the older id as the root
  Entry& ra = entries_[a];
  Entry& rb = entries_[b];
  rb.parent = a;
  ra.parent_classes.insert(rb.parent_classes.begin(), rb.parent_classes.end());
  ra.members += rb.members;
  for (const auto& [label, target] : rb.edges) ra.edges.emplace(label, target);
  ra.edges_complete = ra.edges_complete && rb.edges_complete;
  ra.least_word_set = false;
  ra.class_form.clear();
  ++merges_;
  return a;
}

ClassCache::ClassId ClassCache::identify(const Process& p) {
  CanonicalForm form = canonical_form(p, budget_.canon);
  if (auto it = by_form_.find(form); it != by_form_.end()) return find(it->second);
  if (by_form_.size() >= budget_.max_members) {
    throw BudgetError("class member budget", "class identification exceeded the member budget");
  }

  // A shared one-removal class makes two same-multiset processes
  // swap-equivalent, so membership is decided by the parent classes.
  std::set<ClassId> parents;
  for (std::uint32_t e : maximal_events(p)) parents.insert(identify(remove_event(p, e)));
  {
    // Recursive identifications may have merged classes in the meantime.
    std::set<ClassId> normalized;
    for (ClassId d : parents) normalized.insert(find(d));
    parents = std::move(normalized);
  }

  std::size_t level = p.events.size();
  Multiset multiset = p.transition_multiset();
  auto& bucket = buckets_[{level, multiset}];

  ClassId target = UINT32_MAX;
  if (level == 0 && !bucket.empty()) {
    target = find(bucket.front());  // the unique event-free class
  } else {
    for (ClassId raw : bucket) {
      ClassId k = find(raw);
      if (k == target) continue;
      bool hit = false;
      for (ClassId stored : entries_[k].parent_classes) {
        if (parents.count(find(stored))) {
          hit = true;
          break;
        }
      }
      if (hit) target = target == UINT32_MAX ? k : union_ids(target, k);
    }
  }

  if (target == UINT32_MAX) {
    target = static_cast<ClassId>(entries_.size());
    Entry entry;
    entry.parent = target;
    entry.level = level;
    entry.multiset = multiset;
    entry.parent_classes = parents;
    entry.members = 1;
    entry.first_member = form;
    entries_.push_back(std::move(entry));
    bucket.push_back(target);
  } else {
    Entry& root = entries_[target];
    root.parent_classes.insert(parents.begin(), parents.end());
    ++root.members;
  }
  by_form_.emplace(std::move(form), target);
  return target;
}

Process ClassCache::representative(ClassId id) const {
  return decode_form(entries_[id].first_member);
}

ClassCache::ClassId ClassCache::edge(ClassId from, NodeId label) {
  from = find(from);
  if (auto it = entries_[from].edges.find(label); it != entries_[from].edges.end()) {
    return find(it->second);
  }
  Process rep = representative(from);
  Process extended = extend(*net_, rep, label, TokenPolicy::Fifo);
  ClassId target = identify(extended);
  from = find(from);  // identify may merge classes
  entries_[from].edges[label] = target;
  return find(target);
}

void ClassCache::stabilize(const Multiset& multiset_bound) {
  // Evaluate every enabled transition of every class inside the bound;
  // identifications can merge classes, so iterate to a fixpoint.
  while (true) {
    std::uint64_t merges_before = merges_;
    std::size_t classes_before = entries_.size();
    for (ClassId id = 0; id < entries_.size(); ++id) {
      if (entries_[id].parent != id) continue;
      if (entries_[id].edges_complete) continue;
      if (!ptsem::leq(entries_[id].multiset, multiset_bound)) continue;
      Process rep = representative(id);
      Multiset cut_marking = rep.cut_marking();
      bool complete = true;
      for (NodeId t : enabled_transitions(*net_, cut_marking)) {
        Multiset extended =
            combine(entries_[find(id)].multiset, Multiset::single(t), CombineMode::Sum);
        if (!ptsem::leq(extended, multiset_bound)) {
          complete = false;  // an edge leads outside the bound
          continue;
        }
        edge(id, t);
      }
      if (complete && find(id) == id) entries_[id].edges_complete = true;
    }
    if (merges_ == merges_before && entries_.size() == classes_before) break;
  }
}

void ClassCache::assign_least_words(const Multiset& multiset_bound) {
  stabilize(multiset_bound);

  std::map<std::size_t, std::vector<ClassId>> by_level;
  for (ClassId id = 0; id < entries_.size(); ++id) {
    if (entries_[id].parent != id) continue;
    if (!ptsem::leq(entries_[id].multiset, multiset_bound)) continue;
    entries_[id].least_word_set = false;
    by_level[entries_[id].level].push_back(id);
  }
  for (ClassId id : by_level[0]) {
    entries_[id].least_word.clear();
    entries_[id].least_word_set = true;
  }
  // Level by level in lexicographic word order: the least word reaching a
  // class extends the least word of one of its sources by one label.
  for (auto& [level, ids] : by_level) {
    if (level == 0) continue;
    std::vector<ClassId>& prev = by_level[level - 1];
    std::sort(prev.begin(), prev.end(), [this](ClassId a, ClassId b) {
      return entries_[a].least_word < entries_[b].least_word;
    });
    for (ClassId source : prev) {
      if (!entries_[source].least_word_set) continue;
      for (NodeId t : net_->transitions) {
        auto it = entries_[source].edges.find(t);
        if (it == entries_[source].edges.end()) continue;
        ClassId target = find(it->second);
        if (entries_[target].least_word_set) continue;
        if (!ptsem::leq(entries_[target].multiset, multiset_bound)) continue;
        entries_[target].least_word = entries_[source].least_word;
        entries_[target].least_word.push_back(t);
        entries_[target].least_word_set = true;
      }
    }
  }
}

const Multiset& ClassCache::multiset_of(ClassId id) { return entries_[find(id)].multiset; }

std::vector<NodeId> ClassCache::least_word(ClassId id) {
  while (true) {
    id = find(id);
    if (entries_[id].least_word_set) return entries_[id].least_word;
    assign_least_words(entries_[id].multiset);
    id = find(id);
    if (entries_[id].least_word_set) return entries_[id].least_word;
    // Unreached table entry: a split of a class that the transition system
    // reaches under another id. Its one-step parents pin the true class,
    // so merging with the parent's extension is sound and heals the split.
    if (entries_[id].parent_classes.empty()) {
      throw std::logic_error("unreachable class without parents");
    }
    ClassId parent = *entries_[id].parent_classes.begin();
    Multiset diff = monus(entries_[id].multiset, entries_[find(parent)].multiset);
    if (diff.support_size() != 1) throw std::logic_error("malformed parent multiset");
    id = union_ids(id, edge(parent, diff.entries().front().first));
  }
}

std::uint32_t ClassCache::explored_members(ClassId id) { return entries_[find(id)].members; }

SwapClass ClassCache::to_class(ClassId id) {
  id = find(id);
  if (entries_[id].least_word_set && !entries_[id].class_form.empty()) {
    return SwapClass{entries_[id].class_form, explored_members(id), entries_[id].multiset};
  }
  std::vector<NodeId> word = least_word(id);
  Process canonical_member = proc(*net_, word, TokenPolicy::Fifo);
  CanonicalForm form = canonical_form(canonical_member, budget_.canon);
  // The canonical member is in this class; registering it also heals any
  // split the identification may have left behind.
  ClassId member_id = identify(canonical_member);
  if (find(member_id) != find(id)) union_ids(member_id, id);
  id = find(id);
  if (entries_[id].least_word_set) entries_[id].class_form = form;
  return SwapClass{std::move(form), explored_members(id), entries_[id].multiset};
}

void ClassCache::settle(const Multiset& multiset_bound) {
  while (true) {
    std::uint64_t merges_before = merges_;
    std::size_t classes_before = entries_.size();
    stabilize(multiset_bound);
    for (ClassId id = 0; id < entries_.size(); ++id) {
      if (entries_[id].parent != id) continue;
      if (!ptsem::leq(entries_[id].multiset, multiset_bound)) continue;
      (void)to_class(id);
    }
    bridge_buckets(multiset_bound);
    if (merges_ == merges_before && entries_.size() == classes_before) break;
  }
}

void ClassCache::bridge_buckets(const Multiset& multiset_bound) {
  // Same-bucket classes are either genuinely distinct or a transient split
  // awaiting a connecting member; a bounded swap walk decides cheaply in
  // the common case and is attempted once per pair.
  for (auto& [key, ids] : buckets_) {
    if (key.first == 0) continue;
    if (!ptsem::leq(key.second, multiset_bound)) continue;
    std::set<ClassId> roots;
    for (ClassId raw : ids) roots.insert(find(raw));
    if (roots.size() < 2) continue;
    for (auto it = roots.begin(); it != roots.end(); ++it) {
      for (auto jt = std::next(it); jt != roots.end(); ++jt) {
        ClassId a = find(*it);
        ClassId b = find(*jt);
        if (a == b) continue;
        auto pair = std::minmax(a, b);
        if (!bridge_attempts_.insert({pair.first, pair.second}).second) continue;
        try_bridge(pair.first, pair.second);
      }
    }
  }
}

bool ClassCache::try_bridge(ClassId a, ClassId b) {
  Process start = representative(find(a));
  std::set<CanonicalForm> seen{canonical_form(start, budget_.canon)};
  std::deque<Process> queue{start};
  std::size_t probes = 0;
  while (!queue.empty()) {
    Process cur = std::move(queue.front());
    queue.pop_front();
    for (std::uint32_t x = 0; x < cur.conditions.size(); ++x) {
      for (std::uint32_t y = x + 1; y < cur.conditions.size(); ++y) {
        if (cur.conditions[x].place != cur.conditions[y].place) continue;
        if (cur.conditions[x].post_event == cur.conditions[y].post_event) continue;
        if (cur.causally_before(x, y) || cur.causally_before(y, x)) continue;
        Process next = swap(cur, x, y);
        CanonicalForm f = canonical_form(next, budget_.canon);
        if (!seen.insert(f).second) continue;
        identify(next);  // registers the member; merges when it bridges
        if (find(a) == find(b)) return true;
        if (++probes >= budget_.bridge_cap) return false;
        queue.push_back(std::move(next));
      }
    }
  }
  return find(a) == find(b);
}

SwapClass ClassCache::class_of(const Process& p) {
  ClassId id = identify(p);
  settle(entries_[find(id)].multiset);
  return to_class(id);
}

SwapClass ClassCache::class_of_form(const CanonicalForm& member_form) {
  return class_of(decode_form(member_form));
}

bool ClassCache::id_leq(ClassId smaller, ClassId larger) {
  smaller = find(smaller);
  larger = find(larger);
  if (smaller == larger) return true;
  const Multiset goal = entries_[larger].multiset;
  if (!ptsem::leq(entries_[smaller].multiset, goal)) return false;
  stabilize(goal);
  smaller = find(smaller);
  larger = find(larger);
  // The class order is reachability over class transitions.
  std::set<ClassId> seen{smaller};
  std::deque<ClassId> frontier{smaller};
  while (!frontier.empty()) {
    ClassId cur = frontier.front();
    frontier.pop_front();
    if (cur == larger) return true;
    for (const auto& [label, raw] : entries_[cur].edges) {
      ClassId next = find(raw);
      if (!ptsem::leq(entries_[next].multiset, goal)) continue;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return false;
}

bool ClassCache::leq(const SwapClass& smaller, const SwapClass& larger) {
  ClassId a = identify(decode_form(smaller.canonical_form));
  ClassId b = identify(decode_form(larger.canonical_form));
  return id_leq(a, b);
}

ClassRun ClassCache::run_of(const Process& p) {
  ClassId top = identify(p);
  const Multiset bound = entries_[find(top)].multiset;
  stabilize(bound);
  top = find(top);

  // Forward region from the event-free class, then backward filter.
  ClassId origin = find(identify(initial_process(*net_)));
  std::vector<ClassId> region;
  std::set<ClassId> visited{origin};
  std::deque<ClassId> work{origin};
  while (!work.empty()) {
    ClassId cur = work.front();
    work.pop_front();
    region.push_back(cur);
    for (const auto& [label, raw] : entries_[cur].edges) {
      ClassId next = find(raw);
      if (!ptsem::leq(entries_[next].multiset, bound)) continue;
      if (visited.insert(next).second) work.push_back(next);
    }
  }
  std::map<ClassId, std::vector<ClassId>> reverse;
  for (ClassId id : region) {
    for (const auto& [label, raw] : entries_[id].edges) {
      ClassId next = find(raw);
      if (visited.count(next)) reverse[next].push_back(id);
    }
  }
  std::set<ClassId> below{top};
  std::deque<ClassId> back{top};
  while (!back.empty()) {
    ClassId cur = back.front();
    back.pop_front();
    for (ClassId prev : reverse[cur]) {
      if (below.insert(prev).second) back.push_back(prev);
    }
  }

  std::map<CanonicalForm, SwapClass> dedup;
  for (ClassId id : below) {
    SwapClass cls = to_class(id);
    dedup.emplace(cls.canonical_form, std::move(cls));
  }
  ClassRun run;
  for (auto& [_, cls] : dedup) run.classes.push_back(std::move(cls));
  std::sort(run.classes.begin(), run.classes.end(), [](const SwapClass& a, const SwapClass& b) {
    auto ca = a.transition_multiset.cardinality();
    auto cb = b.transition_multiset.cardinality();
    if (ca != cb) return ca < cb;
    return a.canonical_form < b.canonical_form;
  });
  return run;
}

SwapClass swap_class(const Process& p, ClassCache& cache) { return cache.class_of(p); }

SwapClass swap_class(const Net& net, const Process& p, ClassBudget budget) {
  ClassCache cache(net, budget);
  return cache.class_of(p);
}

bool class_leq(const SwapClass& smaller, const SwapClass& larger, ClassCache& cache) {
  return cache.leq(smaller, larger);
}

ClassRun class_run_of(const Process& p, ClassCache& cache) { return cache.run_of(p); }

std::vector<CanonicalForm> exhaustive_class_members(const Process& p, ClassBudget budget) {
  std::map<CanonicalForm, Process> visited;
  std::deque<const Process*> queue;
  CanonicalForm f0 = canonical_form(p, budget.canon);
  auto [it0, _] = visited.emplace(std::move(f0), p);
  queue.push_back(&it0->second);
  while (!queue.empty()) {
    const Process* cur = queue.front();
    queue.pop_front();
    for (std::uint32_t a = 0; a < cur->conditions.size(); ++a) {
      for (std::uint32_t b = a + 1; b < cur->conditions.size(); ++b) {
        if (cur->conditions[a].place != cur->conditions[b].place) continue;
        if (cur->conditions[a].post_event == cur->conditions[b].post_event) continue;
        if (cur->causally_before(a, b) || cur->causally_before(b, a)) continue;
        Process next = swap(*cur, a, b);
        CanonicalForm f = canonical_form(next, budget.canon);
        if (visited.count(f)) continue;
        if (visited.size() >= budget.max_members) {
          throw BudgetError("class member budget",
                            "swap closure exceeded the class member budget");
        }
        auto [it, inserted] = visited.emplace(std::move(f), std::move(next));
        if (inserted) queue.push_back(&it->second);
      }
    }
  }
  std::vector<CanonicalForm> forms;
  forms.reserve(visited.size());
  for (const auto& [form, _] : visited) forms.push_back(form);
  return forms;
}

}  // namespace ptsem
