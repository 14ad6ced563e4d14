#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptsem/canonical.hpp"
#include "ptsem/net.hpp"
#include "ptsem/process.hpp"

namespace ptsem {

struct SwapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exchanges the outgoing arcs of conditions `a` and `b`. Requires equal
/// fold images and causal incomparability.
Process swap(const Process& p, std::uint32_t a, std::uint32_t b);

/// True iff a bijection on conditions/events exists preserving initial
/// conditions and flow and commuting with the folding.
bool isomorphic(const Process& p, const Process& q);

struct ClassBudget {
  std::size_t max_members = 20000;  // identified member forms per cache
  std::size_t bridge_cap = 1000;    // swap probes when reconciling a bucket pair
  CanonBudget canon;
};

/// Equivalence class of finite processes under iterated swapping.
/// `canonical_form` encodes the class's canonical member (the process
/// built along the least transition word reaching the class), so equal
/// bytes mean swap-equivalent processes.
struct SwapClass {
  CanonicalForm canonical_form;
  std::uint32_t member_count_explored = 0;
  Multiset transition_multiset;

  bool operator==(const SwapClass& other) const {
    return canonical_form == other.canonical_form;
  }
  bool operator<(const SwapClass& other) const {
    return canonical_form < other.canonical_form;
  }
};

/// A finite, prefix-closed, directed set of classes.
struct ClassRun {
  std::vector<SwapClass> classes;  // sorted by (event count, class form)
};

/// Decides swap equivalence without materializing whole classes.
///
/// Classes form a deterministic transition system: extending any member of
/// a class by a transition lands in one class, whichever tokens are picked.
/// Two processes with equal transition multisets are equivalent whenever
/// removing one maximal event from each lands in the same class, which
/// gives a sound merge rule; identified members accumulate per class and
/// merges propagate through a union-find. The class order is reachability
/// in this transition system.
class ClassCache {
 public:
  explicit ClassCache(const Net& net, ClassBudget budget = {});

  SwapClass class_of(const Process& p);
  SwapClass class_of_form(const CanonicalForm& member_form);

  /// Def.-7 prefix order between classes.
  bool leq(const SwapClass& smaller, const SwapClass& larger);

  const Net& net() const { return *net_; }
  const ClassBudget& budget() const { return budget_; }

  using ClassId = std::uint32_t;
  ClassId identify(const Process& p);
  ClassId find(ClassId id);
  std::uint64_t merge_count() const { return merges_; }
  const Multiset& multiset_of(ClassId id);
  std::vector<NodeId> least_word(ClassId id);
  SwapClass to_class(ClassId id);
  std::uint32_t explored_members(ClassId id);
  bool id_leq(ClassId smaller, ClassId larger);

  /// All classes below the given process's class in the prefix order.
  ClassRun run_of(const Process& p);

  /// Evaluates every class transition within the multiset bound until the
  /// table stops changing.
  void stabilize(const Multiset& multiset_bound);

  /// stabilize plus registering every region class's canonical member, so
  /// later queries cannot change the exported forms of this region.
  void settle(const Multiset& multiset_bound);

 private:
  struct Entry {
    ClassId parent;               // union-find
    std::size_t level = 0;        // event count
    Multiset multiset;            // fold image of the events
    std::set<ClassId> parent_classes;  // classes seen one maximal removal up
    std::uint32_t members = 0;
    CanonicalForm first_member;   // a concrete member (decodable)
    std::map<NodeId, ClassId> edges;   // evaluated transitions
    bool edges_complete = false;       // all enabled labels evaluated
    std::vector<NodeId> least_word;
    bool least_word_set = false;
    CanonicalForm class_form;  // canon of the least-word member, memoized
  };

  const Net* net_;
  ClassBudget budget_;
  std::vector<Entry> entries_;
  std::map<CanonicalForm, ClassId> by_form_;
  std::map<std::pair<std::size_t, Multiset>, std::vector<ClassId>> buckets_;
  std::set<std::pair<ClassId, ClassId>> bridge_attempts_;
  std::uint64_t merges_ = 0;

  ClassId union_ids(ClassId a, ClassId b);
  ClassId edge(ClassId from, NodeId label);
  void assign_least_words(const Multiset& multiset_bound);
  void bridge_buckets(const Multiset& multiset_bound);
  bool try_bridge(ClassId a, ClassId b);
  Process representative(ClassId id) const;
};

SwapClass swap_class(const Process& p, ClassCache& cache);
SwapClass swap_class(const Net& net, const Process& p, ClassBudget budget = {});

bool class_leq(const SwapClass& smaller, const SwapClass& larger, ClassCache& cache);

/// All classes below the class of P in the prefix order.
ClassRun class_run_of(const Process& p, ClassCache& cache);

/// The breadth-first swap closure of P quotiented by isomorphism: the
/// canonical forms of every member. Exponential in token multiplicity;
/// kept as an independent reference route for cross-checking the cache.
std::vector<CanonicalForm> exhaustive_class_members(const Process& p, ClassBudget budget = {});

}  // namespace ptsem
