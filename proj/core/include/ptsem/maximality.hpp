#pragma once

#include <string>
#include <vector>

#include "ptsem/conflict.hpp"
#include "ptsem/swapping.hpp"

namespace ptsem {

struct ClassReport {
  SwapClass cls;
  std::vector<NodeId> example_linearization;
};

/// Maximal finite processes of the net, up to isomorphism and up to
/// swapping equivalence. Counts are exact only when completeness holds;
/// otherwise they are lower bounds.
struct MaximalityReport {
  std::size_t maximal_process_count = 0;  // up to isomorphism
  std::size_t maximal_class_count = 0;    // up to swapping equivalence
  bool counts_are_lower_bounds = false;
  Verdict completeness;
  std::vector<ClassReport> classes;
};

MaximalityReport enumerate_maximal(const Net& net, const ExploreBounds& bounds = {},
                                   ClassBudget budget = {});

/// Some member of the class is a maximal process (its cut enables no
/// transition). Unknown unless the net's behaviour closes within bounds.
Verdict weakly_maximal(const Net& net, const SwapClass& cls, const ExploreBounds& bounds = {},
                       ClassBudget budget = {});

/// No member of the class admits any extension. For terminating nets this
/// is maximality of the class in the prefix order.
Verdict class_maximal(const Net& net, const SwapClass& cls, const ExploreBounds& bounds = {},
                      ClassBudget budget = {});

/// On structural conflict nets with complete exploration, conflict-freeness
/// must coincide with having exactly one maximal class.
struct CorollaryReport {
  ConflictReport structural;
  ConflictReport conflict_free;
  ConflictReport binary_conflict_free;
  MaximalityReport maximality;
  Verdict biconditional;
  std::string note;
};

CorollaryReport corollary_check(const Net& net, const ExploreBounds& bounds = {},
                                ClassBudget budget = {});

}  // namespace ptsem
