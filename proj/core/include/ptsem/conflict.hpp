#pragma once

#include <string>

#include "ptsem/net.hpp"

namespace ptsem {

/// Semantic conflict: every per-transition restriction of the step is
/// enabled (with multiplicity) while the step itself is not.
bool in_conflict(const Net& net, const Multiset& marking, const Multiset& step);

enum class ConflictMode { Binary, General };

struct ConflictReport {
  std::string property;  // "conflict_free", "binary_conflict_free", "structural"
  Verdict verdict;
};

/// Searches the reachable markings for a multiset in semantic conflict;
/// binary mode restricts to |G| = 2. Holds only under closed exploration.
ConflictReport check_conflict_freeness(const Net& net, ConflictMode mode,
                                       const ExploreBounds& bounds = {});

/// Structural conflict net check: no jointly step-enabled pair of
/// transitions (self-pairs included) shares a preplace at any reachable
/// marking.
ConflictReport check_structural(const Net& net, const ExploreBounds& bounds = {});

}  // namespace ptsem
