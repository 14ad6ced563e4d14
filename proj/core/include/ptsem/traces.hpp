#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ptsem/net.hpp"
#include "ptsem/swapping.hpp"

namespace ptsem {

/// True iff the two firing sequences differ by one transposition of
/// neighbouring transitions that are jointly step-enabled at that point.
/// Both arguments must be firing sequences (NotEnabledError otherwise).
bool adjacent(const Net& net, std::span<const NodeId> sigma, std::span<const NodeId> rho);

/// Equivalence class of a firing sequence under iterated adjacency.
struct TraceClass {
  std::vector<std::vector<NodeId>> members;  // sorted lexicographically
  Multiset transition_multiset;

  const std::vector<NodeId>& canonical_member() const { return members.front(); }
  bool operator==(const TraceClass& other) const { return members == other.members; }
};

TraceClass trace_class(const Net& net, std::span<const NodeId> sigma,
                       std::size_t budget = 50000);

/// Prefix order on classes: some member of `larger` extends some member of
/// `smaller`.
bool trace_leq(const TraceClass& smaller, const TraceClass& larger);

/// Finite-level correspondence between trace classes and swap classes:
/// enumerates FS(N) up to `max_len` and checks that trace equivalence
/// coincides with swap equivalence of the constructed processes, and that
/// the two prefix orders agree on all class pairs.
struct CorrespondenceReport {
  std::size_t length_bound = 0;
  std::size_t sequence_count = 0;
  std::size_t trace_class_count = 0;
  std::size_t swap_class_count = 0;
  std::size_t leq_pairs_checked = 0;
  Verdict verdict;
};

CorrespondenceReport correspondence_check(const Net& net, std::size_t max_len,
                                          std::size_t state_cap = 100000,
                                          ClassBudget budget = {});

/// For every pair of firing sequences of length <= max_len, searches for
/// extensions that land in one trace class. Requires the sequence-level
/// exploration to close within the bounds; Unknown otherwise.
Verdict directedness_check(const Net& net, std::size_t max_len,
                           const ExploreBounds& bounds = {});

}  // namespace ptsem
