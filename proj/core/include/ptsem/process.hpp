#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptsem/net.hpp"

namespace ptsem {

/// A condition: one token occurrence. `pre_event`/`post_event` are caches
/// derived from the event arc lists (-1 = none); the arc lists are the
/// authoritative flow relation.
struct Condition {
  NodeId place = 0;
  std::int32_t pre_event = -1;
  std::int32_t post_event = -1;

  bool operator==(const Condition&) const = default;
};

/// An event: one transition occurrence with the conditions it consumed and
/// produced (indices into Process::conditions, ascending).
struct Event {
  NodeId transition = 0;
  std::vector<std::uint32_t> pre;
  std::vector<std::uint32_t> post;

  bool operator==(const Event&) const = default;
};

/// An occurrence net together with its folding onto the underlying net:
/// conditions map to places, events to transitions. Conditions and events
/// carry creation indices (their vector positions); library constructors
/// keep events in a topological order. Values are immutable after
/// construction.
struct Process {
  std::vector<Condition> conditions;
  std::vector<Event> events;

  bool operator==(const Process&) const = default;

  bool is_initial_condition(std::uint32_t c) const { return conditions[c].pre_event < 0; }

  /// Conditions without a post-event, ascending.
  std::vector<std::uint32_t> cut_conditions() const;
  /// Fold image of the cut.
  Multiset cut_marking() const;
  /// Fold image of the event set.
  Multiset transition_multiset() const;

  /// events[i] -> indices of events that causally precede i directly.
  std::vector<std::vector<std::uint32_t>> direct_causes() const;
  /// Reflexive-transitive causal reachability between conditions:
  /// true iff p strictly precedes q via the flow relation.
  bool causally_before(std::uint32_t p, std::uint32_t q) const;
};

enum class TokenPolicy { Fifo, Lifo };

struct Violation {
  std::string clause;
  std::string detail;
};

/// Empty iff P is a process of `net`: condition branching bounds,
/// acyclicity, initial-marking fold and arc-weight fold all hold. Works
/// from the event arc lists so that malformed structures are reportable.
std::vector<Violation> validate(const Net& net, const Process& p);

/// The event-free process: one condition per token of the initial marking.
Process initial_process(const Net& net);

/// Appends one occurrence of `t`, consuming cut conditions chosen by
/// policy (Fifo = oldest creation index first, Lifo = newest first).
Process extend(const Net& net, const Process& p, NodeId t, TokenPolicy policy);

/// Appends one occurrence of `t` consuming exactly `chosen` (ascending
/// condition indices matching •t per place).
Process extend_with(const Net& net, const Process& p, NodeId t,
                    std::span<const std::uint32_t> chosen);

/// All ways to pick •t from the cut, each a sorted condition list,
/// enumerated deterministically. Empty iff t is not enabled at the cut.
std::vector<std::vector<std::uint32_t>> consumption_choices(const Net& net, const Process& p,
                                                            NodeId t);

/// Left fold of extend over the word, starting from initial_process.
Process proc(const Net& net, std::span<const NodeId> word, TokenPolicy policy);

/// Prefix containment in the sense of creation-order truncation: P' equals
/// P restricted to its first |P'.events| events and the conditions that
/// exist at that point.
bool prefix_of(const Process& smaller, const Process& larger);

/// The prefix determined by a causally downward-closed event set
/// (keep[i] per event). Conditions are re-indexed ascending; throws if the
/// set is not downward closed.
Process prefix_by_events(const Process& p, const std::vector<bool>& keep);

/// All causally downward-closed event subsets, each as a keep mask,
/// deterministic order, including the empty and the full set.
std::vector<std::vector<bool>> downward_closed_event_sets(const Process& p);

struct ProcessCut {
  std::vector<std::uint32_t> conditions;
  Multiset marking;
};

ProcessCut cut(const Process& p);

/// A topological order of the events under the causal relation, ties
/// broken by creation index, mapped through the folding. Always in FS(N).
std::vector<NodeId> linearize(const Process& p);

}  // namespace ptsem
