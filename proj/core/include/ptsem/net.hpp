#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptsem/multiset.hpp"
#include "ptsem/verdict.hpp"

namespace ptsem {

enum class NodeKind : std::uint8_t { Place, Transition };

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Raised by the firing rule when a step is not enabled. `deficient` lists
/// the places that are short of tokens; `position` is set when the failure
/// happened inside a transition word.
struct NotEnabledError : std::runtime_error {
  Multiset deficient;
  std::optional<std::size_t> position;
  NotEnabledError(const std::string& msg, Multiset deficient_,
                  std::optional<std::size_t> position_ = std::nullopt)
      : std::runtime_error(msg), deficient(std::move(deficient_)), position(position_) {}
};

/// Place/transition net: disjoint node sets, weighted flow on
/// places x transitions plus transitions x places, and an initial marking.
/// Every transition has a non-empty preset. Immutable after parse.
struct Net {
  std::string name;
  std::vector<std::string> node_names;     // by NodeId, declaration order
  std::vector<NodeKind> node_kinds;        // by NodeId
  std::vector<NodeId> places;              // declaration order
  std::vector<NodeId> transitions;         // declaration order
  std::map<std::pair<NodeId, NodeId>, Multiset::Count> flow;
  std::vector<Multiset> pre;               // per NodeId: the multiset •x
  std::vector<Multiset> post;              // per NodeId: the multiset x•
  Multiset initial_marking;                // over place ids

  std::size_t node_count() const { return node_names.size(); }
  bool is_place(NodeId id) const { return node_kinds[id] == NodeKind::Place; }
  bool is_transition(NodeId id) const { return node_kinds[id] == NodeKind::Transition; }
  const std::string& name_of(NodeId id) const { return node_names[id]; }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId require_transition(std::string_view name) const;
  Multiset::Count arc_weight(NodeId src, NodeId dst) const;

  /// Resolves a whitespace-separated word of transition names.
  std::vector<NodeId> word(std::string_view text) const;
};

Net parse_net(std::string_view text);

/// Def. 3 extension of pre/postsets to multisets of nodes:
/// (•X, X•) with •X = Σ X(x)·•x and X• = Σ X(x)·x•.
std::pair<Multiset, Multiset> pre_post(const Net& net, const Multiset& nodes);

bool step_enabled(const Net& net, const Multiset& marking, const Multiset& step);

/// M' = (M − •G) + G•; throws NotEnabledError when •G ⊄ M.
Multiset fire_step(const Net& net, const Multiset& marking, const Multiset& step);

/// Folds fire_step over singletons; accepted words are exactly FS(N).
Multiset fire_sequence(const Net& net, std::span<const NodeId> word);
Multiset fire_sequence(const Net& net, const Multiset& from, std::span<const NodeId> word);

/// Transitions enabled as singletons at `marking`, in declaration order.
std::vector<NodeId> enabled_transitions(const Net& net, const Multiset& marking);

struct ExploreBounds {
  std::size_t max_seq_len = 12;
  Multiset::Count max_tokens_per_place = 8;
  std::size_t max_states = 100000;
};

/// Breadth-first enumeration of FS(N) up to the bounds. `closed` holds iff
/// no bound suppressed an extension, i.e. every run of the net terminates
/// within the bounds and the listed sequences are all of FS(N).
struct ExploreResult {
  std::vector<Multiset> markings;                  // distinct, discovery order
  std::vector<std::vector<NodeId>> sequences;      // BFS order, starts with ε
  std::vector<Multiset> final_markings;            // aligned with sequences
  Verdict verdict;
};

ExploreResult explore(const Net& net, const ExploreBounds& bounds = {});

/// Deduplicated reachable-marking search (markings only). Unlike explore,
/// this closes on nets with cyclic behaviour but finite state space.
struct ReachResult {
  std::vector<Multiset> markings;  // discovery order, starts with M0
  Verdict verdict;
};

ReachResult reachable_markings(const Net& net, const ExploreBounds& bounds = {});

}  // namespace ptsem
