#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptsem/multiset.hpp"

namespace ptsem {

using NodeId = std::uint32_t;

enum class Outcome { Holds, Fails, Unknown };

/// Structured evidence attached to a failing verdict. Only the fields
/// relevant to the particular check are set.
struct Witness {
  std::optional<Multiset> marking;
  std::optional<Multiset> step;
  std::vector<NodeId> sequence;
  std::optional<NodeId> shared_place;
  std::string note;
};

/// Three-valued result of a bounded analysis: a possibly unbounded state
/// space forces an honest `Unknown` whenever a search bound was exhausted.
struct Verdict {
  Outcome outcome = Outcome::Holds;
  std::optional<Witness> witness;        // present iff outcome == Fails
  std::optional<std::string> bound_hit;  // present iff outcome == Unknown

  static Verdict holds() { return Verdict{}; }
  static Verdict fails(Witness w) {
    return Verdict{Outcome::Fails, std::move(w), std::nullopt};
  }
  static Verdict unknown(std::string bound) {
    return Verdict{Outcome::Unknown, std::nullopt, std::move(bound)};
  }

  bool is_holds() const { return outcome == Outcome::Holds; }
  bool is_fails() const { return outcome == Outcome::Fails; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }
};

}  // namespace ptsem
