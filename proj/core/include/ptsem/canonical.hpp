#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ptsem/process.hpp"

namespace ptsem {

/// Raised when a configured search budget was exhausted; the caller turns
/// this into an Unknown verdict, never into a silently wrong answer.
struct BudgetError : std::runtime_error {
  std::string budget;
  BudgetError(std::string budget_, const std::string& msg)
      : std::runtime_error(msg), budget(std::move(budget_)) {}
};

/// A total byte encoding of a process, equal for two processes of the same
/// net iff they are isomorphic respecting the folding. Deterministic and
/// platform independent; see docs/canonical_form.md for the layout.
using CanonicalForm = std::string;

struct CanonBudget {
  std::size_t max_leaves = 20000;
  std::size_t max_refinements = 2000000;
};

/// Lexicographically least encoding over all orderings produced by
/// partition refinement with backtracking over ties.
CanonicalForm canonical_form(const Process& p, const CanonBudget& budget = {});

/// The same encoding under the identity ordering; a cheap equality key for
/// concrete process values (not isomorphism-invariant).
CanonicalForm raw_encoding(const Process& p);

/// Rebuilds a process from its encoding (any ordering).
Process decode_form(const CanonicalForm& form);

std::string form_to_hex(const CanonicalForm& form);

}  // namespace ptsem
