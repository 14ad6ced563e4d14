#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ptsem {

/// Thrown when a multiset count computation would wrap around.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Finite multiset over interned identifiers. Entries with count zero are
/// never stored, so extensionally equivalent multisets compare equal.
/// Immutable after construction.
class Multiset {
 public:
  using Key = std::uint32_t;
  using Count = std::uint64_t;
  using Entry = std::pair<Key, Count>;

  Multiset() = default;
  Multiset(std::initializer_list<Entry> entries);
  explicit Multiset(std::vector<Entry> entries);

  static Multiset single(Key key, Count count = 1);

  Count count(Key key) const;
  bool contains(Key key) const { return count(key) > 0; }
  bool empty() const { return entries_.empty(); }

  /// |A|: the sum of all counts.
  Count cardinality() const;
  std::size_t support_size() const { return entries_.size(); }

  /// Sorted by key, all counts positive.
  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const Multiset&) const = default;
  /// Lexicographic on the sorted entry list; a total order for containers.
  bool operator<(const Multiset& other) const { return entries_ < other.entries_; }

 private:
  std::vector<Entry> entries_;
  void normalize();
};

enum class CombineMode { Sum, Union, Intersection };

Multiset combine(const Multiset& a, const Multiset& b, CombineMode mode);
Multiset monus(const Multiset& a, const Multiset& b);

/// (k·A)↾Y: scale every count by k, then drop entries outside `keep`.
Multiset scale_restrict(const Multiset& a, Multiset::Count k,
                        std::span<const Multiset::Key> keep);

/// A ⊆ B pointwise.
bool leq(const Multiset& a, const Multiset& b);

Multiset::Count checked_add(Multiset::Count a, Multiset::Count b);
Multiset::Count checked_mul(Multiset::Count a, Multiset::Count b);

}  // namespace ptsem
