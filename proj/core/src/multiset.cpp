#include "ptsem/multiset.hpp"

#include <algorithm>

namespace ptsem {

Multiset::Count checked_add(Multiset::Count a, Multiset::Count b) {
  Multiset::Count r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("multiset count overflow in addition");
  return r;
}

Multiset::Count checked_mul(Multiset::Count a, Multiset::Count b) {
  Multiset::Count r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("multiset count overflow in multiplication");
  return r;
}

Multiset::Multiset(std::initializer_list<Entry> entries)
    : entries_(entries) {
  normalize();
}

Multiset::Multiset(std::vector<Entry> entries) : entries_(std::move(entries)) {
  normalize();
}

Multiset Multiset::single(Key key, Count count) {
  return Multiset(std::vector<Entry>{{key, count}});
}

void Multiset::normalize() {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second = checked_add(merged.back().second, e.second);
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.second == 0; });
  entries_ = std::move(merged);
}

Multiset::Count Multiset::count(Key key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, Key k) { return e.first < k; });
  if (it == entries_.end() || it->first != key) return 0;
  return it->second;
}

Multiset::Count Multiset::cardinality() const {
  Count total = 0;
  for (const Entry& e : entries_) total = checked_add(total, e.second);
  return total;
}

Multiset combine(const Multiset& a, const Multiset& b, CombineMode mode) {
  std::vector<Multiset::Entry> out;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0, j = 0;
  auto push = [&out](Multiset::Key k, Multiset::Count c) {
    if (c > 0) out.emplace_back(k, c);
  };
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      if (mode != CombineMode::Intersection) push(ea[i].first, ea[i].second);
      ++i;
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      if (mode != CombineMode::Intersection) push(eb[j].first, eb[j].second);
      ++j;
    } else {
      switch (mode) {
        case CombineMode::Sum:
          push(ea[i].first, checked_add(ea[i].second, eb[j].second));
          break;
        case CombineMode::Union:
          push(ea[i].first, std::max(ea[i].second, eb[j].second));
          break;
        case CombineMode::Intersection:
          push(ea[i].first, std::min(ea[i].second, eb[j].second));
          break;
      }
      ++i;
      ++j;
    }
  }
  return Multiset(std::move(out));
}

Multiset monus(const Multiset& a, const Multiset& b) {
  std::vector<Multiset::Entry> out;
  for (const auto& [k, c] : a.entries()) {
    Multiset::Count sub = b.count(k);
    if (c > sub) out.emplace_back(k, c - sub);
  }
  return Multiset(std::move(out));
}

Multiset scale_restrict(const Multiset& a, Multiset::Count k,
                        std::span<const Multiset::Key> keep) {
  std::vector<Multiset::Entry> out;
  if (k == 0) return Multiset();
  for (const auto& [key, c] : a.entries()) {
    if (std::find(keep.begin(), keep.end(), key) == keep.end()) continue;
    out.emplace_back(key, checked_mul(c, k));
  }
  return Multiset(std::move(out));
}

bool leq(const Multiset& a, const Multiset& b) {
  for (const auto& [k, c] : a.entries()) {
    if (c > b.count(k)) return false;
  }
  return true;
}

}  // namespace ptsem
