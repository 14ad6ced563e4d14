#include "ptsem/canonical.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <tuple>

namespace ptsem {

namespace {

constexpr char kFormatVersion = 1;

void put_uvarint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint64_t get_uvarint(const std::string& in, std::size_t& pos) {
  std::uint64_t v = 0;
  int shift = 0;
  while (true) {
    if (pos >= in.size()) throw std::runtime_error("truncated canonical form");
    auto byte = static_cast<unsigned char>(in[pos++]);
    v |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
    if ((byte & 0x80) == 0) break;
    shift += 7;
    if (shift > 63) throw std::runtime_error("malformed canonical form");
  }
  return v;
}

// Encodes the process under the given placements: cond_rank[c] is the
// canonical index of condition c, event order lists event ids in canonical
// order. Events refer to conditions through their canonical indices.
CanonicalForm encode(const Process& p, const std::vector<std::uint32_t>& cond_rank,
                     const std::vector<std::uint32_t>& event_order) {
  CanonicalForm out;
  out.push_back(kFormatVersion);
  put_uvarint(out, p.conditions.size());
  put_uvarint(out, p.events.size());
  std::vector<NodeId> place_by_rank(p.conditions.size());
  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
    place_by_rank[cond_rank[c]] = p.conditions[c].place;
  }
  for (NodeId place : place_by_rank) put_uvarint(out, place);
  for (std::uint32_t e : event_order) {
    const Event& ev = p.events[e];
    put_uvarint(out, ev.transition);
    std::vector<std::uint32_t> pre, post;
    for (std::uint32_t c : ev.pre) pre.push_back(cond_rank[c]);
    for (std::uint32_t c : ev.post) post.push_back(cond_rank[c]);
    std::sort(pre.begin(), pre.end());
    std::sort(post.begin(), post.end());
    put_uvarint(out, pre.size());
    for (std::uint32_t c : pre) put_uvarint(out, c);
    put_uvarint(out, post.size());
    for (std::uint32_t c : post) put_uvarint(out, c);
  }
  return out;
}

// Individualization-refinement search state over the bipartite
// condition/event graph of a process.
struct CanonSearch {
  const Process& p;
  const CanonBudget& budget;
  std::size_t n;   // conditions first, then events
  std::size_t nc;
  std::vector<std::vector<std::uint32_t>> out_adj, in_adj;
  std::vector<std::uint64_t> twin_key;  // conditions only; interchangeable iff equal
  std::size_t leaves = 0;
  std::size_t refinements = 0;
  bool have_best = false;
  CanonicalForm best;

  explicit CanonSearch(const Process& proc, const CanonBudget& b) : p(proc), budget(b) {
    nc = p.conditions.size();
    n = nc + p.events.size();
    out_adj.resize(n);
    in_adj.resize(n);
    for (std::uint32_t e = 0; e < p.events.size(); ++e) {
      std::uint32_t ev = nc + e;
      for (std::uint32_t c : p.events[e].pre) {
        out_adj[c].push_back(ev);
        in_adj[ev].push_back(c);
      }
      for (std::uint32_t c : p.events[e].post) {
        out_adj[ev].push_back(c);
        in_adj[c].push_back(ev);
      }
    }
    twin_key.resize(nc);
    for (std::uint32_t c = 0; c < nc; ++c) {
      // Conditions with equal place, producer and consumer are swappable by
      // an automorphism; branching on more than one of them is redundant.
      twin_key[c] = (static_cast<std::uint64_t>(p.conditions[c].place) << 40) ^
                    (static_cast<std::uint64_t>(p.conditions[c].pre_event + 1) << 20) ^
                    static_cast<std::uint64_t>(p.conditions[c].post_event + 1);
    }
  }

  using Cells = std::vector<std::vector<std::uint32_t>>;

  Cells initial_partition() const {
    std::map<std::tuple<int, NodeId, std::size_t, std::size_t>, std::vector<std::uint32_t>> groups;
    for (std::uint32_t v = 0; v < n; ++v) {
      bool is_cond = v < nc;
      NodeId label = is_cond ? p.conditions[v].place : p.events[v - nc].transition;
      groups[{is_cond ? 0 : 1, label, in_adj[v].size(), out_adj[v].size()}].push_back(v);
    }
    Cells cells;
    for (auto& [_, members] : groups) cells.push_back(std::move(members));
    return cells;
  }

  // Splits cells by neighbour-cell signatures until the partition is stable.
  void refine(Cells& cells) {
    std::vector<std::uint32_t> pos(n);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t i = 0; i < cells.size(); ++i) {
        for (std::uint32_t v : cells[i]) pos[v] = i;
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].size() <= 1) continue;
        if (++refinements > budget.max_refinements) {
          throw BudgetError("canonical-form refinement budget",
                            "canonical labeling exceeded the refinement budget");
        }
        using Sig = std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>;
        std::map<Sig, std::vector<std::uint32_t>> groups;
        for (std::uint32_t v : cells[i]) {
          Sig sig;
          for (std::uint32_t w : out_adj[v]) sig.first.push_back(pos[w]);
          for (std::uint32_t w : in_adj[v]) sig.second.push_back(pos[w]);
          std::sort(sig.first.begin(), sig.first.end());
          std::sort(sig.second.begin(), sig.second.end());
          groups[std::move(sig)].push_back(v);
        }
        if (groups.size() <= 1) continue;
        Cells replacement;
        replacement.reserve(cells.size() + groups.size() - 1);
        for (std::size_t j = 0; j < i; ++j) replacement.push_back(std::move(cells[j]));
        for (auto& [_, members] : groups) replacement.push_back(std::move(members));
        for (std::size_t j = i + 1; j < cells.size(); ++j) replacement.push_back(std::move(cells[j]));
        cells = std::move(replacement);
        changed = true;
        break;
      }
    }
  }

  void search(Cells cells) {
    refine(cells);
    std::size_t branch_cell = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].size() > 1) {
        branch_cell = i;
        break;
      }
    }
    if (branch_cell == cells.size()) {
      if (++leaves > budget.max_leaves) {
        throw BudgetError("canonical-form leaf budget",
                          "canonical labeling exceeded the leaf budget");
      }
      std::vector<std::uint32_t> cond_rank(nc);
      std::vector<std::uint32_t> event_order;
      std::uint32_t crank = 0;
      for (const auto& cell : cells) {
        std::uint32_t v = cell.front();
        if (v < nc) {
          cond_rank[v] = crank++;
        } else {
          event_order.push_back(v - static_cast<std::uint32_t>(nc));
        }
      }
      CanonicalForm form = encode(p, cond_rank, event_order);
      if (!have_best || form < best) {
        best = std::move(form);
        have_best = true;
      }
      return;
    }

    std::vector<std::uint64_t> tried;
    for (std::uint32_t v : cells[branch_cell]) {
      if (v < nc) {
        if (std::find(tried.begin(), tried.end(), twin_key[v]) != tried.end()) continue;
        tried.push_back(twin_key[v]);
      }
      Cells next;
      next.reserve(cells.size() + 1);
      for (std::size_t j = 0; j < branch_cell; ++j) next.push_back(cells[j]);
      next.push_back({v});
      std::vector<std::uint32_t> rest;
      for (std::uint32_t w : cells[branch_cell]) {
        if (w != v) rest.push_back(w);
      }
      next.push_back(std::move(rest));
      for (std::size_t j = branch_cell + 1; j < cells.size(); ++j) next.push_back(cells[j]);
      search(std::move(next));
    }
  }
};

}  // namespace

CanonicalForm canonical_form(const Process& p, const CanonBudget& budget) {
  CanonSearch search(p, budget);
  search.search(search.initial_partition());
  return search.best;
}

CanonicalForm raw_encoding(const Process& p) {
  std::vector<std::uint32_t> cond_rank(p.conditions.size());
  std::vector<std::uint32_t> event_order(p.events.size());
  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) cond_rank[c] = c;
  for (std::uint32_t e = 0; e < p.events.size(); ++e) event_order[e] = e;
  return encode(p, cond_rank, event_order);
}

Process decode_form(const CanonicalForm& form) {
  std::size_t pos = 0;
  if (form.empty() || form[0] != kFormatVersion) {
    throw std::runtime_error("unsupported canonical form version");
  }
  pos = 1;
  std::uint64_t nc = get_uvarint(form, pos);
  std::uint64_t ne = get_uvarint(form, pos);
  Process p;
  p.conditions.resize(nc);
  for (std::uint64_t c = 0; c < nc; ++c) {
    p.conditions[c] = {static_cast<NodeId>(get_uvarint(form, pos)), -1, -1};
  }
  for (std::uint64_t e = 0; e < ne; ++e) {
    Event ev;
    ev.transition = static_cast<NodeId>(get_uvarint(form, pos));
    std::uint64_t npre = get_uvarint(form, pos);
    for (std::uint64_t i = 0; i < npre; ++i) {
      auto c = static_cast<std::uint32_t>(get_uvarint(form, pos));
      ev.pre.push_back(c);
      p.conditions[c].post_event = static_cast<std::int32_t>(e);
    }
    std::uint64_t npost = get_uvarint(form, pos);
    for (std::uint64_t i = 0; i < npost; ++i) {
      auto c = static_cast<std::uint32_t>(get_uvarint(form, pos));
      ev.post.push_back(c);
      p.conditions[c].pre_event = static_cast<std::int32_t>(e);
    }
    p.events.push_back(std::move(ev));
  }
  if (pos != form.size()) throw std::runtime_error("trailing bytes in canonical form");
  return p;
}

std::string form_to_hex(const CanonicalForm& form) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(form.size() * 2);
  for (char ch : form) {
    auto byte = static_cast<unsigned char>(ch);
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xF]);
  }
  return out;
}

}  // namespace ptsem
