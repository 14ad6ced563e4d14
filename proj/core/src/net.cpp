#include "ptsem/net.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace ptsem {

std::optional<NodeId> Net::find(std::string_view name) const {
  for (NodeId id = 0; id < node_names.size(); ++id) {
    if (node_names[id] == name) return id;
  }
  return std::nullopt;
}

NodeId Net::require_transition(std::string_view name) const {
  auto id = find(name);
  if (!id || !is_transition(*id)) {
    throw std::runtime_error("unknown transition: " + std::string(name));
  }
  return *id;
}

Multiset::Count Net::arc_weight(NodeId src, NodeId dst) const {
  auto it = flow.find({src, dst});
  return it == flow.end() ? 0 : it->second;
}

std::vector<NodeId> Net::word(std::string_view text) const {
  std::vector<NodeId> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(require_transition(tok));
  return out;
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> toks;
  std::istringstream in{std::string(line)};
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

Multiset::Count parse_count(const std::string& text, int line, const char* what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("invalid ") + what + ": '" + text + "'");
  }
}

// Accepts "key=value"; returns value or nullopt if the key does not match.
std::optional<Multiset::Count> keyed_count(const std::string& tok, const std::string& key,
                                           int line) {
  if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 ||
      tok[key.size()] != '=') {
    return std::nullopt;
  }
  return parse_count(tok.substr(key.size() + 1), line, key.c_str());
}

}  // namespace

Net parse_net(std::string_view text) {
  Net net;
  std::map<std::string, NodeId, std::less<>> index;
  std::vector<Multiset::Entry> marking_entries;
  bool saw_header = false;
  int line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& verb = toks[0];

    if (!saw_header) {
      if (verb != "net") throw ParseError(line_no, "expected 'net <name>' header first");
      if (toks.size() != 2) throw ParseError(line_no, "expected 'net <name>'");
      net.name = toks[1];
      saw_header = true;
      continue;
    }

    if (verb == "place" || verb == "trans") {
      if (toks.size() < 2) throw ParseError(line_no, "expected '" + verb + " <id>'");
      const std::string& id = toks[1];
      if (index.count(id)) throw ParseError(line_no, "duplicate id: '" + id + "'");
      NodeId node = static_cast<NodeId>(net.node_names.size());
      net.node_names.push_back(id);
      index.emplace(id, node);
      if (verb == "place") {
        net.node_kinds.push_back(NodeKind::Place);
        net.places.push_back(node);
        Multiset::Count tokens = 0;
        for (std::size_t i = 2; i < toks.size(); ++i) {
          auto v = keyed_count(toks[i], "tokens", line_no);
          if (!v) throw ParseError(line_no, "unexpected token '" + toks[i] + "'");
          tokens = *v;
        }
        if (tokens > 0) marking_entries.emplace_back(node, tokens);
      } else {
        net.node_kinds.push_back(NodeKind::Transition);
        net.transitions.push_back(node);
        if (toks.size() > 2) throw ParseError(line_no, "unexpected token '" + toks[2] + "'");
      }
      continue;
    }

    if (verb == "arc") {
      if (toks.size() < 3) throw ParseError(line_no, "expected 'arc <src> <dst>'");
      auto src = index.find(toks[1]);
      auto dst = index.find(toks[2]);
      if (src == index.end()) throw ParseError(line_no, "unknown node: '" + toks[1] + "'");
      if (dst == index.end()) throw ParseError(line_no, "unknown node: '" + toks[2] + "'");
      Multiset::Count weight = 1;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        auto v = keyed_count(toks[i], "weight", line_no);
        if (!v) throw ParseError(line_no, "unexpected token '" + toks[i] + "'");
        weight = *v;
      }
      NodeKind ks = net.node_kinds[src->second];
      NodeKind kd = net.node_kinds[dst->second];
      if (ks == kd) {
        throw ParseError(line_no, ks == NodeKind::Place
                                      ? "arc between two places: '" + toks[1] + "' -> '" + toks[2] + "'"
                                      : "arc between two transitions: '" + toks[1] + "' -> '" + toks[2] + "'");
      }
      auto key = std::make_pair(src->second, dst->second);
      net.flow[key] = checked_add(net.flow.count(key) ? net.flow[key] : 0, weight);
      if (net.flow[key] == 0) net.flow.erase(key);
      continue;
    }

    throw ParseError(line_no, "unknown directive: '" + verb + "'");
  }

  if (!saw_header) throw ParseError(line_no == 0 ? 1 : line_no, "empty input, expected 'net <name>'");

  net.initial_marking = Multiset(std::move(marking_entries));

  net.pre.assign(net.node_count(), Multiset());
  net.post.assign(net.node_count(), Multiset());
  std::vector<std::vector<Multiset::Entry>> pre_acc(net.node_count()), post_acc(net.node_count());
  for (const auto& [arc, w] : net.flow) {
    post_acc[arc.first].emplace_back(arc.second, w);
    pre_acc[arc.second].emplace_back(arc.first, w);
  }
  for (NodeId id = 0; id < net.node_count(); ++id) {
    net.pre[id] = Multiset(std::move(pre_acc[id]));
    net.post[id] = Multiset(std::move(post_acc[id]));
  }

  for (NodeId t : net.transitions) {
    if (net.pre[t].empty()) {
      throw ParseError(line_no, "transition has empty preset: '" + net.node_names[t] + "'");
    }
  }
  return net;
}

std::pair<Multiset, Multiset> pre_post(const Net& net, const Multiset& nodes) {
  Multiset pre_sum, post_sum;
  for (const auto& [node, mult] : nodes.entries()) {
    if (node >= net.node_count()) {
      throw std::runtime_error("unknown node id: " + std::to_string(node));
    }
    std::vector<Multiset::Entry> scaled_pre, scaled_post;
    for (const auto& [k, c] : net.pre[node].entries()) scaled_pre.emplace_back(k, checked_mul(c, mult));
    for (const auto& [k, c] : net.post[node].entries()) scaled_post.emplace_back(k, checked_mul(c, mult));
    pre_sum = combine(pre_sum, Multiset(std::move(scaled_pre)), CombineMode::Sum);
    post_sum = combine(post_sum, Multiset(std::move(scaled_post)), CombineMode::Sum);
  }
  return {pre_sum, post_sum};
}

bool step_enabled(const Net& net, const Multiset& marking, const Multiset& step) {
  return leq(pre_post(net, step).first, marking);
}

Multiset fire_step(const Net& net, const Multiset& marking, const Multiset& step) {
  auto [pre_g, post_g] = pre_post(net, step);
  if (!leq(pre_g, marking)) {
    Multiset deficient = monus(pre_g, marking);
    std::string msg = "not enabled; deficient places:";
    for (const auto& [place, c] : deficient.entries()) {
      msg += " " + net.name_of(place) + "(" + std::to_string(c) + ")";
    }
    throw NotEnabledError(msg, std::move(deficient));
  }
  return combine(monus(marking, pre_g), post_g, CombineMode::Sum);
}

Multiset fire_sequence(const Net& net, const Multiset& from, std::span<const NodeId> word) {
  Multiset m = from;
  for (std::size_t i = 0; i < word.size(); ++i) {
    try {
      m = fire_step(net, m, Multiset::single(word[i]));
    } catch (const NotEnabledError& e) {
      throw NotEnabledError("not a firing sequence at position " + std::to_string(i) + " ('" +
                                net.name_of(word[i]) + "'): " + e.what(),
                            e.deficient, i);
    }
  }
  return m;
}

Multiset fire_sequence(const Net& net, std::span<const NodeId> word) {
  return fire_sequence(net, net.initial_marking, word);
}

std::vector<NodeId> enabled_transitions(const Net& net, const Multiset& marking) {
  std::vector<NodeId> out;
  for (NodeId t : net.transitions) {
    if (leq(net.pre[t], marking)) out.push_back(t);
  }
  return out;
}

namespace {
bool within_token_bound(const Multiset& marking, Multiset::Count cap) {
  for (const auto& [_, c] : marking.entries()) {
    if (c > cap) return false;
  }
  return true;
}
}  // namespace

ExploreResult explore(const Net& net, const ExploreBounds& bounds) {
  ExploreResult result;
  bool closed = true;
  std::string bound_hit;
  auto note_bound = [&](const char* which) {
    if (closed) bound_hit = which;
    closed = false;
  };

  std::set<Multiset> seen_markings;
  auto record_marking = [&](const Multiset& m) {
    if (seen_markings.insert(m).second) result.markings.push_back(m);
  };

  record_marking(net.initial_marking);
  result.sequences.push_back({});
  result.final_markings.push_back(net.initial_marking);

  std::deque<std::size_t> frontier{0};
  bool truncated = false;
  while (!frontier.empty() && !truncated) {
    std::size_t idx = frontier.front();
    frontier.pop_front();
    const Multiset marking = result.final_markings[idx];
    auto enabled = enabled_transitions(net, marking);
    if (enabled.empty()) continue;
    if (result.sequences[idx].size() >= bounds.max_seq_len) {
      note_bound("max_seq_len");
      continue;
    }
    for (NodeId t : enabled) {
      Multiset next = fire_step(net, marking, Multiset::single(t));
      if (!within_token_bound(next, bounds.max_tokens_per_place)) {
        note_bound("max_tokens_per_place");
        continue;
      }
      if (result.sequences.size() >= bounds.max_states) {
        note_bound("max_states");
        truncated = true;
        break;
      }
      std::vector<NodeId> seq = result.sequences[idx];
      seq.push_back(t);
      record_marking(next);
      result.sequences.push_back(std::move(seq));
      result.final_markings.push_back(std::move(next));
      frontier.push_back(result.sequences.size() - 1);
    }
  }

  result.verdict = closed ? Verdict::holds() : Verdict::unknown(bound_hit);
  return result;
}

ReachResult reachable_markings(const Net& net, const ExploreBounds& bounds) {
  ReachResult result;
  bool closed = true;
  std::string bound_hit;

  std::set<Multiset> seen{net.initial_marking};
  result.markings.push_back(net.initial_marking);
  std::deque<std::size_t> frontier{0};

  while (!frontier.empty()) {
    std::size_t idx = frontier.front();
    frontier.pop_front();
    const Multiset marking = result.markings[idx];
    for (NodeId t : enabled_transitions(net, marking)) {
      Multiset next = fire_step(net, marking, Multiset::single(t));
      if (!within_token_bound(next, bounds.max_tokens_per_place)) {
        if (closed) bound_hit = "max_tokens_per_place";
        closed = false;
        continue;
      }
      if (!seen.insert(next).second) continue;
      if (result.markings.size() >= bounds.max_states) {
        if (closed) bound_hit = "max_states";
        closed = false;
        frontier.clear();
        break;
      }
      result.markings.push_back(next);
      frontier.push_back(result.markings.size() - 1);
    }
  }

  result.verdict = closed ? Verdict::holds() : Verdict::unknown(bound_hit);
  return result;
}

}  // namespace ptsem
