#include <doctest.h>

#include "ptsem/swapping.hpp"
#include "support/testnets.hpp"

using namespace ptsem;
using namespace ptsem::test;

namespace {

// The first maximal process of fig1 drawn by hand: conditions 1,2,3,4,4,5;
// the consumer takes the 4-token produced by a.
Process fig1_left_by_hand(const Net& net) {
  auto id = [&net](const char* n) { return *net.find(n); };
  Process p;
  p.conditions = {
      {id("1"), -1, 0}, {id("2"), -1, 1}, {id("3"), -1, 2},
      {id("4"), 0, 2},  {id("4"), 1, -1}, {id("5"), 2, -1},
  };
  p.events = {
      {id("a"), {0}, {3}},
      {id("b"), {1}, {4}},
      {id("c"), {2, 3}, {5}},
  };
  return p;
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("validate accepts the hand-drawn maximal process") {
  Net net = fixture("fig1.net");
  Process p = fig1_left_by_hand(net);
  CHECK(validate(net, p).empty());
  CHECK(validate(net, proc(net, net.word("a b c"), TokenPolicy::Fifo)).empty());
}

TEST_CASE("validate reports missing preimage conditions") {
  Net net = fixture("fig1.net");
  Process p = fig1_left_by_hand(net);
  // Drop the 3-labelled condition: event c now folds to the wrong preset.
  p.conditions.erase(p.conditions.begin() + 2);
  for (auto& ev : p.events) {
    for (auto& c : ev.pre) {
      if (c > 2) --c;
    }
    for (auto& c : ev.post) {
      if (c > 2) --c;
    }
  }
  p.events[2].pre = {2};  // was {3-cond, 4-cond}, the 3-cond is gone
  auto violations = validate(net, p);
  REQUIRE(
      !violations.empty());
  bool found = false;
  for (const auto& v : violations) {
    if (v.clause == "arc-weight fold (preset)" && v.detail.find("'c'") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("validate reports forward-branching conditions") {
  Net net = fixture("fig1.net");
  Process p = fig1_left_by_hand(net);
  // Let b also consume the 3-labelled condition: two post-events on one
  // condition.
  p.events[1].pre = {1, 2};
  auto violations = validate(net, p);
  bool branching = false;
  for (const auto& v : violations) {
    if (v.clause == "|post(s)| <= 1") branching = true;
  }
  CHECK(branching);
}

TEST_CASE("initial_process lays out one condition per token") {
  Net fig1 = fixture("fig1.net");
  Process p0 = initial_process(fig1);
  CHECK(p0.events.empty());
  CHECK(p0.conditions.size() == 3);
  CHECK(p0.cut_marking() == fig1.initial_marking);

  Net fig2 = fixture("fig2.net");
  Process q0 = initial_process(fig2);
  CHECK(q0.conditions.size() == 6);
  CHECK(q0.cut_marking() == fig2.initial_marking);
  // Two conditions fold to the doubly marked place.
  int p_count = 0;
  for (const auto& c : q0.conditions) {
    if (c.place == *fig2.find("p")) ++p_count;
  }
  CHECK(p_count == 2);

  Net empty = parse_net("net e\nplace s\ntrans t\narc s t");
  CHECK(initial_process(empty).conditions.empty());
}

TEST_CASE("extend policies pick the oldest or newest token") {
  Net net = fixture("fig1.net");
  auto word = net.word("a b c");
  Process left = proc(net, word, TokenPolicy::Fifo);
  // Fifo: c consumed the 4-condition created by a (creation index 3).
  CHECK(left.events[2].pre == std::vector<std::uint32_t>{2, 3});
  CHECK(isomorphic(left, fig1_left_by_hand(net)));

  Process p = initial_process(net);
  p = extend(net, p, *net.find("a"), TokenPolicy::Lifo);
  p = extend(net, p, *net.find("b"), TokenPolicy::Lifo);
  p = extend(net, p, *net.find("c"), TokenPolicy::Lifo);
  // Lifo: c consumed b's 4-condition (creation index 4).
  CHECK(p.events[2].pre == std::vector<std::uint32_t>{2, 4});
  CHECK_FALSE(isomorphic(left, p));

  CHECK_THROWS_AS((void)extend(net, initial_process(net), *net.find("c"), TokenPolicy::Fifo),
                  NotEnabledError);
}

TEST_CASE("proc folds extend and matches the marking semantics") {
  Net fig1 = fixture("fig1.net");
  CHECK(proc(fig1, {}, TokenPolicy::Fifo) == initial_process(fig1));

  Net fig2 = fixture("fig2.net");
  auto word = fig2.word("a b d c");
  Process p = proc(fig2, word, TokenPolicy::Fifo);
  CHECK(p.events.size() == 4);
  CHECK(validate(fig2, p).empty());
  CHECK(p.cut_marking() == fire_sequence(fig2, word));
}

TEST_CASE("prefix_of follows construction order") {
  Net net = fixture("fig1.net");
  Process a = proc(net, net.word("a"), TokenPolicy::Fifo);
  Process abc = proc(net, net.word("a b c"), TokenPolicy::Fifo);
  CHECK(prefix_of(a, abc));
  CHECK(prefix_of(abc, abc));
  CHECK_FALSE(prefix_of(abc, a));

  Process left = proc(net, net.word("a b c"), TokenPolicy::Fifo);
  Process right = proc(net, net.word("a b c"), TokenPolicy::Lifo);
  CHECK_FALSE(prefix_of(left, right));  // flow differs on the consumer's preset

  // Partial order on a chain of prefixes.
  Process ab = proc(net, net.word("a b"), TokenPolicy::Fifo);
  CHECK(prefix_of(a, ab));
  CHECK(prefix_of(ab, abc));
  CHECK(prefix_of(a, abc));
  CHECK_FALSE(prefix_of(ab, a));
}

TEST_CASE("downward closure of prefixes") {
  Net net = fixture("fig1.net");
  Process abc = proc(net, net.word("a b c"), TokenPolicy::Fifo);
  // {c} alone is not downward closed: c depends on a.
  CHECK_THROWS_WITH((void)prefix_by_events(abc, {false, false, true}),
                    doctest::Contains("not downward closed"));
  Process just_b = prefix_by_events(abc, {false, true, false});
  CHECK(just_b.events.size() == 1);
  CHECK(validate(net, just_b).empty());
  CHECK(just_b.events[0].transition == *net.find("b"));

  auto sets = downward_closed_event_sets(abc);
  // a,b free; c needs only a (it consumed a's token):
  // {}, {a}, {b}, {ab}, {ac}, {abc}.
  CHECK(sets.size() == 6);
}

TEST_CASE("cut matches the firing rule step by step") {
  Net net = fixture("fig1.net");
  auto id = [&net](const char* n) { return *net.find(n); };
  Process left = proc(net, net.word("a b c"), TokenPolicy::Fifo);
  CHECK(cut(left).marking == Multiset{{id("4"), 1}, {id("5"), 1}});
  CHECK(cut(initial_process(net)).marking == net.initial_marking);
  Process ab = proc(net, net.word("a b"), TokenPolicy::Fifo);
  CHECK(cut(ab).marking == Multiset{{id("3"), 1}, {id("4"), 2}});
  CHECK(cut(ab).marking == fire_sequence(net, net.word("a b")));
}

TEST_CASE("linearize is a deterministic topological order") {
  Net fig1 = fixture("fig1.net");
  Process left = proc(fig1, fig1.word("a b c"), TokenPolicy::Fifo);
  CHECK(linearize(left) == fig1.word("a b c"));
  CHECK(linearize(initial_process(fig1)).empty());

  Net fig2 = fixture("fig2.net");
  auto word = fig2.word("b a d c");
  CHECK(linearize(proc(fig2, word, TokenPolicy::Fifo)) == word);
}

TEST_CASE("linearizations are firing sequences with matching cut") {
  // Observation-style bisimulation identities over everything explored.
  for (const char* name : {"fig1.net", "fig2.net"}) {
    Net net = fixture(name);
    ExploreResult fs = explore(net);
    REQUIRE(fs.verdict.is_holds());
    for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
      Process p = proc(net, fs.sequences[i], TokenPolicy::Fifo);
      CHECK(p.cut_marking() == fs.final_markings[i]);
      auto lin = linearize(p);
      CHECK(fire_sequence(net, lin) == fs.final_markings[i]);
      // One-step bisimulation: extending matches firing.
      for (NodeId t : enabled_transitions(net, fs.final_markings[i])) {
        Process q = extend(net, p, t, TokenPolicy::Fifo);
        CHECK(q.cut_marking() == fire_step(net, fs.final_markings[i], Multiset::single(t)));
      }
    }
  }
}

}  // TEST_SUITE
