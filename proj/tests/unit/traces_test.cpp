#include <doctest.h>

#include "ptsem/traces.hpp"
#include "support/testnets.hpp"

using namespace ptsem;
using namespace ptsem::test;

TEST_SUITE("traces") {

TEST_CASE("adjacency is one enabled transposition") {
  Net fig1 = fixture("fig1.net");
  CHECK(adjacent(fig1, fig1.word("a b c"), fig1.word("b a c")));
  // Not a single transposition, though both words fire.
  CHECK_FALSE(adjacent(fig1, fig1.word("a b c"), fig1.word("b c a")));
  CHECK(adjacent(fig1, fig1.word("a b c"), fig1.word("a c b")));  // {b,c} enabled after a
  // Words outside FS(N) are rejected outright.
  CHECK_THROWS_AS((void)adjacent(fig1, fig1.word("c a b"), fig1.word("a b c")),
                  NotEnabledError);

  Net fig2 = fixture("fig2.net");
  CHECK(adjacent(fig2, fig2.word("a b d c"), fig2.word("a d b c")));
}

TEST_CASE("trace classes close the adjacency relation") {
  Net fig1 = fixture("fig1.net");
  TraceClass complete = trace_class(fig1, fig1.word("a b c"));
  // All four complete words commute into one class: {a,b} at the start,
  // {b,c} and {a,c} after the first producer.
  CHECK(complete.members.size() == 4);
  std::set<std::vector<NodeId>> expect{fig1.word("a b c"), fig1.word("a c b"),
                                       fig1.word("b a c"), fig1.word("b c a")};
  for (const auto& m : complete.members) CHECK(expect.count(m) == 1);
  CHECK(complete.canonical_member() == fig1.word("a b c"));

  CHECK(trace_class(fig1, {}).members.size() == 1);

  Net fig2 = fixture("fig2.net");
  TraceClass cls = trace_class(fig2, fig2.word("a b d c"));
  std::set<std::vector<NodeId>> members(cls.members.begin(), cls.members.end());
  CHECK(members.count(fig2.word("b a d c")) == 1);
  CHECK(members.count(fig2.word("a d b c")) == 1);

  // Closure sanity: members are pairwise reachable, so every member has
  // the same transition multiset and final marking.
  Multiset final = fire_sequence(fig2, fig2.word("a b d c"));
  for (const auto& m : cls.members) CHECK(fire_sequence(fig2, m) == final);
}

TEST_CASE("trace class budget is loud") {
  Net fig2 = fixture("fig2.net");
  CHECK_THROWS_AS((void)trace_class(fig2, fig2.word("a b d c"), 2), BudgetError);
}

TEST_CASE("prefix order between classes") {
  Net fig1 = fixture("fig1.net");
  TraceClass a = trace_class(fig1, fig1.word("a"));
  TraceClass b = trace_class(fig1, fig1.word("b"));
  TraceClass abc = trace_class(fig1, fig1.word("a b c"));
  CHECK(trace_leq(a, abc));
  CHECK(trace_leq(b, abc));  // via the member "b a c"
  CHECK_FALSE(trace_leq(abc, a));
}

TEST_CASE("appending preserves equivalence") {
  Net fig2 = fixture("fig2.net");
  ExploreResult fs = explore(fig2);
  REQUIRE(fs.verdict.is_holds());
  std::map<std::vector<NodeId>, Multiset> final_of;
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    final_of[fs.sequences[i]] = fs.final_markings[i];
  }
  for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
    TraceClass cls = trace_class(fig2, fs.sequences[i]);
    for (NodeId t : enabled_transitions(fig2, fs.final_markings[i])) {
      std::vector<NodeId> extended = fs.sequences[i];
      extended.push_back(t);
      TraceClass cls_ext = trace_class(fig2, extended);
      for (const auto& member : cls.members) {
        std::vector<NodeId> other = member;
        other.push_back(t);
        if (final_of.count(other)) {
          // same class as the extension of the original member
          CHECK(std::binary_search(cls_ext.members.begin(), cls_ext.members.end(), other));
        }
      }
    }
  }
}

TEST_CASE("binary-conflict-free diamонd lemmas") {
  // On nets whose binary-conflict check holds: one-step divergences join
  // immediately, and a fresh transition commutes over a word avoiding it.
  for (std::uint32_t seed = 1; seed <= 40; ++seed) {
    Net net = random_net(seed);
    ExploreBounds bounds;
    bounds.max_seq_len = 5;
    bounds.max_states = 3000;
    ExploreResult fs = explore(net, bounds);
    if (!fs.verdict.is_holds()) continue;
    // Inline binary-conflict-freeness via the semantic definition.
    bool bcf = true;
    for (const auto& m : fs.final_markings) {
      auto enabled = enabled_transitions(net, m);
      for (std::size_t x = 0; x < enabled.size() && bcf; ++x) {
        for (std::size_t y = x + 1; y < enabled.size() && bcf; ++y) {
          Multiset pair = combine(Multiset::single(enabled[x]), Multiset::single(enabled[y]),
                                  CombineMode::Sum);
          if (!step_enabled(net, m, pair)) bcf = false;
        }
      }
    }
    if (!bcf) continue;
    for (std::size_t i = 0; i < fs.sequences.size(); ++i) {
      auto enabled = enabled_transitions(net, fs.final_markings[i]);
      for (std::size_t x = 0; x < enabled.size(); ++x) {
        for (std::size_t y = x + 1; y < enabled.size(); ++y) {
          std::vector<NodeId> tu = fs.sequences[i];
          tu.push_back(enabled[x]);
          tu.push_back(enabled[y]);
          std::vector<NodeId> ut = fs.sequences[i];
          ut.push_back(enabled[y]);
          ut.push_back(enabled[x]);
          (void)fire_sequence(net, tu);  // both must be firing sequences
          (void)fire_sequence(net, ut);
          TraceClass cls = trace_class(net, tu);
          CHECK(std::binary_search(cls.members.begin(), cls.members.end(), ut));
        }
      }
    }

    // A fresh enabled transition commutes over any word avoiding it.
    if (fs.sequences.size() > 300) continue;
    for (const auto& word : fs.sequences) {
      for (std::size_t k = 0; k < word.size(); ++k) {
        std::vector<NodeId> sigma(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<NodeId> rho(word.begin() + static_cast<std::ptrdiff_t>(k), word.end());
        for (NodeId t : enabled_transitions(net, fire_sequence(net, sigma))) {
          if (std::find(rho.begin(), rho.end(), t) != rho.end()) continue;
          std::vector<NodeId> t_rho = sigma;
          t_rho.push_back(t);
          t_rho.insert(t_rho.end(), rho.begin(), rho.end());
          std::vector<NodeId> rho_t = sigma;
          rho_t.insert(rho_t.end(), rho.begin(), rho.end());
          rho_t.push_back(t);
          (void)fire_sequence(net, t_rho);
          (void)fire_sequence(net, rho_t);
          TraceClass cls = trace_class(net, t_rho);
          CHECK(std::binary_search(cls.members.begin(), cls.members.end(), rho_t));
        }
      }
    }
  }
}

TEST_CASE("correspondence holds on the drawn nets") {
  Net fig1 = fixture("fig1.net");
  CorrespondenceReport r1 = correspondence_check(fig1, 3);
  CHECK(r1.verdict.is_holds());
  CHECK(r1.trace_class_count == r1.swap_class_count);
  CHECK(r1.trace_class_count == 7);

  Net fig2 = fixture("fig2.net");
  CorrespondenceReport r2 = correspondence_check(fig2, 4);
  CHECK(r2.verdict.is_holds());
  // Exactly one class of complete four-transition words.
  ExploreBounds bounds;
  bounds.max_seq_len = 4;
  ExploreResult fs = explore(fig2, bounds);
  std::set<std::vector<NodeId>> classified;
  std::size_t complete_classes = 0;
  for (const auto& seq : fs.sequences) {
    if (seq.size() != 4 || classified.count(seq)) continue;
    TraceClass cls = trace_class(fig2, seq);
    for (const auto& m : cls.members) classified.insert(m);
    ++complete_classes;
  }
  CHECK(complete_classes == 1);

  Net remark = fixture("remark.net");
  CHECK(correspondence_check(remark, 6).verdict.is_holds());
}

TEST_CASE("directedness joins everything on conflict-free behaviour") {
  Net fig1 = fixture("fig1.net");
  CHECK(directedness_check(fig1, 3).is_holds());

  // fig2's complete words all commute even though a binary conflict exists
  // along the way.
  Net fig2 = fixture("fig2.net");
  CHECK(directedness_check(fig2, 4).is_holds());

  Net remark = fixture("remark.net");
  Verdict v = directedness_check(remark, 2);
  CHECK(v.is_fails());
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->note.find("'t' vs 'u'") != std::string::npos);

  Net fig4 = fixture("fig4.net");
  CHECK(directedness_check(fig4, 2).is_unknown());
}

}  // TEST_SUITE
