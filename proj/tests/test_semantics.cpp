// Copyright 2026 The asterm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <deque>
#include <set>

#include "asterm/error.hpp"
#include "asterm/semantics.hpp"
#include "doctest.h"
#include "support/common.hpp"
#include "support/random_program.hpp"

using namespace asterm;
using asterm::testing::corpus_space;

namespace {

std::set<NodeId> reachable(const StateSpace& s) {
  std::set<NodeId> seen(s.init().begin(), s.init().end());
  std::deque<NodeId> q(s.init().begin(), s.init().end());
  while (!q.empty()) {
    const NodeId n = q.front();
    q.pop_front();
    for (const Transition& t : s.successors(n))
      if (seen.insert(t.target).second) q.push_back(t.target);
  }
  return seen;
}

void check_space_invariants(const StateSpace& s) {
  for (NodeId n = 0; n < s.size(); ++n) {
    const auto succ = s.successors(n);
    REQUIRE_FALSE(succ.empty());
    switch (s.kind(n)) {
      case NodeKind::Coin: {
        REQUIRE(succ.size() == 2);
        CHECK(succ[0].label == Label::Coin0);
        CHECK(succ[1].label == Label::Coin1);
        CHECK(succ[0].prob + succ[1].prob == Rational::one());
        CHECK(succ[0].prob.in_open_unit_interval());
        break;
      }
      case NodeKind::Action:
        for (const Transition& t : succ) CHECK(is_action(t.label));
        break;
      case NodeKind::Terminal:
        REQUIRE(succ.size() == 1);
        CHECK(succ[0].label == Label::Tau);
        CHECK(succ[0].target == n);
        break;
      case NodeKind::Deterministic:
        CHECK(succ.size() == 1);
        CHECK(succ[0].label == Label::Tau);
        break;
    }
  }
  CHECK(reachable(s).size() == s.size());
}

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("a single coin toss") {
    const StateSpace s =
        build(compile("program t; var x : 0..1 = 0; begin x := coin(1/2); end"));
    std::size_t coin_nodes = 0;
    for (NodeId n = 0; n < s.size(); ++n)
      if (s.kind(n) == NodeKind::Coin) {
        ++coin_nodes;
        const auto succ = s.successors(n);
        REQUIRE(succ.size() == 2);
        CHECK(succ[0].prob == Rational::make(1, 2));
        CHECK(succ[1].prob == Rational::make(1, 2));
      }
    CHECK(coin_nodes == 1);
    check_space_invariants(s);
  }

  TEST_CASE("corpus spaces satisfy the node invariants") {
    for (const char* name : {"fw", "diverge", "nondet_coin", "geometric"}) {
      CAPTURE(name);
      check_space_invariants(corpus_space(name));
    }
    for (const char* name : {"rw", "randomwalk", "firewire", "herman", "zeroconf", "brp"})
      for (std::int64_t n = 1; n <= 4; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        check_space_invariants(corpus_space(name, {{"N", n}}));
      }
  }

  TEST_CASE("random programs satisfy the node invariants") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      asterm::testing::GenOptions o;
      o.nondet = seed % 2 == 0;
      o.param = seed % 4 == 0;
      const StateSpace s = build(compile(asterm::testing::ProgramGen(seed, o).program()));
      check_space_invariants(s);
      if (s.program().is_deterministic()) CHECK_FALSE(s.has_action_nodes());
    }
  }

  TEST_CASE("the nondeterministic example alternates actions and coins") {
    const StateSpace s = corpus_space("nondet_coin");
    CHECK(s.has_action_nodes());
    for (NodeId n = 0; n < s.size(); ++n) {
      if (s.kind(n) != NodeKind::Action) continue;
      // from an action node only τ steps lead to the next coin node
      for (const Transition& t : s.successors(n)) {
        NodeId m = t.target;
        while (s.kind(m) == NodeKind::Deterministic) m = s.successors(m)[0].target;
        CHECK(s.kind(m) == NodeKind::Coin);
      }
    }
  }

  TEST_CASE("out-of-range assignment is a modeling error") {
    const auto p = compile("program t; var x : 0..1 = 1; begin x := x + 1; end");
    CHECK_THROWS_AS(build(p), ModelingError);
  }

  TEST_CASE("node cap becomes a resource error") {
    BuildOptions o;
    o.node_cap = 10;
    CHECK_THROWS_AS(build(asterm::testing::corpus_program("fw"), {}, o), ResourceError);
  }

  TEST_CASE("unbounded parameters must be fixed") {
    CHECK_THROWS_AS(build(asterm::testing::corpus_program("rw")), InvalidArgument);
    CHECK_THROWS_AS(build(asterm::testing::corpus_program("rw"), {{"M", 2}}), InvalidArgument);
    CHECK_THROWS_AS(build(asterm::testing::corpus_program("rw"), {{"N", 0}}), InvalidArgument);
  }

  TEST_CASE("bounded parameters are enumerated into initial nodes") {
    const StateSpace s = build(compile("program t; param P : 0..2; var x : 0..2 = 0; begin x := P; end"));
    CHECK(s.init().size() == 3);
  }

  TEST_CASE("trace projection") {
    const std::vector<Step> path{{0, Label::Tau, 1}, {1, Label::Coin0, 2}, {2, Label::Tau, 3},
                                 {3, Label::Coin1, 4}};
    CHECK(word_string(trace_projection(path, Alphabet::Coins)) == "01");
    const std::vector<Step> mixed{{0, Label::Act0, 1}, {1, Label::Coin0, 2}, {2, Label::Act1, 3},
                                  {3, Label::Coin1, 4}};
    CHECK(word_string(trace_projection(mixed, Alphabet::Actions)) == "a0 a1");
    CHECK(word_string(trace_projection(mixed, Alphabet::All)) == "a0 0 a1 1");
    CHECK(trace_projection({}, Alphabet::Coins).empty());
    CHECK(coin_word(path) == "01");
  }

  TEST_CASE("ends_up_in") {
    const StateSpace s = corpus_space("fw");
    const NodeId init = s.init().front();
    SUBCASE("empty word gives the tau closure") {
      const EndsUpIn r = ends_up_in(s, init, "");
      REQUIRE(r.kind == EndsUpIn::Kind::Node);
      CHECK(r.node == tau_closure(s, init));
      CHECK(s.kind(r.node) == NodeKind::Coin);
    }
    SUBCASE("k = 99 and 01 finishes") {
      bool found = false;
      for (NodeId n = 0; n < s.size(); ++n) {
        if (s.kind(n) != NodeKind::Coin) continue;
        const auto v = s.valuation(n);
        if (v[0] != 99) continue;
        found = true;
        const EndsUpIn r = ends_up_in(s, n, "01");
        const bool done = r.kind == EndsUpIn::Kind::TerminatedEarly ||
                          (r.kind == EndsUpIn::Kind::Node && s.is_terminal(r.node));
        CHECK(done);
      }
      CHECK(found);
    }
    SUBCASE("coin-free cycle is undefined") {
      const StateSpace d = corpus_space("diverge");
      for (NodeId n = 0; n < d.size(); ++n) {
        if (d.kind(n) != NodeKind::Deterministic || d.valuation(n)[1] != 1) continue;
        if (d.location(n) == d.program().start) continue;
        CHECK(ends_up_in(d, n, "0").kind == EndsUpIn::Kind::Undefined);
      }
    }
    SUBCASE("early termination reports the consumed prefix") {
      const StateSpace g = corpus_space("geometric");
      const EndsUpIn r = ends_up_in(g, g.init().front(), "0011");
      CHECK(r.kind == EndsUpIn::Kind::TerminatedEarly);
      CHECK(r.consumed == 3);
    }
  }

  TEST_CASE("dump lines") {
    const std::string d = dump(corpus_space("geometric"));
    CHECK(d.find("bot{c=0} 0 1/3 l1{c=0}\n") != std::string::npos);
    CHECK(d.find("bot{c=0} 1 2/3 l1{c=1}\n") != std::string::npos);
    CHECK(d.find("top tau top\n") != std::string::npos);
    CHECK(dump(corpus_space("geometric")) == d);
  }

  TEST_CASE("lasso replay") {
    const StateSpace s = corpus_space("geometric");
    Lasso l;
    const NodeId a = s.init().front();
    const NodeId b = s.successors(a)[0].target;  // c = 0
    const NodeId c = s.successors(b)[0].target;  // loop body
    l.prefix = {{a, Label::Coin0, b}};
    l.loop = {{b, Label::Tau, c}, {c, Label::Coin0, b}};
    l.coinword = "0";
    CHECK(replays(s, l));
    l.coinword = "1";
    CHECK_FALSE(replays(s, l));
  }
}
