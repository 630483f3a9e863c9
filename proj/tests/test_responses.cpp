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

#include <set>

#include "asterm/checker.hpp"
#include "asterm/error.hpp"
#include "asterm/oracle.hpp"
#include "asterm/responses.hpp"
#include "doctest.h"
#include "support/common.hpp"
#include "support/random_program.hpp"

using namespace asterm;
using asterm::testing::corpus_program;
using asterm::testing::corpus_space;

TEST_SUITE("responses") {
  TEST_CASE("response validity") {
    CHECK(is_valid(parse_response("a0 1; a1 0")));
    CHECK(is_valid(Response::empty()));
    CHECK(Response::empty().words.size() == 1);
    Response dup;
    dup.n = 1;
    dup.words = {{Label::Act0, Label::Coin1}, {Label::Act0, Label::Coin0}};
    CHECK_FALSE(is_valid(dup));
    Response short_set;
    short_set.n = 1;
    short_set.words = {{Label::Act0, Label::Coin1}};
    CHECK_FALSE(is_valid(short_set));
    Response order;
    order.n = 1;
    order.words = {{Label::Coin1, Label::Act0}, {Label::Coin0, Label::Act1}};
    CHECK_FALSE(is_valid(order));
    CHECK_THROWS_AS(parse_response("a0 1; a0 0"), InvalidArgument);
    CHECK_THROWS_AS(parse_response("a2 1"), InvalidArgument);
  }

  TEST_CASE("composition multiplies the sizes") {
    const Response a = parse_response("a0 1; a1 0");
    const Response b = compose(a, a);
    CHECK(b.n == 2);
    CHECK(b.words.size() == 4);
    CHECK(is_valid(b));
    CHECK(compose(Response::empty(), a).words == a.words);
  }

  TEST_CASE("serialization round trip") {
    const Response a = compose(parse_response("a0 1; a1 0"), parse_response("a0 0; a1 0"));
    CHECK(parse_response(serialize(a)).words == a.words);
    CHECK(serialize(parse_response("a0 1; a1 0")) == "a0 1; a1 0");
    CHECK(parse_response("a0 1\na1 0\n").words == parse_response("a0 1; a1 0").words);
  }

  TEST_CASE("normal form") {
    const auto p = corpus_program("nondet_coin");
    const auto n = normalize(*p);
    CHECK(is_normal_form(build(n)));
    // a coin first needs a dummy choice in front
    const auto coin_first = compile(
        "program t; var x : 0..1 = 0; var y : 0..1 = 0; begin\n"
        "y := coin(1/2); x := nondet(); while (x == y) { x := nondet(); x := nondet(); y := coin(1/2); }\nend");
    CHECK_FALSE(is_normal_form(build(coin_first)));
    const auto fixed = normalize(*coin_first);
    CHECK(is_normal_form(build(fixed)));
    CHECK(fixed->slot_of(kPadVariable) >= 0);
  }

  TEST_CASE("normalization preserves the verdict on random programs") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      asterm::testing::GenOptions o;
      o.nondet = true;
      const auto p = compile(asterm::testing::ProgramGen(seed, o).program());
      const auto n = normalize(*p);
      const StateSpace a = build(p), b = build(n);
      CAPTURE(seed);
      CHECK(is_normal_form(b));
      CHECK(as_terminating_mdp(a).terminating == as_terminating_mdp(b).terminating);
    }
  }

  TEST_CASE("constructed response for the nondeterministic example") {
    const StateSpace s = build(normalize(*corpus_program("nondet_coin")));
    const ResponseResult r = construct_response(s);
    REQUIRE(r.ok);
    CHECK(is_valid(r.response));
    CHECK(r.response.n <= r.action_nodes * r.action_nodes);
    CHECK(check_response_pattern(s, r.response).terminating());
  }

  TEST_CASE("construction fails with a counterexample when the adversary wins") {
    const auto p = compile(
        "program t; var x : 0..1 = 0; var y : 0..1 = 0; begin\n"
        "x := nondet(); y := coin(1/2); while (x == 0) { x := nondet(); y := coin(1/2); }\nend");
    const StateSpace s = build(normalize(*p));
    const ResponseResult r = construct_response(s);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.counterexample.terminating);
    CHECK_FALSE(r.counterexample.trap.empty());
  }

  TEST_CASE("responses for random terminating programs") {
    int built = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      asterm::testing::GenOptions o;
      o.nondet = true;
      o.vars = 2;
      const auto p = compile(asterm::testing::ProgramGen(seed, o).program());
      const StateSpace s = build(normalize(*p));
      const bool t = as_terminating_mdp(s).terminating;
      CAPTURE(seed);
      ResponseResult r;
      try {
        r = construct_response(s);
      } catch (const ResourceError&) {
        continue;
      }
      CHECK(r.ok == t);
      if (!r.ok) continue;
      ++built;
      CHECK(is_valid(r.response));
      CHECK(r.response.n <= std::max<std::size_t>(1, r.action_nodes * r.action_nodes));
      CHECK(check_response_pattern(s, r.response).terminating());
    }
    CHECK(built > 30);
  }
}
