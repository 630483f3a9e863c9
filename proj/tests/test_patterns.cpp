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

#include <cmath>
#include <random>

#include "asterm/error.hpp"
#include "asterm/oracle.hpp"
#include "asterm/patterns.hpp"
#include "doctest.h"
#include "support/common.hpp"
#include "support/oracles.hpp"
#include "support/random_program.hpp"

using namespace asterm;
using asterm::testing::corpus_program;
using asterm::testing::corpus_space;

namespace {

std::vector<Instance> range_of(std::int64_t lo, std::int64_t hi) {
  std::vector<Instance> out;
  for (std::int64_t n = lo; n <= hi; ++n) out.push_back({{"N", n}});
  return out;
}

std::string rand_word(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  std::string w(lo + rng() % (hi - lo + 1), '0');
  for (char& c : w) c = (rng() & 1) ? '1' : '0';
  return w;
}

}  // namespace

TEST_SUITE("patterns") {
  TEST_CASE("serialization round trip") {
    for (const Pattern& p :
         {Pattern::simple("01"), Pattern::simple(""), Pattern::sequence({"0", "11"}, Tail::Free),
          Pattern::sequence({"00"}), Pattern::templ("0", "10", "", 0),
          Pattern::templ("", "0", "", 1), Pattern::universal()}) {
      CAPTURE(serialize(p));
      CHECK(parse_pattern(serialize(p)) == p);
    }
    CHECK_THROWS_AS(parse_pattern("nonsense"), InvalidArgument);
    CHECK_THROWS_AS(parse_pattern("simple:012"), InvalidArgument);
  }

  TEST_CASE("template expansion and readable families") {
    CHECK(Pattern::templ("010", "", "", 0).readable() == "constant 010");
    CHECK(Pattern::templ("", "0", "", 0).readable() == "0^i");
    CHECK(Pattern::templ("", "0", "", -2).readable() == "0^{i+2}");
    CHECK(Pattern::templ("00", "0", "", 0).readable() == "00(0)^i");
    CHECK(Pattern::templ("", "0", "1", 0).readable() == "0^i1");
    CHECK(Pattern::templ("", "0", "", 1).readable() == "0^{i-1}");
    CHECK(Pattern::templ("0", "10", "", 0).readable() == "0(10)^i");
    const Pattern h = Pattern::templ("0", "10", "", 0);
    CHECK(h.expand(1) == "010");
    CHECK(h.expand(3) == "0101010");
    const Pattern z = Pattern::templ("", "0", "", 1);
    CHECK(z.expand(1) == "");
    CHECK(z.expand(4) == "000");
    CHECK(Pattern::sequence({"0", "11"}).expand(2) == "11");
    CHECK(Pattern::sequence({"0", "11"}).expand(5) == "11");
    CHECK(Pattern::universal().expand(4) == "00");
  }

  TEST_CASE("universal enumeration") {
    CHECK(universal_word(1) == "");
    CHECK(universal_word(2) == "0");
    CHECK(universal_word(3) == "1");
    CHECK(universal_word(4) == "00");
    CHECK(universal_word(7) == "11");
    CHECK(universal_word(8) == "000");
  }

  TEST_CASE("infix of powers and primitive roots against naive versions") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 3000; ++k) {
      const std::string w = rand_word(rng, 0, 8), u = rand_word(rng, 1, 6);
      CHECK(is_infix_of_power(w, u) == asterm::testing::naive_infix_of_power(w, u));
    }
    CHECK(primitive_root("0101") == "01");
    CHECK(primitive_root("000") == "0");
    CHECK(primitive_root("001") == "001");
    CHECK(primitive_root("111000111000") == "111000");
  }

  TEST_CASE("spoilers: shortest is minimal, greedy within the bound") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 400; ++k) {
      std::vector<std::string> loops;
      std::size_t total = 0;
      const std::size_t count = 1 + rng() % 4;
      for (std::size_t i = 0; i < count && total < 12; ++i) {
        loops.push_back(rand_word(rng, 1, 4));
        total += loops.back().size();
      }
      const std::string base = rand_word(rng, 0, 3);
      const std::string s = spoiler_shortest(base, loops);
      const std::string g = spoiler_greedy(base, loops);
      CAPTURE(base);
      CHECK(s == asterm::testing::brute_spoiler(base, loops));
      CHECK(g.substr(0, base.size()) == base);
      for (const std::string& u : loops) CHECK_FALSE(is_infix_of_power(g, u));
      CHECK(s.size() <= g.size());
      CHECK(static_cast<double>(g.size()) <=
            static_cast<double>(base.size()) + 1 + std::log2(static_cast<double>(total)) + 1e-9);
    }
    CHECK(spoiler_shortest("", {"0"}) == "1");
    CHECK(spoiler_shortest("", {"0", "1"}) == "01");
  }

  TEST_CASE("FW refinement trace") {
    const RefinementResult r = refine_finite(corpus_space("fw"));
    REQUIRE(r.trace.status == RefinementTrace::Status::Proven);
    REQUIRE(r.trace.rounds.size() == 3);
    CHECK(r.trace.rounds[0].candidate == "");
    CHECK(r.trace.rounds[0].loop_word == "0");
    CHECK(r.trace.rounds[0].next == "1");
    CHECK(r.trace.rounds[1].loop_word == "1");
    CHECK(r.trace.rounds[1].next == "01");
    CHECK(r.trace.rounds[2].proven);
    CHECK(r.pattern == Pattern::simple("01"));
  }

  TEST_CASE("refinement: refutation and budget") {
    const RefinementResult d = refine_finite(corpus_space("diverge"));
    CHECK(d.trace.status == RefinementTrace::Status::Refuted);
    REQUIRE(d.trace.witness);
    CHECK(replays(corpus_space("diverge"), *d.trace.witness));
    RefineOptions o;
    o.rounds = 1;
    CHECK(refine_finite(corpus_space("fw"), "", o).trace.status ==
          RefinementTrace::Status::BudgetExhausted);
    const RefinementResult b = refine_finite(corpus_space("fw"), "11");
    CHECK(b.trace.status == RefinementTrace::Status::Proven);
    CHECK(b.pattern.word.substr(0, 2) == "11");
    CHECK_THROWS_AS(refine_finite(corpus_space("nondet_coin")), InvalidArgument);
  }

  TEST_CASE("direct construction") {
    const StateSpace s = corpus_space("fw");
    const DirectResult d = construct_pattern_direct(s);
    REQUIRE(d.ok);
    CHECK(check_simple_pattern(s, d.word).terminating());
    const std::size_t n = d.abstraction_size;
    CHECK(d.word.size() <= (n - 1) * (n - 1));
    const DirectResult bad = construct_pattern_direct(corpus_space("diverge"));
    CHECK_FALSE(bad.ok);
  }

  TEST_CASE("template fitting") {
    const auto a = fit_template({2, 3, 4}, {"00", "000", "0000"});
    REQUIRE(a);
    CHECK(a->readable() == "0^i");
    const auto b = fit_template({1, 2, 3}, {"010", "01010", "0101010"});
    REQUIRE(b);
    CHECK(b->readable() == "0(10)^i");
    const auto c = fit_template({1, 2, 3}, {"000", "0000", "00000"});
    REQUIRE(c);
    CHECK(c->readable() == "0^{i+2}");
    const auto d = fit_template({3, 4, 5}, {"00", "000", "0000"});
    REQUIRE(d);
    CHECK(d->readable() == "0^{i-1}");
    const auto k = fit_template({1, 2, 3}, {"010", "010", "010"});
    REQUIRE(k);
    CHECK(k->readable() == "constant 010");
    CHECK_FALSE(fit_template({1, 2, 4}, {"0", "00", "000"}));
    CHECK_FALSE(fit_template({1, 2, 3}, {"0", "000", "00"}));
    CHECK_FALSE(fit_template({1, 2, 3}, {"01", "110", "0111"}));
  }

  TEST_CASE("weakly finite driver on randomwalk") {
    DriveOptions o;
    o.oracle = true;
    const DriveResult r = drive_weakly_finite(corpus_program("randomwalk"), range_of(1, 4), "N", o);
    REQUIRE(r.status == DriveResult::Status::Guessed);
    REQUIRE(r.guess);
    CHECK(r.guess->readable() == "0^i");
    const std::vector<std::string> words{"", "00", "000", "0000"};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r.instances[i].word == words[i]);
      CHECK(r.instances[i].verified);
      REQUIRE(r.instances[i].oracle);
      CHECK(*r.instances[i].oracle);
    }
  }

  TEST_CASE("driver results do not depend on the job count") {
    DriveOptions one, four;
    four.jobs = 4;
    const DriveResult a = drive_weakly_finite(corpus_program("herman"), range_of(1, 4), "", one);
    const DriveResult b = drive_weakly_finite(corpus_program("herman"), range_of(1, 4), "", four);
    REQUIRE(a.guess);
    REQUIRE(b.guess);
    CHECK(*a.guess == *b.guess);
    CHECK(a.index_param == "N");
    for (std::size_t i = 0; i < a.instances.size(); ++i) CHECK(a.instances[i].word == b.instances[i].word);
  }

  TEST_CASE("driver statuses") {
    CHECK_THROWS_AS(drive_weakly_finite(corpus_program("nondet_coin"), {{}}), UnsupportedError);
    const auto diverging = compile(
        "program t; param N : 1..; var k : 0..9 = 0; var c : 0..1 = 0; begin\n"
        "while (k < N) { if (k == 2) { k := 2; } else { c := coin(1/2); k := k + 1; } }\nend");
    const DriveResult r = drive_weakly_finite(diverging, range_of(1, 4));
    CHECK(r.status == DriveResult::Status::Refuted);
    CHECK(r.instances[r.failed].instance.at("N") == 3);
    const DriveResult two = drive_weakly_finite(corpus_program("randomwalk"), range_of(1, 2));
    CHECK(two.status == DriveResult::Status::NoGuess);
  }

  TEST_CASE("refinement agrees with the oracle on random programs") {
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
      const StateSpace s =
          build(compile(asterm::testing::ProgramGen(seed, asterm::testing::GenOptions{}).program()));
      const RefinementResult r = refine_finite(s);
      const bool t = as_terminating_deterministic(s).terminating;
      CAPTURE(seed);
      CHECK((r.trace.status == RefinementTrace::Status::Proven) == t);
      if (r.trace.status == RefinementTrace::Status::Refuted) {
        REQUIRE(r.trace.witness);
        CHECK(r.trace.witness->coinword.empty());
        CHECK(replays(s, *r.trace.witness));
      }
      if (r.trace.status == RefinementTrace::Status::Proven)
        CHECK(check_simple_pattern(s, r.pattern.word).terminating());
    }
  }
}
