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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asterm/checker.hpp"
#include "asterm/program.hpp"
#include "asterm/semantics.hpp"

namespace asterm {

/// Patterns over coin outcomes. Words are strings over {'0','1'}.
struct Pattern {
  enum class Kind { Simple, Sequence, Template, Universal };

  Kind kind = Kind::Simple;
  std::string word;                // Simple; ε stands for C^ω
  std::vector<std::string> words;  // Sequence
  Tail tail = Tail::Repeat;        // Sequence
  std::string alpha, beta, gamma;  // Template: α·β^max(0,i-δ)·γ
  std::int64_t delta = 0;

  static Pattern simple(std::string w);
  static Pattern sequence(std::vector<std::string> ws, Tail tail = Tail::Repeat);
  static Pattern templ(std::string alpha, std::string beta, std::string gamma,
                       std::int64_t delta);
  static Pattern universal();

  /// The i-th word (i >= 1) of the pattern.
  std::string expand(std::int64_t i) const;

  /// Human-readable word family: `01`, `0^i`, `0(10)^i`, `0^{i+2}`,
  /// `constant 010`.
  std::string readable() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

std::string serialize(const Pattern& p);
Pattern parse_pattern(std::string_view text);

/// x_i of the length-then-lexicographic enumeration of C*, i >= 1
/// (x_1 = ε, x_2 = 0, x_3 = 1, x_4 = 00, ...).
std::string universal_word(std::uint64_t i);

bool is_infix_of_power(std::string_view w, std::string_view u);

/// Shortest v with u = v^k.
std::string primitive_root(std::string_view u);

/// Shortest extension of `base` that is an infix of no u^ω, lexicographically
/// least among those (0 < 1).
std::string spoiler_shortest(std::string_view base, const std::vector<std::string>& loops);

/// Extension of `base` chosen letter by letter so that the set of suffixes
/// of the u^ω still starting with it shrinks fastest; ties go to 0.
std::string spoiler_greedy(std::string_view base, const std::vector<std::string>& loops);

struct RefineOptions {
  std::size_t rounds = 64;
  CheckOptions check;
};

struct Round {
  std::string candidate;
  bool proven = false;
  std::string coinword;   // loop coin word of the lasso, as found
  std::string loop_word;  // its primitive root
  std::string next;       // spoiler for the following round
  std::optional<Lasso> lasso;
};

struct RefinementTrace {
  enum class Status { Proven, Refuted, BudgetExhausted };

  std::string base;
  std::vector<Round> rounds;
  Status status = Status::Proven;
  std::optional<Lasso> witness;  // coinless lasso when refuted
  std::string message;
};

struct RefinementResult {
  RefinementTrace trace;
  Pattern pattern;  // simple(s_j) when proven
};

/// Counterexample-guided search for a terminating simple pattern extending
/// `base`. Requires a space without action nodes.
RefinementResult refine_finite(const StateSpace& s, std::string_view base = {},
                               const RefineOptions& opts = {});

struct DirectResult {
  bool ok = false;
  std::string word;
  std::size_t abstraction_size = 0;  // coin nodes plus the end
  NodeId stuck = kNoNode;            // when !ok: a node that cannot terminate
  std::string message;
};

/// Concatenates per-node escape words until every coin node ends up in the
/// end location following a prefix of the result.
DirectResult construct_pattern_direct(const StateSpace& s);

/// Fits α·β^max(0,i-δ)·γ to the last three (index, word) pairs, which must
/// have consecutive indices. Prefers the shortest γ, then the shortest α.
std::optional<Pattern> fit_template(const std::vector<std::int64_t>& indices,
                                    const std::vector<std::string>& words);

struct DriveOptions {
  RefineOptions refine;
  BuildOptions build;
  std::string base_word;
  unsigned jobs = 1;
  bool oracle = false;  // also run the deterministic oracle per instance
};

struct InstanceOutcome {
  Instance instance;
  std::int64_t index = 0;
  std::size_t nodes = 0;
  RefinementTrace trace;
  std::string word;
  bool verified = false;
  std::optional<bool> oracle;
};

struct DriveResult {
  enum class Status { Guessed, NoGuess, Refuted, Budget };

  Status status = Status::NoGuess;
  std::string index_param;
  std::vector<InstanceOutcome> instances;
  std::optional<Pattern> guess;
  std::size_t fit_from = 0;  // first instance position the template matches
  std::size_t failed = 0;    // instance position behind Refuted/Budget
  std::string message;
};

/// Refines each instance in order, chaining the previous word as base word,
/// then guesses a template and re-verifies its expansion on every instance.
/// `index_param` names the parameter whose value is the template index;
/// empty picks the parameter that varies across `instances`.
DriveResult drive_weakly_finite(std::shared_ptr<const Program> prog,
                                const std::vector<Instance>& instances,
                                std::string index_param = {}, const DriveOptions& opts = {});

}  // namespace asterm
