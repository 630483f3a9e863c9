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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asterm/responses.hpp"
#include "asterm/semantics.hpp"

namespace asterm {

/// Explicit nondeterministic Büchi automaton over transition labels.
struct WordAutomaton {
  struct Arc {
    std::uint32_t to;
    std::uint8_t labels;  // bit i set: accepts Label(i)
  };

  std::vector<std::vector<Arc>> arcs;  // per state, in priority order
  std::vector<char> accepting;
  std::uint32_t initial = 0;

  std::size_t size() const { return arcs.size(); }
  std::uint32_t add_state(bool accept = false);
  void add_arc(std::uint32_t from, std::uint32_t to, std::uint8_t labels);
};

inline constexpr std::uint8_t label_bit(Label l) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l));
}
inline constexpr std::uint8_t kAllLabels = 0x1f;
inline constexpr std::uint8_t kTauAndActions =
    label_bit(Label::Tau) | label_bit(Label::Act0) | label_bit(Label::Act1);

/// A(w): |w|+1 states accepting the label sequences whose coin projection
/// contains w infinitely often.
WordAutomaton simple_automaton(std::string_view w);

enum class Tail { Repeat, Free };

/// Blocks for w_1..w_m in order; `Repeat` loops the last block forever,
/// `Free` accepts anything once w_m has been read.
WordAutomaton sequence_automaton(const std::vector<std::string>& words, Tail tail);

/// Trie over the words of R entered from an idle state on an action label;
/// completing a word leads to an accepting sink.
WordAutomaton response_automaton(const Response& r);

struct CheckOptions {
  std::size_t product_cap = 50'000'000;
};

struct CheckVerdict {
  enum class Kind { Terminating, Lasso, NotAsTerminating };
  Kind kind = Kind::Terminating;
  Lasso lasso;
  std::size_t product_states = 0;

  bool terminating() const { return kind == Kind::Terminating; }
};

/// Nested depth-first search for an accepting cycle in the product of the
/// space (transitions into the end dropped) and `a`. Returns the lasso
/// projected onto the space. Throws ResourceError past the product cap.
std::optional<Lasso> find_accepting_lasso(const StateSpace& s, const WordAutomaton& a,
                                          const CheckOptions& opts = {},
                                          std::size_t* explored = nullptr);

/// A reachable cycle avoiding the end whose loop tosses no coin.
std::optional<Lasso> check_coinless_nontermination(const StateSpace& s);

/// Any reachable cycle avoiding the end: the first back edge of a
/// depth-first search in canonical order.
std::optional<Lasso> find_any_cycle(const StateSpace& s);

CheckVerdict check_simple_pattern(const StateSpace& s, std::string_view w,
                                  const CheckOptions& opts = {});
CheckVerdict check_sequence_pattern(const StateSpace& s, const std::vector<std::string>& words,
                                    Tail tail = Tail::Repeat, const CheckOptions& opts = {});
CheckVerdict check_response_pattern(const StateSpace& s, const Response& r,
                                    const CheckOptions& opts = {});

}  // namespace asterm
