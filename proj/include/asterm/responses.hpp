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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asterm/oracle.hpp"
#include "asterm/program.hpp"
#include "asterm/semantics.hpp"

namespace asterm {

/// A set of 2^n words over {a0,a1,0,1}, each alternating action and coin and
/// of length 2n, whose action projections are pairwise distinct.
struct Response {
  std::size_t n = 0;
  std::vector<std::vector<Label>> words;

  /// The length-0 response {ε}.
  static Response empty();
};

/// Empty string when valid, else the first violated property.
std::string validate(const Response& r);
bool is_valid(const Response& r);

/// All concatenations u·v, ordered by action projection.
Response compose(const Response& a, const Response& b);

/// Words separated by `; ` (newlines also parse), letters space separated; ε for the empty word.
std::string serialize(const Response& r);
Response parse_response(std::string_view text);

/// Name of the scratch variable used by `normalize`.
inline constexpr const char* kPadVariable = "__pad";

/// Inserts dummy nondet/coin assignments to `__pad` so that action and coin
/// steps strictly alternate along every path, starting with an action.
/// Returns an equal program when nothing had to be inserted.
std::shared_ptr<const Program> normalize(const Program& p);

/// Every path from an initial node reads (action coin)* with tau steps in
/// between, possibly stopping at the end.
bool is_normal_form(const StateSpace& s);

struct ResponseResult {
  bool ok = false;
  Response response;
  std::size_t action_nodes = 0;      // n in the length bound n^2
  std::vector<std::size_t> ranks;    // per action node, in id order
  MdpVerdict counterexample;         // when !ok
  std::string message;
};

struct ResponseOptions {
  std::size_t max_length = 16;  // ResourceError beyond this many rounds
};

/// Builds a response under which every reachable action node is driven to
/// the end. Requires a normal-form space.
ResponseResult construct_response(const StateSpace& s, const ResponseOptions& opts = {});

}  // namespace asterm
