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

#include "asterm/expr.hpp"
#include "asterm/patterns.hpp"
#include "asterm/program.hpp"

namespace asterm {

/// Variable of a transition-system document. Domains are `lo..hi`, `lo..`
/// or `nat`; the initial value is a constant, `?` (any nonnegative integer)
/// or absent (any value of the domain, used for parameters).
struct TsVar {
  enum class Init { Value, Unbounded, Any };

  std::string name;
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;
  bool nat = false;
  Init init = Init::Value;
  std::int64_t value = 0;
};

struct TsUpdate {
  enum class Kind { Expr, Nondet, Unbounded };

  std::string target;
  Kind kind = Kind::Expr;
  ExprPtr value;
};

/// One guarded transition; updates are simultaneous.
struct TsTransition {
  std::string from;
  CondPtr guard;
  std::vector<TsUpdate> updates;
  std::string to;
};

struct TransitionSystem {
  std::string name;
  std::vector<std::string> comments;  // without the leading `# `
  std::vector<TsVar> vars;
  std::vector<std::string> locations;
  std::string start;
  std::string end;
  std::vector<TsTransition> transitions;
};

/// Bit-exact text form; `parse_transition_system(emit(d))` re-emits equal.
std::string emit(const TransitionSystem& doc);
TransitionSystem parse_transition_system(std::string_view text);

/// The program with every coin toss replaced by a nondeterministic choice.
TransitionSystem export_nondet(const Program& p);

/// Restricts coin tosses to the runs conforming to `pattern` (a template or
/// a sequence) using the counters ctr, next and pos. When `index_param`
/// names a parameter, the hint `next <= index_param` is added as a comment.
TransitionSystem instrument_pattern(const Program& p, const Pattern& pattern,
                                    std::string_view index_param = {});

/// Converts a document whose transitions each carry either a guard or a
/// single update (as produced by `export_nondet`) back into a program.
std::shared_ptr<const Program> to_program(const TransitionSystem& doc);

}  // namespace asterm
