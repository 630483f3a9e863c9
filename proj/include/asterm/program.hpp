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
#include <vector>

#include "asterm/expr.hpp"

namespace asterm {

enum class SymbolKind { Param, Var };

/// A parameter (constant, fixed per instance) or a program variable. Params
/// with no upper bound are "unbounded" and must be fixed by an instance.
struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Var;
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;
  std::int64_t init = 0;

  bool in_range(std::int64_t v) const { return v >= lo && (!hi || v <= *hi); }
};

struct Command {
  enum class Kind { Guard, Assign, Coin, Nondet };

  Kind kind = Kind::Guard;
  CondPtr guard;
  int target = -1;
  ExprPtr value;
  Rational prob;

  static Command guard_of(CondPtr c);
  static Command assign(int target, ExprPtr value);
  static Command coin(int target, Rational p);
  static Command nondet(int target);

  bool is_assignment() const { return kind != Kind::Guard; }
};

struct Edge {
  int from = 0;
  int to = 0;
  Command cmd;
};

/// Flowgraph form of a probabilistic program: locations, edges labelled with
/// commands, and a symbol table whose order defines valuation slots.
struct Program {
  std::string name;
  std::vector<Symbol> symbols;
  std::vector<std::string> locations;
  int start = 0;
  int end = 0;
  std::vector<Edge> edges;

  /// Edge ids per location in insertion order; rebuilt by `reindex`.
  std::vector<std::vector<int>> out;

  void reindex();

  int slot_of(const std::string& name) const;  // -1 if absent
  const std::vector<int>& outgoing(int loc) const { return out.at(loc); }

  bool has_unbounded_params() const;
  bool is_deterministic() const;
  bool has_coins() const;
  int add_location(std::string name);
};

std::string describe(const Program& p, const Command& c);

/// Checks the flowgraph well-formedness conditions: the end location has
/// only its self-loop, conditional locations carry only guards that
/// partition the valuation space, assignment edges are their location's sole
/// outgoing edge, and every location is reachable from the start. Throws
/// SemanticError naming the first violation.
void validate(const Program& p);

/// Structural equality including location names and edge order.
bool equal(const Program& a, const Program& b);

}  // namespace asterm
