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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asterm/expr.hpp"
#include "asterm/program.hpp"

namespace asterm {

struct ParamDecl {
  std::string name;
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;
};

struct VarDecl {
  std::string name;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t init = 0;
};

struct Stmt {
  enum class Kind { Assign, Coin, Nondet, If, While };

  Kind kind = Kind::Assign;
  std::string target;
  ExprPtr value;
  Rational prob;
  CondPtr cond;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  bool has_else = false;
  int line = 0;
  int column = 0;
};

struct SourceProgram {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<VarDecl> vars;
  std::vector<Stmt> body;
};

/// Parses and semantically checks a `.ppg` program. Throws ParseError with a
/// line/column and the expected tokens, or SemanticError.
SourceProgram parse(std::string_view text);

/// Canonical pretty-printer; `parse(print(p))` is structurally equal to `p`.
std::string print(const SourceProgram& p);

bool equal(const SourceProgram& a, const SourceProgram& b);

bool uses_nondet(const SourceProgram& p);

/// Desugars structured statements into the flowgraph form. Each `if`/`while`
/// becomes one conditional location with the guard edge first and its
/// negation second; the body flows into an exit location whose `true` edge
/// reaches the end location.
std::shared_ptr<const Program> lower(const SourceProgram& src);

/// Reads, parses and lowers a file. Throws IoError when unreadable.
std::shared_ptr<const Program> load_program(const std::filesystem::path& path);
std::shared_ptr<const Program> compile(std::string_view text);

/// Free-standing expression/condition parsers (names unresolved).
ExprPtr parse_expression(std::string_view text);
CondPtr parse_condition(std::string_view text);

}  // namespace asterm
