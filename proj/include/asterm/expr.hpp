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
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>

namespace asterm {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  static Rational one() { return {1, 1}; }

  Rational complement() const { return make(den - num, den); }
  Rational operator+(const Rational& o) const;
  friend bool operator==(const Rational&, const Rational&) = default;

  bool in_open_unit_interval() const { return num > 0 && num < den; }
  std::string str() const;
};

enum class BinOp { Add, Sub, Mul };
enum class CmpOp { Lt, Le, Eq, Ne, Gt, Ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Integer expression over program symbols. `slot` is filled in once the
/// enclosing program's symbol table is known; evaluation requires it.
struct Expr {
  enum class Kind { Const, Var, Neg, Binary };

  Kind kind = Kind::Const;
  std::int64_t value = 0;
  std::string name;
  int slot = -1;
  BinOp op = BinOp::Add;
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr constant(std::int64_t v);
  static ExprPtr var(std::string name, int slot = -1);
  static ExprPtr neg(ExprPtr e);
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r);
};

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
  enum class Kind { True, False, Cmp, Not, And, Or };

  Kind kind = Kind::True;
  CmpOp cmp = CmpOp::Eq;
  ExprPtr lhs;
  ExprPtr rhs;
  CondPtr a;
  CondPtr b;

  static CondPtr truth(bool v);
  static CondPtr compare(CmpOp op, ExprPtr l, ExprPtr r);
  static CondPtr negation(CondPtr c);
  static CondPtr conj(CondPtr l, CondPtr r);
  static CondPtr disj(CondPtr l, CondPtr r);
};

using Valuation = std::span<const std::int64_t>;

std::int64_t evaluate(const Expr& e, Valuation vals);
bool evaluate(const Cond& c, Valuation vals);

std::string to_string(const Expr& e);
std::string to_string(const Cond& c);
std::string to_string(BinOp op);
std::string to_string(CmpOp op);

/// Structural equality by symbol name; slots are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const Cond& a, const Cond& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const CondPtr& a, const CondPtr& b);

/// Copies the tree, binding every variable to the slot returned by `lookup`.
/// `lookup` throws for unknown names.
using SlotLookup = std::function<int(const std::string&)>;
ExprPtr resolve(const ExprPtr& e, const SlotLookup& lookup);
CondPtr resolve(const CondPtr& c, const SlotLookup& lookup);

void collect_slots(const Expr& e, std::set<int>& out);
void collect_slots(const Cond& c, std::set<int>& out);
void collect_names(const Expr& e, std::set<std::string>& out);
void collect_names(const Cond& c, std::set<std::string>& out);

}  // namespace asterm
