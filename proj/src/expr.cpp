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

#include "asterm/expr.hpp"

#include <numeric>
#include <stdexcept>

#include "asterm/error.hpp"

namespace asterm {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

Rational Rational::operator+(const Rational& o) const {
  return make(num * o.den + o.num * den, den * o.den);
}

std::string Rational::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

ExprPtr Expr::constant(std::int64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->value = v;
  return e;
}

ExprPtr Expr::var(std::string name, int slot) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(name);
  e->slot = slot;
  return e;
}

ExprPtr Expr::neg(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

CondPtr Cond::truth(bool v) {
  auto c = std::make_shared<Cond>();
  c->kind = v ? Kind::True : Kind::False;
  return c;
}

CondPtr Cond::compare(CmpOp op, ExprPtr l, ExprPtr r) {
  auto c = std::make_shared<Cond>();
  c->kind = Kind::Cmp;
  c->cmp = op;
  c->lhs = std::move(l);
  c->rhs = std::move(r);
  return c;
}

CondPtr Cond::negation(CondPtr inner) {
  auto c = std::make_shared<Cond>();
  c->kind = Kind::Not;
  c->a = std::move(inner);
  return c;
}

CondPtr Cond::conj(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Cond>();
  c->kind = Kind::And;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}

CondPtr Cond::disj(CondPtr l, CondPtr r) {
  auto c = std::make_shared<Cond>();
  c->kind = Kind::Or;
  c->a = std::move(l);
  c->b = std::move(r);
  return c;
}

std::int64_t evaluate(const Expr& e, Valuation vals) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      if (e.slot < 0 || static_cast<std::size_t>(e.slot) >= vals.size())
        throw InvalidArgument("unresolved variable '" + e.name + "'");
      return vals[e.slot];
    case Expr::Kind::Neg:
      return -evaluate(*e.lhs, vals);
    case Expr::Kind::Binary: {
      const std::int64_t l = evaluate(*e.lhs, vals);
      const std::int64_t r = evaluate(*e.rhs, vals);
      switch (e.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
      }
    }
  }
  return 0;
}

bool evaluate(const Cond& c, Valuation vals) {
  switch (c.kind) {
    case Cond::Kind::True: return true;
    case Cond::Kind::False: return false;
    case Cond::Kind::Not: return !evaluate(*c.a, vals);
    case Cond::Kind::And: return evaluate(*c.a, vals) && evaluate(*c.b, vals);
    case Cond::Kind::Or: return evaluate(*c.a, vals) || evaluate(*c.b, vals);
    case Cond::Kind::Cmp: {
      const std::int64_t l = evaluate(*c.lhs, vals);
      const std::int64_t r = evaluate(*c.rhs, vals);
      switch (c.cmp) {
        case CmpOp::Lt: return l < r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Eq: return l == r;
        case CmpOp::Ne: return l != r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Ge: return l >= r;
      }
    }
  }
  return false;
}

std::string to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
  }
  return "?";
}

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace {

// Precedence: + - = 1, * = 2, unary minus / atoms = 3.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary: return e.op == BinOp::Mul ? 2 : 1;
    case Expr::Kind::Neg: return 3;
    default: return 4;
  }
}

std::string wrap(const Expr& e, bool parens) {
  return parens ? "(" + to_string(e) + ")" : to_string(e);
}

// Or = 1, And = 2, Not/atoms = 3.
int precedence(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Or: return 1;
    case Cond::Kind::And: return 2;
    default: return 3;
  }
}

std::string wrap(const Cond& c, bool parens) {
  return parens ? "(" + to_string(c) + ")" : to_string(c);
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      // Negative literals print parenthesised so `a - (-1)` survives a
      // round trip as a subtraction of a constant.
      return e.value < 0 ? "(" + std::to_string(e.value) + ")"
                         : std::to_string(e.value);
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Neg:
      return "-" + wrap(*e.lhs, precedence(*e.lhs) < 3 ||
                                    e.lhs->kind == Expr::Kind::Neg);
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      const bool lp = precedence(*e.lhs) < p;
      const bool rp = precedence(*e.rhs) <= p;
      return wrap(*e.lhs, lp) + " " + to_string(e.op) + " " + wrap(*e.rhs, rp);
    }
  }
  return "?";
}

std::string to_string(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::True: return "true";
    case Cond::Kind::False: return "false";
    case Cond::Kind::Cmp:
      return to_string(*c.lhs) + " " + to_string(c.cmp) + " " + to_string(*c.rhs);
    case Cond::Kind::Not:
      return "!(" + to_string(*c.a) + ")";
    case Cond::Kind::And:
    case Cond::Kind::Or: {
      const int p = precedence(c);
      const std::string op = c.kind == Cond::Kind::And ? " && " : " || ";
      return wrap(*c.a, precedence(*c.a) < p) + op +
             wrap(*c.b, precedence(*c.b) <= p);
    }
  }
  return "?";
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Const: return a.value == b.value;
    case Expr::Kind::Var: return a.name == b.name;
    case Expr::Kind::Neg: return equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool equal(const Cond& a, const Cond& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Cond::Kind::True:
    case Cond::Kind::False: return true;
    case Cond::Kind::Cmp:
      return a.cmp == b.cmp && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case Cond::Kind::Not: return equal(*a.a, *b.a);
    case Cond::Kind::And:
    case Cond::Kind::Or: return equal(*a.a, *b.a) && equal(*a.b, *b.b);
  }
  return false;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

bool equal(const CondPtr& a, const CondPtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

ExprPtr resolve(const ExprPtr& e, const SlotLookup& lookup) {
  switch (e->kind) {
    case Expr::Kind::Const: return e;
    case Expr::Kind::Var: return Expr::var(e->name, lookup(e->name));
    case Expr::Kind::Neg: return Expr::neg(resolve(e->lhs, lookup));
    case Expr::Kind::Binary:
      return Expr::binary(e->op, resolve(e->lhs, lookup), resolve(e->rhs, lookup));
  }
  return e;
}

CondPtr resolve(const CondPtr& c, const SlotLookup& lookup) {
  switch (c->kind) {
    case Cond::Kind::True:
    case Cond::Kind::False: return c;
    case Cond::Kind::Cmp:
      return Cond::compare(c->cmp, resolve(c->lhs, lookup), resolve(c->rhs, lookup));
    case Cond::Kind::Not: return Cond::negation(resolve(c->a, lookup));
    case Cond::Kind::And: return Cond::conj(resolve(c->a, lookup), resolve(c->b, lookup));
    case Cond::Kind::Or: return Cond::disj(resolve(c->a, lookup), resolve(c->b, lookup));
  }
  return c;
}

void collect_slots(const Expr& e, std::set<int>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.slot);
  if (e.lhs) collect_slots(*e.lhs, out);
  if (e.rhs) collect_slots(*e.rhs, out);
}

void collect_slots(const Cond& c, std::set<int>& out) {
  if (c.lhs) collect_slots(*c.lhs, out);
  if (c.rhs) collect_slots(*c.rhs, out);
  if (c.a) collect_slots(*c.a, out);
  if (c.b) collect_slots(*c.b, out);
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  if (e.lhs) collect_names(*e.lhs, out);
  if (e.rhs) collect_names(*e.rhs, out);
}

void collect_names(const Cond& c, std::set<std::string>& out) {
  if (c.lhs) collect_names(*c.lhs, out);
  if (c.rhs) collect_names(*c.rhs, out);
  if (c.a) collect_names(*c.a, out);
  if (c.b) collect_names(*c.b, out);
}

}  // namespace asterm
