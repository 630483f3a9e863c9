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

#include "asterm/lang.hpp"

#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "asterm/error.hpp"

namespace asterm {

namespace {

std::string format_parse_error(int line, int column, const std::string& message,
                               const std::vector<std::string>& expected) {
  std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    s += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
    s += ")";
  }
  return s;
}

}  // namespace

ParseError::ParseError(int line, int column, const std::string& message,
                       std::vector<std::string> expected)
    : Error(ErrorKind::Parse, format_parse_error(line, column, message, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Ident, Int, Punct, Keyword, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"program", "param", "var",  "begin",
                                          "end",     "if",    "else", "while",
                                          "coin",    "nondet", "true", "false"};
  return k;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* const two[] = {":=", "..", "<=", ">=", "==", "!=", "&&", "||"};
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = keywords().count(t.text) ? Tok::Keyword : Tok::Ident;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 18) throw ParseError(line, col, "integer literal too large");
      t.kind = Tok::Int;
      t.value = std::stoll(t.text);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    if (i + 1 < src.size()) {
      for (const char* op : two) {
        if (src[i] == op[0] && src[i + 1] == op[1]) {
          t.kind = Tok::Punct;
          t.text = op;
          advance(2);
          matched = true;
          break;
        }
      }
    }
    if (matched) {
      out.push_back(std::move(t));
      continue;
    }
    if (std::string_view(";:=(){}/+-*<>!").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  Token eof;
  eof.kind = Tok::Eof;
  eof.text = "end of input";
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  SourceProgram program() {
    SourceProgram p;
    expect_keyword("program");
    p.name = ident();
    expect(";");
    while (is_keyword("param")) {
      next();
      ParamDecl d;
      d.name = ident();
      expect(":");
      d.lo = integer();
      expect("..");
      if (peek().kind == Tok::Int || is_punct("-")) d.hi = integer();
      expect(";");
      p.params.push_back(std::move(d));
    }
    while (is_keyword("var")) {
      next();
      VarDecl d;
      d.name = ident();
      expect(":");
      d.lo = integer();
      expect("..");
      d.hi = integer();
      expect("=");
      d.init = integer();
      expect(";");
      p.vars.push_back(std::move(d));
    }
    expect_keyword("begin");
    while (!is_keyword("end")) {
      if (peek().kind == Tok::Eof) fail({"statement", "'end'"});
      p.body.push_back(statement());
    }
    next();
    if (peek().kind != Tok::Eof) fail({"end of input"});
    return p;
  }

  ExprPtr whole_expression() {
    ExprPtr e = expression();
    if (peek().kind != Tok::Eof) fail({"end of input"});
    return e;
  }

  CondPtr whole_condition() {
    CondPtr c = condition();
    if (peek().kind != Tok::Eof) fail({"end of input"});
    return c;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(std::string_view s) const {
    return peek().kind == Tok::Punct && peek().text == s;
  }
  bool is_keyword(std::string_view s) const {
    return peek().kind == Tok::Keyword && peek().text == s;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::Eof ? t.text : "'" + t.text + "'";
    throw ParseError(t.line, t.column, "unexpected " + found, std::move(expected));
  }

  void expect(std::string_view s) {
    if (!is_punct(s)) fail({"'" + std::string(s) + "'"});
    next();
  }
  void expect_keyword(std::string_view s) {
    if (!is_keyword(s)) fail({"'" + std::string(s) + "'"});
    next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    return next().text;
  }
  std::int64_t integer() {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::Int) fail({"integer"});
    const std::int64_t v = next().value;
    return neg ? -v : v;
  }

  std::vector<Stmt> block() {
    std::vector<Stmt> body;
    expect("{");
    while (!is_punct("}")) {
      if (peek().kind == Tok::Eof) fail({"statement", "'}'"});
      body.push_back(statement());
    }
    next();
    return body;
  }

  Stmt statement() {
    Stmt s;
    s.line = peek().line;
    s.column = peek().column;
    if (is_keyword("if")) {
      next();
      s.kind = Stmt::Kind::If;
      expect("(");
      s.cond = condition();
      expect(")");
      s.then_body = block();
      if (is_keyword("else")) {
        next();
        s.has_else = true;
        if (is_keyword("if"))
          s.else_body.push_back(statement());
        else
          s.else_body = block();
      }
      return s;
    }
    if (is_keyword("while")) {
      next();
      s.kind = Stmt::Kind::While;
      expect("(");
      s.cond = condition();
      expect(")");
      s.then_body = block();
      return s;
    }
    if (peek().kind != Tok::Ident) fail({"statement"});
    s.target = next().text;
    expect(":=");
    if (is_keyword("coin")) {
      next();
      s.kind = Stmt::Kind::Coin;
      expect("(");
      const Token& nt = peek();
      const std::int64_t num = integer();
      expect("/");
      const std::int64_t den = integer();
      expect(")");
      if (den == 0) throw SemanticError(at(nt) + "probability with zero denominator");
      s.prob = Rational::make(num, den);
      if (!s.prob.in_open_unit_interval())
        throw SemanticError(at(nt) + "probability not in (0,1)");
    } else if (is_keyword("nondet")) {
      next();
      s.kind = Stmt::Kind::Nondet;
      expect("(");
      expect(")");
    } else {
      s.kind = Stmt::Kind::Assign;
      s.value = expression();
    }
    expect(";");
    return s;
  }

  static std::string at(const Token& t) {
    return std::to_string(t.line) + ":" + std::to_string(t.column) + ": ";
  }

  ExprPtr expression() {
    ExprPtr e = term();
    while (is_punct("+") || is_punct("-")) {
      const BinOp op = next().text == "+" ? BinOp::Add : BinOp::Sub;
      e = Expr::binary(op, e, term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (is_punct("*")) {
      next();
      e = Expr::binary(BinOp::Mul, e, factor());
    }
    return e;
  }

  ExprPtr factor() {
    if (peek().kind == Tok::Int) return Expr::constant(next().value);
    if (peek().kind == Tok::Ident) return Expr::var(next().text);
    if (is_punct("-")) {
      next();
      return Expr::neg(factor());
    }
    if (is_punct("(")) {
      next();
      ExprPtr e = expression();
      expect(")");
      return e;
    }
    fail({"expression"});
  }

  CondPtr condition() {
    CondPtr c = conjunction();
    while (is_punct("||")) {
      next();
      c = Cond::disj(c, conjunction());
    }
    return c;
  }

  CondPtr conjunction() {
    CondPtr c = negation();
    while (is_punct("&&")) {
      next();
      c = Cond::conj(c, negation());
    }
    return c;
  }

  static bool is_cmp(const Token& t) {
    if (t.kind != Tok::Punct) return false;
    return t.text == "<" || t.text == "<=" || t.text == "==" || t.text == "!=" ||
           t.text == ">" || t.text == ">=";
  }

  static bool is_arith(const Token& t) {
    return t.kind == Tok::Punct && (t.text == "+" || t.text == "-" || t.text == "*");
  }

  CondPtr negation() {
    if (is_punct("!")) {
      next();
      return Cond::negation(negation());
    }
    if (is_keyword("true")) {
      next();
      return Cond::truth(true);
    }
    if (is_keyword("false")) {
      next();
      return Cond::truth(false);
    }
    if (is_punct("(")) {
      // Either a parenthesised condition or the start of an arithmetic
      // operand such as `(a + b) < c`; try the former first.
      const std::size_t save = pos_;
      try {
        next();
        CondPtr c = condition();
        expect(")");
        if (!is_cmp(peek()) && !is_arith(peek())) return c;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return comparison();
  }

  CondPtr comparison() {
    ExprPtr l = expression();
    if (!is_cmp(peek())) fail({"comparison operator"});
    const std::string op = next().text;
    ExprPtr r = expression();
    CmpOp cmp = CmpOp::Eq;
    if (op == "<") cmp = CmpOp::Lt;
    else if (op == "<=") cmp = CmpOp::Le;
    else if (op == "==") cmp = CmpOp::Eq;
    else if (op == "!=") cmp = CmpOp::Ne;
    else if (op == ">") cmp = CmpOp::Gt;
    else cmp = CmpOp::Ge;
    return Cond::compare(cmp, l, r);
  }
};

struct Scope {
  std::map<std::string, const ParamDecl*> params;
  std::map<std::string, const VarDecl*> vars;
};

void check_names(const Scope& scope, const std::set<std::string>& names, const Stmt& s) {
  for (const std::string& n : names)
    if (!scope.params.count(n) && !scope.vars.count(n))
      throw SemanticError(std::to_string(s.line) + ":" + std::to_string(s.column) +
                          ": undeclared variable '" + n + "'");
}

void check_body(const Scope& scope, const std::vector<Stmt>& body) {
  for (const Stmt& s : body) {
    const std::string where = std::to_string(s.line) + ":" + std::to_string(s.column) + ": ";
    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Coin:
      case Stmt::Kind::Nondet: {
        if (scope.params.count(s.target))
          throw SemanticError(where + "assignment to parameter '" + s.target + "'");
        auto it = scope.vars.find(s.target);
        if (it == scope.vars.end())
          throw SemanticError(where + "undeclared variable '" + s.target + "'");
        if (s.kind != Stmt::Kind::Assign && (it->second->lo > 0 || it->second->hi < 1))
          throw SemanticError(where + "range of '" + s.target + "' does not contain 0..1");
        if (s.kind == Stmt::Kind::Assign) {
          std::set<std::string> names;
          collect_names(*s.value, names);
          check_names(scope, names, s);
        }
        break;
      }
      case Stmt::Kind::If:
      case Stmt::Kind::While: {
        std::set<std::string> names;
        collect_names(*s.cond, names);
        check_names(scope, names, s);
        check_body(scope, s.then_body);
        check_body(scope, s.else_body);
        break;
      }
    }
  }
}

void check(const SourceProgram& p) {
  Scope scope;
  auto reserved = [](const std::string& n) { return n.rfind("__", 0) == 0; };
  for (const ParamDecl& d : p.params) {
    if (reserved(d.name)) throw SemanticError("name '" + d.name + "' is reserved");
    if (!scope.params.emplace(d.name, &d).second)
      throw SemanticError("duplicate declaration of '" + d.name + "'");
    if (d.hi && *d.hi < d.lo) throw SemanticError("empty range for '" + d.name + "'");
  }
  for (const VarDecl& d : p.vars) {
    if (reserved(d.name)) throw SemanticError("name '" + d.name + "' is reserved");
    if (scope.params.count(d.name) || !scope.vars.emplace(d.name, &d).second)
      throw SemanticError("duplicate declaration of '" + d.name + "'");
    if (d.hi < d.lo) throw SemanticError("empty range for '" + d.name + "'");
    if (d.init < d.lo || d.init > d.hi)
      throw SemanticError("initial value of '" + d.name + "' outside its range");
  }
  check_body(scope, p.body);
}

void print_body(std::ostringstream& os, const std::vector<Stmt>& body, int indent);

void print_block(std::ostringstream& os, const std::vector<Stmt>& body, int indent) {
  os << "{\n";
  print_body(os, body, indent + 1);
  os << std::string(2 * indent, ' ') << "}";
}

void print_body(std::ostringstream& os, const std::vector<Stmt>& body, int indent) {
  const std::string pad(2 * indent, ' ');
  for (const Stmt& s : body) {
    os << pad;
    switch (s.kind) {
      case Stmt::Kind::Assign:
        os << s.target << " := " << to_string(*s.value) << ";\n";
        break;
      case Stmt::Kind::Coin:
        os << s.target << " := coin(" << s.prob.str() << ");\n";
        break;
      case Stmt::Kind::Nondet:
        os << s.target << " := nondet();\n";
        break;
      case Stmt::Kind::If:
        os << "if (" << to_string(*s.cond) << ") ";
        print_block(os, s.then_body, indent);
        if (s.has_else) {
          os << " else ";
          print_block(os, s.else_body, indent);
        }
        os << "\n";
        break;
      case Stmt::Kind::While:
        os << "while (" << to_string(*s.cond) << ") ";
        print_block(os, s.then_body, indent);
        os << "\n";
        break;
    }
  }
}

bool equal_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Stmt& x = a[i];
    const Stmt& y = b[i];
    if (x.kind != y.kind || x.target != y.target || x.has_else != y.has_else) return false;
    if (!equal(x.value, y.value) || !equal(x.cond, y.cond)) return false;
    if (x.kind == Stmt::Kind::Coin && !(x.prob == y.prob)) return false;
    if (!equal_body(x.then_body, y.then_body) || !equal_body(x.else_body, y.else_body))
      return false;
  }
  return true;
}

bool body_uses_nondet(const std::vector<Stmt>& body) {
  for (const Stmt& s : body) {
    if (s.kind == Stmt::Kind::Nondet) return true;
    if (body_uses_nondet(s.then_body) || body_uses_nondet(s.else_body)) return true;
  }
  return false;
}

// Lowering works backwards: every statement is given the location control
// reaches after it and returns its own entry location.
class Lowering {
 public:
  explicit Lowering(Program& p) : p_(p) {}

  int sequence(const std::vector<Stmt>& body, int next) {
    for (auto it = body.rbegin(); it != body.rend(); ++it) next = statement(*it, next);
    return next;
  }

 private:
  Program& p_;

  int fresh() { return p_.add_location(""); }

  void edge(int from, int to, Command cmd) { p_.edges.push_back({from, to, std::move(cmd)}); }

  CondPtr bind(const CondPtr& c) {
    return resolve(c, [this](const std::string& n) { return p_.slot_of(n); });
  }
  ExprPtr bind(const ExprPtr& e) {
    return resolve(e, [this](const std::string& n) { return p_.slot_of(n); });
  }

  int statement(const Stmt& s, int next) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        const int l = fresh();
        edge(l, next, Command::assign(p_.slot_of(s.target), bind(s.value)));
        return l;
      }
      case Stmt::Kind::Coin: {
        const int l = fresh();
        edge(l, next, Command::coin(p_.slot_of(s.target), s.prob));
        return l;
      }
      case Stmt::Kind::Nondet: {
        const int l = fresh();
        edge(l, next, Command::nondet(p_.slot_of(s.target)));
        return l;
      }
      case Stmt::Kind::If: {
        const int t = sequence(s.then_body, next);
        const int e = sequence(s.else_body, next);
        if (s.then_body.empty() && s.else_body.empty()) return next;
        const int h = fresh();
        const CondPtr c = bind(s.cond);
        edge(h, t, Command::guard_of(c));
        edge(h, e, Command::guard_of(Cond::negation(c)));
        return h;
      }
      case Stmt::Kind::While: {
        const int h = fresh();
        const int b = sequence(s.then_body, h);
        const CondPtr c = bind(s.cond);
        edge(h, b, Command::guard_of(c));
        edge(h, next, Command::guard_of(Cond::negation(c)));
        return h;
      }
    }
    return next;
  }
};

// Renumbers locations in breadth-first order from the start; the end
// location goes last.
std::shared_ptr<Program> renumber(const Program& raw) {
  const int n = static_cast<int>(raw.locations.size());
  std::vector<int> order;
  std::vector<int> index(n, -1);
  std::deque<int> queue{raw.start};
  index[raw.start] = 0;
  while (!queue.empty()) {
    const int l = queue.front();
    queue.pop_front();
    if (l != raw.end) order.push_back(l);
    for (int id : raw.outgoing(l)) {
      const int t = raw.edges[id].to;
      if (index[t] < 0) {
        index[t] = 0;
        queue.push_back(t);
      }
    }
  }
  order.push_back(raw.end);
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);

  auto p = std::make_shared<Program>();
  p->name = raw.name;
  p->symbols = raw.symbols;
  p->locations.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) p->locations[i] = "l" + std::to_string(i);
  p->start = index[raw.start];
  p->end = index[raw.end];
  p->locations[p->start] = "bot";
  p->locations[p->end] = "top";
  for (int l : order)
    for (int id : raw.outgoing(l)) {
      Edge e = raw.edges[id];
      e.from = index[e.from];
      e.to = index[e.to];
      p->edges.push_back(std::move(e));
    }
  p->reindex();
  return p;
}

}  // namespace

SourceProgram parse(std::string_view text) {
  SourceProgram p = Parser(text).program();
  check(p);
  return p;
}

std::string print(const SourceProgram& p) {
  std::ostringstream os;
  os << "program " << p.name << ";\n";
  for (const ParamDecl& d : p.params) {
    os << "param " << d.name << " : " << d.lo << "..";
    if (d.hi) os << *d.hi;
    os << ";\n";
  }
  for (const VarDecl& d : p.vars)
    os << "var " << d.name << " : " << d.lo << ".." << d.hi << " = " << d.init << ";\n";
  os << "begin\n";
  print_body(os, p.body, 1);
  os << "end\n";
  return os.str();
}

bool equal(const SourceProgram& a, const SourceProgram& b) {
  if (a.name != b.name || a.params.size() != b.params.size() || a.vars.size() != b.vars.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const ParamDecl& x = a.params[i];
    const ParamDecl& y = b.params[i];
    if (x.name != y.name || x.lo != y.lo || x.hi != y.hi) return false;
  }
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const VarDecl& x = a.vars[i];
    const VarDecl& y = b.vars[i];
    if (x.name != y.name || x.lo != y.lo || x.hi != y.hi || x.init != y.init) return false;
  }
  return equal_body(a.body, b.body);
}

bool uses_nondet(const SourceProgram& p) { return body_uses_nondet(p.body); }

std::shared_ptr<const Program> lower(const SourceProgram& src) {
  Program raw;
  raw.name = src.name;
  for (const ParamDecl& d : src.params) {
    Symbol s;
    s.name = d.name;
    s.kind = SymbolKind::Param;
    s.lo = d.lo;
    s.hi = d.hi;
    s.init = d.lo;
    raw.symbols.push_back(s);
  }
  for (const VarDecl& d : src.vars) {
    Symbol s;
    s.name = d.name;
    s.kind = SymbolKind::Var;
    s.lo = d.lo;
    s.hi = d.hi;
    s.init = d.init;
    raw.symbols.push_back(s);
  }
  raw.end = raw.add_location("top");
  const int exit = raw.add_location("exit");
  raw.edges.push_back({raw.end, raw.end, Command::guard_of(Cond::truth(true))});
  raw.edges.push_back({exit, raw.end, Command::guard_of(Cond::truth(true))});
  raw.start = Lowering(raw).sequence(src.body, exit);
  raw.reindex();
  auto p = renumber(raw);
  validate(*p);
  return p;
}

std::shared_ptr<const Program> load_program(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return compile(ss.str());
}

std::shared_ptr<const Program> compile(std::string_view text) { return lower(parse(text)); }

ExprPtr parse_expression(std::string_view text) { return Parser(text).whole_expression(); }

CondPtr parse_condition(std::string_view text) { return Parser(text).whole_condition(); }

}  // namespace asterm
