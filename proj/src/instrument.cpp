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

#include "asterm/instrument.hpp"

#include <map>
#include <sstream>

#include "asterm/error.hpp"
#include "asterm/lang.hpp"

namespace asterm {

namespace {

std::string var_text(const TsVar& v) {
  std::string s = v.name + ":";
  if (v.nat)
    s += "nat";
  else
    s += std::to_string(v.lo) + ".." + (v.hi ? std::to_string(*v.hi) : std::string());
  switch (v.init) {
    case TsVar::Init::Value: s += "=" + std::to_string(v.value); break;
    case TsVar::Init::Unbounded: s += "=?"; break;
    case TsVar::Init::Any: break;
  }
  return s;
}

std::string update_text(const TsUpdate& u) {
  switch (u.kind) {
    case TsUpdate::Kind::Expr: return u.target + ":=" + to_string(*u.value);
    case TsUpdate::Kind::Nondet: return u.target + ":=nondet()";
    case TsUpdate::Kind::Unbounded: return u.target + ":=?";
  }
  return {};
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words_of(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void bad(int line, const std::string& what) {
  throw ParseError(line, 1, what);
}

std::int64_t to_int(const std::string& s, int line) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) bad(line, "bad integer '" + s + "'");
  return v;
}

TsVar parse_var(const std::string& tok, int line) {
  TsVar v;
  const std::size_t colon = tok.find(':');
  if (colon == std::string::npos || colon == 0) bad(line, "bad variable '" + tok + "'");
  v.name = tok.substr(0, colon);
  std::string rest = tok.substr(colon + 1);
  v.init = TsVar::Init::Any;
  const std::size_t eq = rest.find('=');
  if (eq != std::string::npos) {
    const std::string init = rest.substr(eq + 1);
    if (init == "?") {
      v.init = TsVar::Init::Unbounded;
    } else {
      v.init = TsVar::Init::Value;
      v.value = to_int(init, line);
    }
    rest = rest.substr(0, eq);
  }
  if (rest == "nat") {
    v.nat = true;
    v.lo = 0;
    return v;
  }
  const std::size_t dots = rest.find("..");
  if (dots == std::string::npos) bad(line, "bad domain '" + rest + "'");
  v.lo = to_int(rest.substr(0, dots), line);
  const std::string hi = rest.substr(dots + 2);
  if (!hi.empty()) v.hi = to_int(hi, line);
  return v;
}

TsUpdate parse_update(const std::string& text, int line) {
  const std::size_t at = text.find(":=");
  if (at == std::string::npos) bad(line, "bad update '" + text + "'");
  TsUpdate u;
  u.target = trim(text.substr(0, at));
  const std::string rhs = trim(text.substr(at + 2));
  if (rhs == "?") {
    u.kind = TsUpdate::Kind::Unbounded;
  } else if (rhs == "nondet()") {
    u.kind = TsUpdate::Kind::Nondet;
  } else {
    u.kind = TsUpdate::Kind::Expr;
    try {
      u.value = parse_expression(rhs);
    } catch (const ParseError& e) {
      bad(line, std::string("bad expression: ") + e.what());
    }
  }
  return u;
}

TsTransition parse_transition(const std::string& text, int line) {
  const std::size_t g = text.find(" guard: ");
  const std::size_t u = text.find(" update: ");
  const std::size_t t = text.rfind(" to: ");
  if (g == std::string::npos || u == std::string::npos || t == std::string::npos || !(g < u && u < t))
    bad(line, "transition must read 'from: L guard: C update: U to: L'");
  TsTransition tr;
  tr.from = trim(text.substr(5, g - 5));
  const std::string guard = trim(text.substr(g + 8, u - g - 8));
  try {
    tr.guard = parse_condition(guard);
  } catch (const ParseError& e) {
    bad(line, std::string("bad guard: ") + e.what());
  }
  const std::string ups = trim(text.substr(u + 9, t - u - 9));
  if (ups != "skip") {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = ups.find(',', start);
      tr.updates.push_back(parse_update(ups.substr(start, comma == std::string::npos ? comma : comma - start), line));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  tr.to = trim(text.substr(t + 5));
  if (tr.from.empty() || tr.to.empty()) bad(line, "transition without location");
  return tr;
}

TsVar var_of(const Symbol& s) {
  TsVar v;
  v.name = s.name;
  v.lo = s.lo;
  v.hi = s.hi;
  if (s.kind == SymbolKind::Param) {
    v.init = TsVar::Init::Any;
  } else {
    v.init = TsVar::Init::Value;
    v.value = s.init;
  }
  return v;
}

TransitionSystem skeleton(const Program& p) {
  TransitionSystem d;
  d.name = p.name;
  for (const Symbol& s : p.symbols) d.vars.push_back(var_of(s));
  d.locations = p.locations;
  d.start = p.locations[p.start];
  d.end = p.locations[p.end];
  return d;
}

CondPtr cond(const std::string& text) { return parse_condition(text); }
ExprPtr expr(const std::string& text) { return parse_expression(text); }

TsTransition plain(const Program& p, const Edge& e) {
  TsTransition t;
  t.from = p.locations[e.from];
  t.to = p.locations[e.to];
  switch (e.cmd.kind) {
    case Command::Kind::Guard:
      t.guard = e.cmd.guard;
      break;
    case Command::Kind::Assign:
      t.guard = Cond::truth(true);
      t.updates.push_back({p.symbols[e.cmd.target].name, TsUpdate::Kind::Expr, e.cmd.value});
      break;
    case Command::Kind::Coin:
    case Command::Kind::Nondet:
      t.guard = Cond::truth(true);
      t.updates.push_back({p.symbols[e.cmd.target].name, TsUpdate::Kind::Nondet, nullptr});
      break;
  }
  return t;
}

// `b * v + c` in a readable linear form.
std::string linear(std::int64_t c, std::int64_t b, const std::string& v) {
  if (b == 0) return std::to_string(c);
  std::string s = b == 1 ? v : std::to_string(b) + " * " + v;
  if (c > 0) s += " + " + std::to_string(c);
  if (c < 0) s += " - " + std::to_string(-c);
  return s;
}

std::string fresh_name(const Program& p, std::string base) {
  while (p.slot_of(base) >= 0) base += "_";
  return base;
}

}  // namespace

std::string emit(const TransitionSystem& d) {
  std::ostringstream os;
  for (const std::string& c : d.comments) os << "# " << c << "\n";
  os << "name: " << d.name << "\n";
  os << "vars:";
  for (const TsVar& v : d.vars) os << " " << var_text(v);
  os << "\nlocs:";
  for (const std::string& l : d.locations) os << " " << l;
  os << "\nstart: " << d.start << "\nend: " << d.end << "\n";
  for (const TsTransition& t : d.transitions) {
    os << "from: " << t.from << " guard: " << to_string(*t.guard) << " update: ";
    if (t.updates.empty()) os << "skip";
    for (std::size_t i = 0; i < t.updates.size(); ++i)
      os << (i ? ", " : "") << update_text(t.updates[i]);
    os << " to: " << t.to << "\n";
  }
  return os.str();
}

TransitionSystem parse_transition_system(std::string_view text) {
  TransitionSystem d;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool have_start = false;
  bool have_end = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s[0] == '#') {
      d.comments.push_back(trim(s.substr(1)));
    } else if (s.rfind("name:", 0) == 0) {
      d.name = trim(s.substr(5));
    } else if (s.rfind("vars:", 0) == 0) {
      for (const std::string& tok : words_of(s.substr(5))) d.vars.push_back(parse_var(tok, line));
    } else if (s.rfind("locs:", 0) == 0) {
      d.locations = words_of(s.substr(5));
    } else if (s.rfind("start:", 0) == 0) {
      d.start = trim(s.substr(6));
      have_start = true;
    } else if (s.rfind("end:", 0) == 0) {
      d.end = trim(s.substr(4));
      have_end = true;
    } else if (s.rfind("from:", 0) == 0) {
      d.transitions.push_back(parse_transition(s, line));
    } else {
      bad(line, "unrecognised line");
    }
  }
  if (!have_start || !have_end) bad(line, "document lacks start: or end:");
  return d;
}

TransitionSystem export_nondet(const Program& p) {
  TransitionSystem d = skeleton(p);
  for (const Edge& e : p.edges) d.transitions.push_back(plain(p, e));
  return d;
}

TransitionSystem instrument_pattern(const Program& p, const Pattern& pat,
                                    std::string_view index_param) {
  if (pat.kind == Pattern::Kind::Simple)
    throw UnsupportedError("simple patterns are checked natively; instrument a template or sequence");
  if (pat.kind == Pattern::Kind::Universal)
    throw UnsupportedError("the universal pattern cannot be instrumented");
  if (pat.kind == Pattern::Kind::Sequence) {
    if (pat.words.empty()) throw InvalidArgument("sequence pattern without words");
    for (const std::string& w : pat.words)
      if (w.empty()) throw InvalidArgument("pattern contains an empty word");
  }
  if (pat.kind == Pattern::Kind::Template && pat.alpha.empty() && pat.beta.empty() &&
      pat.gamma.empty())
    throw InvalidArgument("pattern contains an empty word");

  TransitionSystem d = skeleton(p);
  d.comments.push_back("pattern: " + serialize(pat));
  const std::string ctr = fresh_name(p, "ctr");
  const std::string next = fresh_name(p, "next");
  const std::string pos = fresh_name(p, "pos");
  const std::string ph = fresh_name(p, "ph");
  if (!index_param.empty()) {
    const int slot = p.slot_of(std::string(index_param));
    if (slot < 0 || p.symbols[slot].kind != SymbolKind::Param)
      throw InvalidArgument("'" + std::string(index_param) + "' is not a parameter");
    d.comments.push_back("invariant: " + next + " <= " + std::string(index_param));
  }

  const bool seq = pat.kind == Pattern::Kind::Sequence;
  const std::int64_t m = seq ? static_cast<std::int64_t>(pat.words.size()) : 0;
  const std::int64_t A = static_cast<std::int64_t>(pat.alpha.size());
  const std::int64_t B = static_cast<std::int64_t>(pat.beta.size());
  const std::int64_t G = static_cast<std::int64_t>(pat.gamma.size());
  const std::int64_t delta = pat.delta;

  TsVar vc{ctr, 0, std::nullopt, true, TsVar::Init::Unbounded, 0};
  TsVar vn{next, 1, std::nullopt, true, TsVar::Init::Value, 1};
  if (seq) {
    vn.nat = false;
    vn.hi = pat.tail == Tail::Repeat ? m : m + 1;
  }
  TsVar vp{pos, 0, std::nullopt, true, TsVar::Init::Value, 1};
  d.vars.push_back(vc);
  d.vars.push_back(vn);
  d.vars.push_back(vp);
  const bool phase = !seq && B > 1;
  if (phase) d.vars.push_back({ph, 0, B - 1, false, TsVar::Init::Value, 0});

  for (const Edge& e : p.edges) {
    if (e.cmd.kind != Command::Kind::Coin) {
      d.transitions.push_back(plain(p, e));
      continue;
    }
    const std::string from = p.locations[e.from];
    const std::string to = p.locations[e.to];
    const std::string x = p.symbols[e.cmd.target].name;
    auto add = [&](const std::string& guard, std::vector<TsUpdate> ups) {
      d.transitions.push_back({from, cond(guard), std::move(ups), to});
    };
    // resets toss nothing and stay put, so the next word may follow at once
    auto reset_line = [&](const std::string& guard, std::vector<TsUpdate> ups) {
      d.transitions.push_back({from, cond(guard), std::move(ups), from});
    };
    auto set = [&](const std::string& v, const std::string& value) {
      return TsUpdate{v, TsUpdate::Kind::Expr, expr(value)};
    };
    const TsUpdate free_x{x, TsUpdate::Kind::Nondet, nullptr};
    const TsUpdate guess{ctr, TsUpdate::Kind::Unbounded, nullptr};
    const std::string idle = ctr + " <= 0 && ";

    add(ctr + " > 0", {free_x, set(ctr, ctr + " - 1")});
    if (seq) {
      for (std::int64_t k = 1; k <= m; ++k) {
        const std::string& w = pat.words[k - 1];
        const std::string at = idle + next + " == " + std::to_string(k) + " && ";
        std::vector<TsUpdate> reset{guess, set(pos, "1")};
        if (k < m || pat.tail == Tail::Free) reset.push_back(set(next, next + " + 1"));
        reset_line(at + pos + " > " + std::to_string(w.size()), reset);
        for (std::size_t j = 0; j < w.size(); ++j)
          add(at + pos + " == " + std::to_string(j + 1),
              {set(x, std::string(1, w[j])), set(pos, pos + " + 1")});
      }
      if (pat.tail == Tail::Free) add(idle + next + " == " + std::to_string(m + 1), {free_x});
      continue;
    }

    std::vector<TsUpdate> reset{guess, set(pos, "1"), set(next, next + " + 1")};
    if (phase) reset.push_back(set(ph, "0"));
    const bool split = B > 0 && delta >= 1;
    const std::string low = split ? next + " <= " + std::to_string(delta) + " && " : "";
    const std::string high = split ? next + " > " + std::to_string(delta) + " && " : "";
    // Length of the current word: A + G, plus B * (next - delta) when next > delta.
    if (split) reset_line(idle + low + pos + " > " + std::to_string(A + G), reset);
    reset_line(idle + high + pos + " > " + linear(A + G - B * delta, B, next), reset);
    for (std::int64_t j = 1; j <= A; ++j)
      add(idle + pos + " == " + std::to_string(j),
          {set(x, std::string(1, pat.alpha[j - 1])), set(pos, pos + " + 1")});
    if (B > 0) {
      const std::string span = idle + high + pos + " > " + std::to_string(A) + " && " + pos +
                               " <= " + linear(A - B * delta, B, next);
      if (!phase) {
        add(span, {set(x, pat.beta), set(pos, pos + " + 1")});
      } else {
        for (std::int64_t r = 0; r < B; ++r)
          add(span + " && " + ph + " == " + std::to_string(r),
              {set(x, std::string(1, pat.beta[r])), set(pos, pos + " + 1"),
               set(ph, std::to_string((r + 1) % B))});
      }
    }
    for (std::int64_t j = 1; j <= G; ++j) {
      const TsUpdate letter = set(x, std::string(1, pat.gamma[j - 1]));
      if (split) add(idle + low + pos + " == " + std::to_string(A + j), {letter, set(pos, pos + " + 1")});
      add(idle + high + pos + " == " + linear(A - B * delta + j, B, next),
          {letter, set(pos, pos + " + 1")});
    }
  }
  return d;
}

std::shared_ptr<const Program> to_program(const TransitionSystem& d) {
  auto p = std::make_shared<Program>();
  p->name = d.name;
  for (const TsVar& v : d.vars) {
    Symbol s;
    s.name = v.name;
    s.lo = v.lo;
    s.hi = v.hi;
    if (v.nat || v.init == TsVar::Init::Unbounded)
      throw UnsupportedError("variable '" + v.name + "' has an unbounded domain");
    if (v.init == TsVar::Init::Any) {
      s.kind = SymbolKind::Param;
      s.init = v.lo;
    } else {
      if (!v.hi) throw UnsupportedError("variable '" + v.name + "' has no upper bound");
      s.kind = SymbolKind::Var;
      s.init = v.value;
    }
    p->symbols.push_back(s);
  }
  std::map<std::string, int> index;
  auto loc = [&](const std::string& n) {
    auto it = index.find(n);
    if (it != index.end()) return it->second;
    const int id = p->add_location(n);
    index.emplace(n, id);
    return id;
  };
  for (const std::string& l : d.locations) loc(l);
  const auto lookup = [&](const std::string& n) {
    const int slot = p->slot_of(n);
    if (slot < 0) throw SemanticError("undeclared variable '" + n + "'");
    return slot;
  };
  for (const TsTransition& t : d.transitions) {
    Edge e;
    e.from = loc(t.from);
    e.to = loc(t.to);
    if (t.updates.empty()) {
      e.cmd = Command::guard_of(resolve(t.guard, lookup));
    } else {
      if (t.updates.size() != 1 || t.guard->kind != Cond::Kind::True)
        throw UnsupportedError("transition from " + t.from +
                               " combines a guard with updates or has several updates");
      const TsUpdate& u = t.updates.front();
      const int target = lookup(u.target);
      if (u.kind == TsUpdate::Kind::Expr)
        e.cmd = Command::assign(target, resolve(u.value, lookup));
      else if (u.kind == TsUpdate::Kind::Nondet)
        e.cmd = Command::nondet(target);
      else
        throw UnsupportedError("unbounded nondeterministic update of " + u.target);
    }
    p->edges.push_back(e);
  }
  p->start = loc(d.start);
  p->end = loc(d.end);
  p->reindex();
  validate(*p);
  return p;
}

}  // namespace asterm
