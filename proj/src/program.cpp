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

#include "asterm/program.hpp"

#include <deque>
#include <sstream>

#include "asterm/error.hpp"

namespace asterm {

Command Command::guard_of(CondPtr c) {
  Command cmd;
  cmd.kind = Kind::Guard;
  cmd.guard = std::move(c);
  return cmd;
}

Command Command::assign(int target, ExprPtr value) {
  Command cmd;
  cmd.kind = Kind::Assign;
  cmd.target = target;
  cmd.value = std::move(value);
  return cmd;
}

Command Command::coin(int target, Rational p) {
  Command cmd;
  cmd.kind = Kind::Coin;
  cmd.target = target;
  cmd.prob = p;
  return cmd;
}

Command Command::nondet(int target) {
  Command cmd;
  cmd.kind = Kind::Nondet;
  cmd.target = target;
  return cmd;
}

void Program::reindex() {
  out.assign(locations.size(), {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.from < 0 || static_cast<std::size_t>(e.from) >= locations.size() ||
        e.to < 0 || static_cast<std::size_t>(e.to) >= locations.size())
      throw SemanticError("edge " + std::to_string(i) + " refers to an unknown location");
    out[e.from].push_back(static_cast<int>(i));
  }
}

int Program::slot_of(const std::string& n) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == n) return static_cast<int>(i);
  return -1;
}

bool Program::has_unbounded_params() const {
  for (const Symbol& s : symbols)
    if (s.kind == SymbolKind::Param && !s.hi) return true;
  return false;
}

bool Program::is_deterministic() const {
  for (const Edge& e : edges)
    if (e.cmd.kind == Command::Kind::Nondet) return false;
  return true;
}

bool Program::has_coins() const {
  for (const Edge& e : edges)
    if (e.cmd.kind == Command::Kind::Coin) return true;
  return false;
}

int Program::add_location(std::string n) {
  locations.push_back(std::move(n));
  out.emplace_back();
  return static_cast<int>(locations.size()) - 1;
}

std::string describe(const Program& p, const Command& c) {
  auto target = [&] { return p.symbols.at(c.target).name; };
  switch (c.kind) {
    case Command::Kind::Guard: return "[" + to_string(*c.guard) + "]";
    case Command::Kind::Assign: return target() + " := " + to_string(*c.value);
    case Command::Kind::Coin: return target() + " := coin(" + c.prob.str() + ")";
    case Command::Kind::Nondet: return target() + " := nondet()";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kPartitionCap = 1u << 20;

// Exhaustive partition check over the variables the guards mention. Skipped
// when a mentioned symbol is unbounded or the box is too large; the state
// space builder re-checks every reachable valuation anyway.
void check_partition(const Program& p, int loc) {
  std::set<int> slots;
  for (int id : p.outgoing(loc)) collect_slots(*p.edges[id].cmd.guard, slots);
  std::vector<int> order(slots.begin(), slots.end());
  std::uint64_t box = 1;
  for (int s : order) {
    const Symbol& sym = p.symbols.at(s);
    if (!sym.hi) return;
    box *= static_cast<std::uint64_t>(*sym.hi - sym.lo + 1);
    if (box > kPartitionCap) return;
  }
  std::vector<std::int64_t> vals(p.symbols.size(), 0);
  for (int s : order) vals[s] = p.symbols[s].lo;
  while (true) {
    int enabled = 0;
    for (int id : p.outgoing(loc))
      if (evaluate(*p.edges[id].cmd.guard, vals)) ++enabled;
    if (enabled != 1) {
      std::ostringstream os;
      os << "guards at location " << p.locations[loc] << " do not partition the valuations (";
      bool first = true;
      for (int s : order) {
        os << (first ? "" : ", ") << p.symbols[s].name << "=" << vals[s];
        first = false;
      }
      os << " enables " << enabled << " edges)";
      throw SemanticError(os.str());
    }
    std::size_t i = 0;
    for (; i < order.size(); ++i) {
      const Symbol& sym = p.symbols[order[i]];
      if (vals[order[i]] < *sym.hi) {
        ++vals[order[i]];
        break;
      }
      vals[order[i]] = sym.lo;
    }
    if (i == order.size()) return;
  }
}

}  // namespace

void validate(const Program& p) {
  const int n = static_cast<int>(p.locations.size());
  if (p.start < 0 || p.start >= n || p.end < 0 || p.end >= n)
    throw SemanticError("start or end location out of range");
  if (p.out.size() != p.locations.size())
    throw SemanticError("program index is stale");
  for (const Edge& e : p.edges) {
    if (e.cmd.kind == Command::Kind::Guard) {
      if (!e.cmd.guard) throw SemanticError("guard edge without condition");
      continue;
    }
    if (e.cmd.target < 0 || static_cast<std::size_t>(e.cmd.target) >= p.symbols.size())
      throw SemanticError("assignment to an unknown symbol");
    if (p.symbols[e.cmd.target].kind == SymbolKind::Param)
      throw SemanticError("assignment to parameter " + p.symbols[e.cmd.target].name);
    if (e.cmd.kind == Command::Kind::Coin && !e.cmd.prob.in_open_unit_interval())
      throw SemanticError("probability not in (0,1)");
  }
  const auto& top = p.outgoing(p.end);
  if (top.size() != 1 || p.edges[top[0]].to != p.end ||
      p.edges[top[0]].cmd.kind != Command::Kind::Guard)
    throw SemanticError("the end location must carry exactly its self-loop");
  for (int l = 0; l < n; ++l) {
    const auto& ids = p.outgoing(l);
    if (ids.empty())
      throw SemanticError("location " + p.locations[l] + " has no outgoing edge");
    int guards = 0;
    for (int id : ids)
      if (p.edges[id].cmd.kind == Command::Kind::Guard) ++guards;
    if (guards != 0 && guards != static_cast<int>(ids.size()))
      throw SemanticError("location " + p.locations[l] + " mixes guards and assignments");
    if (guards == 0 && ids.size() != 1)
      throw SemanticError("location " + p.locations[l] + " has more than one assignment edge");
    if (guards != 0 && l != p.end) check_partition(p, l);
  }
  std::vector<char> seen(n, 0);
  std::deque<int> queue{p.start};
  seen[p.start] = 1;
  while (!queue.empty()) {
    const int l = queue.front();
    queue.pop_front();
    for (int id : p.outgoing(l)) {
      const int t = p.edges[id].to;
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  for (int l = 0; l < n; ++l)
    if (!seen[l]) throw SemanticError("location " + p.locations[l] + " is unreachable");
}

bool equal(const Program& a, const Program& b) {
  if (a.locations != b.locations || a.start != b.start || a.end != b.end ||
      a.symbols.size() != b.symbols.size() || a.edges.size() != b.edges.size())
    return false;
  for (std::size_t i = 0; i < a.symbols.size(); ++i) {
    const Symbol& x = a.symbols[i];
    const Symbol& y = b.symbols[i];
    if (x.name != y.name || x.kind != y.kind || x.lo != y.lo || x.hi != y.hi || x.init != y.init)
      return false;
  }
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const Edge& x = a.edges[i];
    const Edge& y = b.edges[i];
    if (x.from != y.from || x.to != y.to || x.cmd.kind != y.cmd.kind) return false;
    switch (x.cmd.kind) {
      case Command::Kind::Guard:
        if (!equal(x.cmd.guard, y.cmd.guard)) return false;
        break;
      case Command::Kind::Assign:
        if (x.cmd.target != y.cmd.target || !equal(x.cmd.value, y.cmd.value)) return false;
        break;
      case Command::Kind::Coin:
        if (x.cmd.target != y.cmd.target || !(x.cmd.prob == y.cmd.prob)) return false;
        break;
      case Command::Kind::Nondet:
        if (x.cmd.target != y.cmd.target) return false;
        break;
    }
  }
  return true;
}

}  // namespace asterm
