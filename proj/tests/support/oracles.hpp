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

// Reference implementations used only by tests. They are deliberately
// naive and share no code with the library's checkers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "asterm/checker.hpp"
#include "asterm/instrument.hpp"
#include "asterm/semantics.hpp"

namespace asterm::testing {

// Iterative Tarjan; returns true if some nontrivial SCC holds an accepting vertex.
inline bool has_accepting_cycle(const std::vector<std::vector<std::uint32_t>>& succ,
                                const std::vector<char>& accepting) {
  const std::size_t n = succ.size();
  std::vector<std::int64_t> index(n, -1), low(n, 0);
  std::vector<char> on(n, 0);
  std::vector<std::uint32_t> stack;
  std::int64_t counter = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < succ[f.v].size()) {
        const std::uint32_t w = succ[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] != index[v]) continue;
      std::vector<std::uint32_t> comp;
      while (true) {
        const std::uint32_t w = stack.back();
        stack.pop_back();
        on[w] = 0;
        comp.push_back(w);
        if (w == v) break;
      }
      bool nontrivial = comp.size() > 1;
      if (!nontrivial)
        for (std::uint32_t w : succ[v]) nontrivial = nontrivial || w == v;
      if (!nontrivial) continue;
      for (std::uint32_t w : comp)
        if (accepting[w]) return true;
    }
  }
  return false;
}

// Longest proper border table for a KMP matcher.
inline std::vector<std::size_t> borders(const std::string& w) {
  std::vector<std::size_t> f(w.size() + 1, 0);
  for (std::size_t i = 1, k = 0; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) k = f[k];
    if (w[i] == w[k]) ++k;
    f[i + 1] = k;
  }
  return f;
}

// Is there a nonterminating run whose coin trace conforms to
// C* w1 C* w2 ... C* wm followed by (C* wm)^ω (Repeat) or C^ω (Free)?
// An empty single word stands for C^ω.
inline bool conforming_run_exists(const StateSpace& s, const std::vector<std::string>& words,
                                  Tail tail = Tail::Repeat) {
  const bool anything = words.size() == 1 && words[0].empty();
  const std::size_t m = words.size();
  std::vector<std::vector<std::size_t>> fail;
  for (const std::string& w : words) fail.push_back(borders(w));
  // product state: node, phase (m = free sink), matched length, just-completed flag
  using Key = std::tuple<NodeId, std::size_t, std::size_t, int>;
  std::map<Key, std::uint32_t> id;
  std::vector<Key> keys;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<char> acc;
  auto intern = [&](const Key& k) {
    auto [it, fresh] = id.emplace(k, static_cast<std::uint32_t>(keys.size()));
    if (fresh) {
      keys.push_back(k);
      succ.emplace_back();
      const bool a = anything || std::get<3>(k) == 1 || std::get<1>(k) == m;
      acc.push_back(a ? 1 : 0);
    }
    return it->second;
  };
  std::vector<std::uint32_t> work;
  for (NodeId n : s.init())
    if (!s.is_terminal(n)) work.push_back(intern({n, 0, 0, 0}));
  while (!work.empty()) {
    const std::uint32_t v = work.back();
    work.pop_back();
    const auto [n, phase, j, flag] = keys[v];
    (void)flag;
    std::vector<std::uint32_t> out;
    for (const Transition& t : s.successors(n)) {
      if (s.is_terminal(t.target)) continue;
      std::size_t p = phase, k = j;
      int done = 0;
      if (is_coin(t.label) && !anything && p < m) {
        const std::string& w = words[p];
        const char c = t.label == Label::Coin0 ? '0' : '1';
        while (k > 0 && w[k] != c) k = fail[p][k];
        if (w[k] == c) ++k;
        if (k == w.size()) {
          k = 0;
          if (p + 1 < m) {
            ++p;
          } else if (tail == Tail::Repeat) {
            done = 1;
          } else {
            p = m;
          }
        }
      }
      const std::size_t before = keys.size();
      const std::uint32_t u = intern({t.target, p, k, done});
      out.push_back(u);
      if (keys.size() > before) work.push_back(u);
    }
    succ[v] = out;
  }
  return has_accepting_cycle(succ, acc);
}

inline bool naive_infix_of_power(const std::string& w, const std::string& u) {
  if (u.empty()) return w.empty();
  std::string p;
  while (p.size() < w.size() + 2 * u.size()) p += u;
  return p.find(w) != std::string::npos;
}

// Shortest extension of `base` that is an infix of no u^ω, least in
// lexicographic order among those. Empty if none up to `limit` letters.
inline std::string brute_spoiler(const std::string& base, const std::vector<std::string>& loops,
                                 std::size_t limit = 24) {
  for (std::size_t extra = 0; base.size() + extra <= limit; ++extra) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << extra); ++bits) {
      std::string w = base;
      for (std::size_t i = 0; i < extra; ++i) w += ((bits >> (extra - 1 - i)) & 1) ? '1' : '0';
      bool ok = true;
      for (const std::string& u : loops) ok = ok && !naive_infix_of_power(w, u);
      if (ok) return w;
    }
  }
  return {};
}

// Explores a transition-system document. `?` picks a value in 0..unbounded_cap,
// variables in `saturate` are clamped from above after each update. Returns
// whether some reachable cycle avoids the end location.
inline bool document_diverges(const TransitionSystem& d, const Instance& params,
                              std::int64_t unbounded_cap,
                              const std::map<std::string, std::int64_t>& saturate = {},
                              std::size_t state_cap = 4'000'000) {
  std::map<std::string, int> slot;
  for (std::size_t i = 0; i < d.vars.size(); ++i) slot[d.vars[i].name] = static_cast<int>(i);
  std::map<std::string, int> loc;
  for (const std::string& l : d.locations) loc.emplace(l, static_cast<int>(loc.size()));
  for (const TsTransition& t : d.transitions) {
    loc.emplace(t.from, static_cast<int>(loc.size()));
    loc.emplace(t.to, static_cast<int>(loc.size()));
  }
  const auto lookup = [&](const std::string& n) { return slot.at(n); };
  struct T {
    int from, to;
    CondPtr guard;
    std::vector<std::pair<int, TsUpdate>> ups;
  };
  std::vector<T> ts;
  for (const TsTransition& t : d.transitions) {
    T r{loc.at(t.from), loc.at(t.to), resolve(t.guard, lookup), {}};
    for (const TsUpdate& u : t.updates) {
      TsUpdate v = u;
      if (v.value) v.value = resolve(v.value, lookup);
      r.ups.emplace_back(slot.at(u.target), v);
    }
    ts.push_back(r);
  }
  const int end = loc.at(d.end);
  std::vector<std::int64_t> clamp(d.vars.size(), INT64_MAX);
  for (const auto& [name, cap] : saturate) clamp[slot.at(name)] = cap;

  // initial states
  std::vector<std::vector<std::int64_t>> init{{}};
  for (const TsVar& v : d.vars) {
    std::vector<std::int64_t> choices;
    if (auto it = params.find(v.name); it != params.end())
      choices = {it->second};
    else if (v.init == TsVar::Init::Value)
      choices = {v.value};
    else if (v.init == TsVar::Init::Unbounded)
      for (std::int64_t x = 0; x <= unbounded_cap; ++x) choices.push_back(x);
    else
      for (std::int64_t x = v.lo; x <= *v.hi; ++x) choices.push_back(x);
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& p : init)
      for (std::int64_t c : choices) {
        auto q = p;
        q.push_back(c);
        next.push_back(q);
      }
    init = std::move(next);
  }
  struct H {
    std::size_t operator()(const std::vector<std::int64_t>& k) const {
      std::size_t h = 1469598103934665603ull;
      for (std::int64_t x : k) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, H> id;
  std::vector<std::vector<std::int64_t>> states;
  std::vector<std::vector<std::uint32_t>> succ;
  auto intern = [&](std::vector<std::int64_t> k, std::vector<std::uint32_t>& work) {
    auto [it, fresh] = id.emplace(k, static_cast<std::uint32_t>(states.size()));
    if (fresh) {
      if (states.size() >= state_cap) throw std::runtime_error("document exploration too large");
      states.push_back(std::move(k));
      succ.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };
  std::vector<std::uint32_t> work;
  for (auto& v : init) {
    v.insert(v.begin(), loc.at(d.start));
    intern(v, work);
  }
  while (!work.empty()) {
    const std::uint32_t s = work.back();
    work.pop_back();
    const std::vector<std::int64_t> st = states[s];
    if (st[0] == end) continue;
    const std::span<const std::int64_t> vals(st.data() + 1, st.size() - 1);
    for (const T& t : ts) {
      if (t.from != st[0] || !evaluate(*t.guard, vals)) continue;
      std::vector<std::vector<std::int64_t>> outs{st};
      outs[0][0] = t.to;
      for (const auto& [k, u] : t.ups) {
        std::vector<std::int64_t> choices;
        if (u.kind == TsUpdate::Kind::Expr)
          choices = {std::min(evaluate(*u.value, vals), clamp[k])};
        else if (u.kind == TsUpdate::Kind::Nondet)
          choices = {0, 1};
        else
          for (std::int64_t x = 0; x <= unbounded_cap; ++x) choices.push_back(x);
        std::vector<std::vector<std::int64_t>> next;
        for (const auto& o : outs)
          for (std::int64_t c : choices) {
            auto q = o;
            q[1 + k] = c;
            next.push_back(q);
          }
        outs = std::move(next);
      }
      for (auto& o : outs) {
        const std::uint32_t u = intern(std::move(o), work);
        succ[s].push_back(u);
      }
    }
  }
  std::vector<char> acc(states.size(), 1);
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i][0] == end) succ[i].clear();
  return has_accepting_cycle(succ, acc);
}

}  // namespace asterm::testing
