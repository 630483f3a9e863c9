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

#include "asterm/semantics.hpp"

#include <sstream>

#include "asterm/error.hpp"

namespace asterm {

std::size_t StateSpace::KeyHash::operator()(const std::vector<std::int64_t>& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::int64_t v : k) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

Valuation StateSpace::valuation(NodeId n) const {
  if (kind_[n] == NodeKind::Terminal) return {};
  return {vals_.data() + static_cast<std::size_t>(n) * width_, width_};
}

std::string StateSpace::node_name(NodeId n) const {
  if (kind_[n] == NodeKind::Terminal) return "top";
  std::string s = program_->locations[loc_[n]] + "{";
  const Valuation v = valuation(n);
  for (std::size_t i = 0; i < width_; ++i) {
    if (i) s += ",";
    s += program_->symbols[i].name + "=" + std::to_string(v[i]);
  }
  return s + "}";
}

std::optional<NodeId> StateSpace::find(int location, std::span<const std::int64_t> vals) const {
  if (location == program_->end) {
    if (terminal_ == kNoNode) return std::nullopt;
    return terminal_;
  }
  std::vector<std::int64_t> key;
  key.reserve(vals.size() + 1);
  key.push_back(location);
  key.insert(key.end(), vals.begin(), vals.end());
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool StateSpace::has_action_nodes() const {
  for (NodeKind k : kind_)
    if (k == NodeKind::Action) return true;
  return false;
}

namespace {

std::string valuation_text(const Program& p, Valuation v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += p.symbols[i].name + "=" + std::to_string(v[i]);
  }
  return s + "}";
}

}  // namespace

StateSpace build(std::shared_ptr<const Program> prog, const Instance& instance,
                 const BuildOptions& opts) {
  if (!prog) throw InvalidArgument("null program");
  const Program& p = *prog;
  StateSpace s;
  s.program_ = prog;
  s.instance_ = instance;
  s.width_ = p.symbols.size();
  const std::size_t width = s.width_;

  for (const auto& [name, value] : instance) {
    const int slot = p.slot_of(name);
    if (slot < 0 || p.symbols[slot].kind != SymbolKind::Param)
      throw InvalidArgument("'" + name + "' is not a parameter");
    if (!p.symbols[slot].in_range(value))
      throw InvalidArgument("value " + std::to_string(value) + " for '" + name +
                            "' is outside its declared range");
  }

  // Parameters left open range over their declared interval.
  std::vector<int> open;
  std::vector<std::int64_t> start(width);
  for (std::size_t i = 0; i < width; ++i) {
    const Symbol& sym = p.symbols[i];
    start[i] = sym.init;
    if (sym.kind != SymbolKind::Param) continue;
    auto it = instance.find(sym.name);
    if (it != instance.end()) {
      start[i] = it->second;
    } else if (!sym.hi) {
      throw InvalidArgument("parameter '" + sym.name + "' is unbounded and must be fixed");
    } else {
      start[i] = sym.lo;
      open.push_back(static_cast<int>(i));
    }
  }

  std::vector<std::int64_t> key(width + 1);
  auto intern = [&](int loc, const std::int64_t* vals) -> NodeId {
    if (loc == p.end) {
      if (s.terminal_ == kNoNode) {
        s.terminal_ = static_cast<NodeId>(s.kind_.size());
        s.loc_.push_back(loc);
        s.vals_.insert(s.vals_.end(), width, 0);
        s.kind_.push_back(NodeKind::Terminal);
      }
      return s.terminal_;
    }
    key[0] = loc;
    std::copy(vals, vals + width, key.begin() + 1);
    auto [it, fresh] = s.index_.try_emplace(key, static_cast<NodeId>(s.kind_.size()));
    if (fresh) {
      if (s.kind_.size() >= opts.node_cap)
        throw ResourceError("state space exceeds the node cap of " +
                            std::to_string(opts.node_cap));
      s.loc_.push_back(loc);
      s.vals_.insert(s.vals_.end(), vals, vals + width);
      s.kind_.push_back(NodeKind::Deterministic);
    }
    return it->second;
  };

  while (true) {
    const NodeId n = intern(p.start, start.data());
    if (s.init_.empty() || s.init_.back() != n) s.init_.push_back(n);
    std::size_t i = 0;
    for (; i < open.size(); ++i) {
      const Symbol& sym = p.symbols[open[i]];
      if (start[open[i]] < *sym.hi) {
        ++start[open[i]];
        break;
      }
      start[open[i]] = sym.lo;
    }
    if (i == open.size()) break;
  }

  std::vector<std::int64_t> cur(width);
  std::vector<std::int64_t> succ(width);
  for (NodeId n = 0; n < s.kind_.size(); ++n) {
    if (s.kind_[n] == NodeKind::Terminal) {
      s.trans_.push_back({Label::Tau, n, Rational::one(), -1});
      s.first_.push_back(static_cast<std::uint32_t>(s.trans_.size()));
      continue;
    }
    const int loc = s.loc_[n];
    std::copy_n(s.vals_.begin() + static_cast<std::ptrdiff_t>(n * width), width, cur.begin());
    const auto& ids = p.outgoing(loc);
    const Command& head = p.edges[ids.front()].cmd;
    switch (head.kind) {
      case Command::Kind::Guard: {
        int enabled = 0;
        int chosen = -1;
        for (int id : ids)
          if (evaluate(*p.edges[id].cmd.guard, cur)) {
            ++enabled;
            if (chosen < 0) chosen = id;
          }
        if (enabled != 1)
          throw ModelingError("location " + p.locations[loc] + " enables " +
                              std::to_string(enabled) + " guards at valuation " +
                              valuation_text(p, cur));
        const NodeId t = intern(p.edges[chosen].to, cur.data());
        s.trans_.push_back({Label::Tau, t, Rational::one(), chosen});
        break;
      }
      case Command::Kind::Assign: {
        const int id = ids.front();
        const std::int64_t v = evaluate(*head.value, cur);
        const Symbol& sym = p.symbols[head.target];
        if (!sym.in_range(v))
          throw ModelingError("edge " + p.locations[loc] + " -> " +
                              p.locations[p.edges[id].to] + " (" + describe(p, head) +
                              ") assigns " + std::to_string(v) + " outside the range of " +
                              sym.name + " at valuation " + valuation_text(p, cur));
        succ = cur;
        succ[head.target] = v;
        const NodeId t = intern(p.edges[id].to, succ.data());
        s.trans_.push_back({Label::Tau, t, Rational::one(), id});
        break;
      }
      case Command::Kind::Coin:
      case Command::Kind::Nondet: {
        const int id = ids.front();
        const bool coin = head.kind == Command::Kind::Coin;
        s.kind_[n] = coin ? NodeKind::Coin : NodeKind::Action;
        for (int bit = 0; bit < 2; ++bit) {
          succ = cur;
          succ[head.target] = bit;
          const NodeId t = intern(p.edges[id].to, succ.data());
          Transition tr;
          tr.target = t;
          tr.edge = id;
          if (coin) {
            tr.label = bit ? Label::Coin1 : Label::Coin0;
            tr.prob = bit ? head.prob.complement() : head.prob;
          } else {
            tr.label = bit ? Label::Act1 : Label::Act0;
          }
          s.trans_.push_back(tr);
        }
        break;
      }
    }
    s.first_.push_back(static_cast<std::uint32_t>(s.trans_.size()));
  }
  return s;
}

std::string to_string(Label l) {
  switch (l) {
    case Label::Tau: return "tau";
    case Label::Coin0: return "0";
    case Label::Coin1: return "1";
    case Label::Act0: return "a0";
    case Label::Act1: return "a1";
  }
  return "?";
}

bool is_coin(Label l) { return l == Label::Coin0 || l == Label::Coin1; }
bool is_action(Label l) { return l == Label::Act0 || l == Label::Act1; }

namespace {

const Transition* find_transition(const StateSpace& s, const Step& st) {
  if (st.from >= s.size() || st.to >= s.size()) return nullptr;
  for (const Transition& t : s.successors(st.from))
    if (t.label == st.label && t.target == st.to) return &t;
  return nullptr;
}

bool is_init(const StateSpace& s, NodeId n) {
  for (NodeId i : s.init())
    if (i == n) return true;
  return false;
}

}  // namespace

bool replays(const StateSpace& s, const Lasso& l) {
  if (l.loop.empty()) return false;
  const NodeId first = l.prefix.empty() ? l.loop.front().from : l.prefix.front().from;
  if (!is_init(s, first)) return false;
  NodeId at = first;
  for (const Step& st : l.prefix) {
    if (st.from != at || !find_transition(s, st)) return false;
    at = st.to;
  }
  const NodeId head = at;
  for (const Step& st : l.loop) {
    if (st.from != at || !find_transition(s, st)) return false;
    at = st.to;
  }
  return at == head && coin_word(l.loop) == l.coinword;
}

std::string format_steps(const StateSpace& s, std::span<const Step> steps) {
  std::string out;
  for (const Step& st : steps) {
    out += "  " + s.node_name(st.from) + " " + to_string(st.label);
    if (is_coin(st.label)) {
      const Transition* t = find_transition(s, st);
      if (t) out += " " + t->prob.str();
    }
    out += " " + s.node_name(st.to) + "\n";
  }
  return out;
}

std::string format_lasso(const StateSpace& s, const Lasso& l) {
  std::string out = "PREFIX:\n" + format_steps(s, l.prefix);
  out += "LOOP:\n" + format_steps(s, l.loop);
  out += "COINWORD: " + (l.coinword.empty() ? std::string("ε") : l.coinword) + "\n";
  return out;
}

std::string dump(const StateSpace& s) {
  std::ostringstream os;
  for (NodeId n = 0; n < s.size(); ++n)
    for (const Transition& t : s.successors(n)) {
      os << s.node_name(n) << " " << to_string(t.label);
      if (is_coin(t.label)) os << " " << t.prob.str();
      os << " " << s.node_name(t.target) << "\n";
    }
  return os.str();
}

std::vector<Label> trace_projection(std::span<const Step> path, Alphabet a) {
  std::vector<Label> out;
  for (const Step& st : path) {
    const bool keep = (a != Alphabet::Actions && is_coin(st.label)) ||
                      (a != Alphabet::Coins && is_action(st.label));
    if (keep) out.push_back(st.label);
  }
  return out;
}

std::string word_string(std::span<const Label> w) {
  bool coins = true;
  for (Label l : w) coins = coins && is_coin(l);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!coins && i) out += " ";
    out += to_string(w[i]);
  }
  return out;
}

std::string coin_word(std::span<const Step> path) {
  std::string out;
  for (const Step& st : path) {
    if (st.label == Label::Coin0) out += '0';
    if (st.label == Label::Coin1) out += '1';
  }
  return out;
}

NodeId tau_closure(const StateSpace& s, NodeId n) {
  for (std::size_t steps = 0; s.kind(n) == NodeKind::Deterministic; ++steps) {
    if (steps > s.size()) return kNoNode;
    n = s.successors(n).front().target;
  }
  return n;
}

EndsUpIn ends_up_in(const StateSpace& s, NodeId from, std::string_view w) {
  EndsUpIn r;
  NodeId cur = from;
  std::size_t i = 0;
  while (true) {
    cur = tau_closure(s, cur);
    if (cur == kNoNode) {
      r.kind = EndsUpIn::Kind::Undefined;
      r.consumed = i;
      return r;
    }
    if (s.kind(cur) == NodeKind::Action)
      throw InvalidArgument("ends_up_in requires a space without action nodes");
    if (s.kind(cur) == NodeKind::Terminal) {
      r.kind = i < w.size() ? EndsUpIn::Kind::TerminatedEarly : EndsUpIn::Kind::Node;
      r.node = cur;
      r.consumed = i;
      return r;
    }
    if (i == w.size()) {
      r.kind = EndsUpIn::Kind::Node;
      r.node = cur;
      r.consumed = i;
      return r;
    }
    const Label want = w[i] == '0' ? Label::Coin0 : Label::Coin1;
    if (w[i] != '0' && w[i] != '1') throw InvalidArgument("coin words use only 0 and 1");
    for (const Transition& t : s.successors(cur))
      if (t.label == want) cur = t.target;
    ++i;
  }
}

}  // namespace asterm
