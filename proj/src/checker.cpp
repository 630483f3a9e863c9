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

#include "asterm/checker.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "asterm/error.hpp"

namespace asterm {

std::uint32_t WordAutomaton::add_state(bool accept) {
  arcs.emplace_back();
  accepting.push_back(accept ? 1 : 0);
  return static_cast<std::uint32_t>(arcs.size() - 1);
}

void WordAutomaton::add_arc(std::uint32_t from, std::uint32_t to, std::uint8_t labels) {
  arcs.at(from).push_back({to, labels});
}

namespace {

std::uint8_t letter_bit(char c) {
  if (c == '0') return label_bit(Label::Coin0);
  if (c == '1') return label_bit(Label::Coin1);
  throw InvalidArgument(std::string("coin words use only 0 and 1, got '") + c + "'");
}

}  // namespace

WordAutomaton simple_automaton(std::string_view w) {
  return sequence_automaton({std::string(w)}, Tail::Repeat);
}

WordAutomaton sequence_automaton(const std::vector<std::string>& words, Tail tail) {
  if (words.empty()) throw InvalidArgument("sequence pattern needs at least one word");
  for (const std::string& w : words)
    if (w.empty()) throw InvalidArgument("sequence pattern words must be nonempty");
  // Layout per block: idle state, then |w|-1 matching states; the accepting
  // state comes last so that a single word yields exactly A(w).
  WordAutomaton a;
  std::vector<std::uint32_t> idle;
  std::uint32_t current = a.add_state();
  a.initial = current;
  for (std::size_t j = 0; j < words.size(); ++j) {
    idle.push_back(current);
    a.add_arc(current, current, kAllLabels);
    const std::string& w = words[j];
    // Create the matching states of this block first, then the target.
    std::vector<std::uint32_t> mids;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) mids.push_back(a.add_state());
    const bool last_block = j + 1 == words.size();
    const std::uint32_t done = a.add_state(last_block);
    std::uint32_t at = current;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::uint32_t to = i + 1 < w.size() ? mids[i] : done;
      a.add_arc(at, to, letter_bit(w[i]));
      at = to;
    }
    for (std::uint32_t m : mids) a.add_arc(m, m, kTauAndActions);
    current = done;
  }
  if (tail == Tail::Repeat)
    a.add_arc(current, idle.back(), kAllLabels);
  else
    a.add_arc(current, current, kAllLabels);
  return a;
}

WordAutomaton response_automaton(const Response& r) {
  WordAutomaton a;
  const std::uint32_t idle = a.add_state();
  a.add_arc(idle, idle, kAllLabels);
  const std::uint32_t sink = a.add_state(true);
  a.add_arc(sink, sink, kAllLabels);
  if (r.n == 0) {
    a.initial = sink;
    return a;
  }
  a.initial = idle;
  // Trie keyed by (state, label); arcs are added in word order.
  std::map<std::pair<std::uint32_t, Label>, std::uint32_t> child;
  for (const auto& w : r.words) {
    std::uint32_t at = idle;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool last = i + 1 == w.size();
      auto key = std::make_pair(at, w[i]);
      auto it = child.find(key);
      if (it != child.end()) {
        at = it->second;
        continue;
      }
      std::uint32_t to = sink;
      if (!last) {
        to = a.add_state();
        a.add_arc(to, to, label_bit(Label::Tau));
      }
      a.add_arc(at, to, label_bit(w[i]));
      child.emplace(key, to);
      at = to;
    }
  }
  return a;
}

namespace {

// Visited flags per product state; flat when small, hashed otherwise.
class Flags {
 public:
  Flags(std::size_t nodes, std::size_t states) : width_(states) {
    const std::uint64_t total = static_cast<std::uint64_t>(nodes) * states;
    if (total <= (1ull << 27)) flat_.assign(total, 0);
  }
  std::uint8_t get(std::uint64_t id) const {
    if (id < flat_.size()) return flat_[id];
    auto it = hashed_.find(id);
    return it == hashed_.end() ? 0 : it->second;
  }
  void set(std::uint64_t id, std::uint8_t bits) {
    if (id < flat_.size())
      flat_[id] |= bits;
    else
      hashed_[id] |= bits;
  }
  void clear(std::uint64_t id, std::uint8_t bits) {
    if (id < flat_.size())
      flat_[id] &= static_cast<std::uint8_t>(~bits);
    else
      hashed_[id] &= static_cast<std::uint8_t>(~bits);
  }
  std::uint64_t id(NodeId n, std::uint32_t a) const {
    return static_cast<std::uint64_t>(n) * width_ + a;
  }

 private:
  std::size_t width_;
  std::vector<std::uint8_t> flat_;
  std::unordered_map<std::uint64_t, std::uint8_t> hashed_;
};

constexpr std::uint8_t kOuter = 1;
constexpr std::uint8_t kInner = 2;
constexpr std::uint8_t kOnStack = 4;

struct Frame {
  NodeId node;
  std::uint32_t state;
  Label via;          // label of the step into this frame
  std::uint32_t t = 0;  // next transition index
  std::uint32_t arc = 0;
};

struct ProductSucc {
  NodeId node;
  std::uint32_t state;
  Label label;
};

// Advances the frame's cursor to its next product successor.
bool next_succ(const StateSpace& s, const WordAutomaton& a, Frame& f, ProductSucc& out) {
  const auto succ = s.successors(f.node);
  const auto& arcs = a.arcs[f.state];
  while (f.t < succ.size()) {
    const Transition& tr = succ[f.t];
    if (s.is_terminal(tr.target)) {
      ++f.t;
      f.arc = 0;
      continue;
    }
    while (f.arc < arcs.size()) {
      const auto& arc = arcs[f.arc++];
      if (arc.labels & label_bit(tr.label)) {
        out = {tr.target, arc.to, tr.label};
        return true;
      }
    }
    ++f.t;
    f.arc = 0;
  }
  return false;
}

Lasso make_lasso(const std::vector<Frame>& stack, std::size_t j,
                 const std::vector<Frame>& inner, Label closing) {
  Lasso l;
  for (std::size_t i = 1; i <= j; ++i)
    l.prefix.push_back({stack[i - 1].node, stack[i].via, stack[i].node});
  for (std::size_t i = j + 1; i < stack.size(); ++i)
    l.loop.push_back({stack[i - 1].node, stack[i].via, stack[i].node});
  for (std::size_t i = 1; i < inner.size(); ++i)
    l.loop.push_back({inner[i - 1].node, inner[i].via, inner[i].node});
  const NodeId last = inner.empty() ? stack.back().node : inner.back().node;
  l.loop.push_back({last, closing, stack[j].node});
  l.coinword = coin_word(l.loop);
  return l;
}

}  // namespace

std::optional<Lasso> find_accepting_lasso(const StateSpace& s, const WordAutomaton& a,
                                          const CheckOptions& opts, std::size_t* explored) {
  Flags flags(s.size(), a.size());
  std::size_t visited = 0;
  std::vector<Frame> stack;
  std::vector<Frame> inner;
  std::unordered_map<std::uint64_t, std::size_t> depth;  // on-stack position

  auto push_outer = [&](NodeId n, std::uint32_t st, Label via) {
    const std::uint64_t id = flags.id(n, st);
    flags.set(id, kOuter | kOnStack);
    depth[id] = stack.size();
    stack.push_back({n, st, via});
    if (++visited > opts.product_cap)
      throw ResourceError("product exceeds the budget of " + std::to_string(opts.product_cap) +
                          " states");
  };

  // Inner search from the seed on top of the outer stack; succeeds when it
  // reaches any state on the outer stack.
  auto inner_search = [&]() -> std::optional<Lasso> {
    inner.clear();
    Frame seed = stack.back();
    seed.t = 0;
    seed.arc = 0;
    inner.push_back(seed);
    ProductSucc nx;
    while (!inner.empty()) {
      Frame& f = inner.back();
      if (!next_succ(s, a, f, nx)) {
        inner.pop_back();
        continue;
      }
      const std::uint64_t id = flags.id(nx.node, nx.state);
      const std::uint8_t fl = flags.get(id);
      if (fl & kOnStack) return make_lasso(stack, depth.at(id), inner, nx.label);
      if (fl & kInner) continue;
      flags.set(id, kInner);
      inner.push_back({nx.node, nx.state, nx.label});
    }
    return std::nullopt;
  };

  ProductSucc nx;
  for (NodeId root : s.init()) {
    if (s.is_terminal(root)) continue;
    if (flags.get(flags.id(root, a.initial)) & kOuter) continue;
    push_outer(root, a.initial, Label::Tau);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (next_succ(s, a, f, nx)) {
        if (!(flags.get(flags.id(nx.node, nx.state)) & kOuter))
          push_outer(nx.node, nx.state, nx.label);
        continue;
      }
      if (a.accepting[f.state]) {
        if (auto l = inner_search()) {
          if (explored) *explored = visited;
          return l;
        }
      }
      const std::uint64_t id = flags.id(stack.back().node, stack.back().state);
      flags.clear(id, kOnStack);
      depth.erase(id);
      stack.pop_back();
    }
  }
  if (explored) *explored = visited;
  return std::nullopt;
}

namespace {

// Depth-first search in canonical order over transitions accepted by
// `allowed`, stopping at the first back edge.
std::optional<Lasso> first_back_edge(const StateSpace& s, const std::vector<NodeId>& roots,
                                     const std::vector<Step>* parent,
                                     const std::vector<char>* is_root,
                                     bool (*allowed)(Label)) {
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> colour(s.size(), White);
  struct F {
    NodeId node;
    Label via;
    std::uint32_t t;
  };
  std::vector<F> stack;
  std::vector<std::uint32_t> pos(s.size(), 0);
  for (NodeId root : roots) {
    if (colour[root] != White || s.is_terminal(root)) continue;
    stack.push_back({root, Label::Tau, 0});
    colour[root] = Grey;
    pos[root] = 0;
    while (!stack.empty()) {
      F& f = stack.back();
      const auto succ = s.successors(f.node);
      if (f.t == succ.size()) {
        colour[f.node] = Black;
        stack.pop_back();
        continue;
      }
      const Transition& tr = succ[f.t++];
      if (s.is_terminal(tr.target) || !allowed(tr.label)) continue;
      if (colour[tr.target] == Grey) {
        const std::size_t j = pos[tr.target];
        Lasso l;
        // Prefix: path to the root (if it is not initial) then the stack.
        if (parent) {
          std::vector<Step> up;
          for (NodeId at = stack.front().node; !(*is_root)[at];) {
            up.push_back((*parent)[at]);
            at = (*parent)[at].from;
          }
          l.prefix.assign(up.rbegin(), up.rend());
        }
        for (std::size_t i = 1; i <= j; ++i)
          l.prefix.push_back({stack[i - 1].node, stack[i].via, stack[i].node});
        for (std::size_t i = j + 1; i < stack.size(); ++i)
          l.loop.push_back({stack[i - 1].node, stack[i].via, stack[i].node});
        l.loop.push_back({stack.back().node, tr.label, tr.target});
        l.coinword = coin_word(l.loop);
        return l;
      }
      if (colour[tr.target] == White) {
        colour[tr.target] = Grey;
        pos[tr.target] = static_cast<std::uint32_t>(stack.size());
        stack.push_back({tr.target, tr.label, 0});
      }
    }
  }
  return std::nullopt;
}

bool any_label(Label) { return true; }
bool non_coin(Label l) { return !is_coin(l); }

}  // namespace

std::optional<Lasso> find_any_cycle(const StateSpace& s) {
  return first_back_edge(s, s.init(), nullptr, nullptr, any_label);
}

std::optional<Lasso> check_coinless_nontermination(const StateSpace& s) {
  // Reachable nodes in breadth-first order, with parents for the prefix.
  std::vector<Step> parent(s.size());
  std::vector<char> seen(s.size(), 0);
  std::vector<char> root(s.size(), 0);
  std::vector<NodeId> order;
  std::deque<NodeId> queue;
  for (NodeId i : s.init())
    if (!seen[i]) {
      seen[i] = root[i] = 1;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    if (s.is_terminal(n)) continue;
    order.push_back(n);
    for (const Transition& t : s.successors(n))
      if (!seen[t.target]) {
        seen[t.target] = 1;
        parent[t.target] = {n, t.label, t.target};
        queue.push_back(t.target);
      }
  }
  return first_back_edge(s, order, &parent, &root, non_coin);
}

namespace {

CheckVerdict verdict_of(std::optional<Lasso> l, std::size_t explored) {
  CheckVerdict v;
  v.product_states = explored;
  if (!l) return v;
  v.kind = l->coinword.empty() ? CheckVerdict::Kind::NotAsTerminating : CheckVerdict::Kind::Lasso;
  v.lasso = std::move(*l);
  return v;
}

}  // namespace

CheckVerdict check_simple_pattern(const StateSpace& s, std::string_view w,
                                  const CheckOptions& opts) {
  if (w.empty()) return verdict_of(find_any_cycle(s), s.size());
  std::size_t explored = 0;
  auto l = find_accepting_lasso(s, simple_automaton(w), opts, &explored);
  return verdict_of(std::move(l), explored);
}

CheckVerdict check_sequence_pattern(const StateSpace& s, const std::vector<std::string>& words,
                                    Tail tail, const CheckOptions& opts) {
  if (words.empty()) return verdict_of(find_any_cycle(s), s.size());
  std::size_t explored = 0;
  auto l = find_accepting_lasso(s, sequence_automaton(words, tail), opts, &explored);
  return verdict_of(std::move(l), explored);
}

CheckVerdict check_response_pattern(const StateSpace& s, const Response& r,
                                    const CheckOptions& opts) {
  const std::string why = validate(r);
  if (!why.empty()) throw InvalidArgument("invalid response: " + why);
  std::size_t explored = 0;
  auto l = find_accepting_lasso(s, response_automaton(r), opts, &explored);
  return verdict_of(std::move(l), explored);
}

}  // namespace asterm
