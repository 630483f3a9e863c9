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

#include "asterm/responses.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "asterm/error.hpp"

namespace asterm {

Response Response::empty() {
  Response r;
  r.n = 0;
  r.words.push_back({});
  return r;
}

namespace {

std::vector<Label> action_projection(const std::vector<Label>& w) {
  std::vector<Label> out;
  for (Label l : w)
    if (is_action(l)) out.push_back(l);
  return out;
}

void sort_words(std::vector<std::vector<Label>>& words) {
  std::sort(words.begin(), words.end(), [](const auto& x, const auto& y) {
    const auto ax = action_projection(x);
    const auto ay = action_projection(y);
    if (ax != ay) return ax < ay;
    return x < y;
  });
}

}  // namespace

std::string validate(const Response& r) {
  if (r.n >= 63) return "length too large";
  if (r.words.size() != (std::size_t{1} << r.n))
    return "expected " + std::to_string(std::size_t{1} << r.n) + " words, got " +
           std::to_string(r.words.size());
  std::set<std::vector<Label>> seen;
  for (const auto& w : r.words) {
    if (w.size() != 2 * r.n) return "word of length " + std::to_string(w.size()) +
                                    ", expected " + std::to_string(2 * r.n);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool ok = i % 2 == 0 ? is_action(w[i]) : is_coin(w[i]);
      if (!ok) return "word does not alternate action and coin letters";
    }
    if (!seen.insert(action_projection(w)).second) return "two words share an action projection";
  }
  return {};
}

bool is_valid(const Response& r) { return validate(r).empty(); }

Response compose(const Response& a, const Response& b) {
  Response r;
  r.n = a.n + b.n;
  for (const auto& u : a.words)
    for (const auto& v : b.words) {
      std::vector<Label> w(u);
      w.insert(w.end(), v.begin(), v.end());
      r.words.push_back(std::move(w));
    }
  sort_words(r.words);
  return r;
}

std::string serialize(const Response& r) {
  std::string out;
  for (const auto& w : r.words) out += (out.empty() ? "" : "; ") + (w.empty() ? "ε" : word_string(w));
  return out;
}

Response parse_response(std::string_view text) {
  Response r;
  std::string flat(text);
  for (char& c : flat)
    if (c == ';') c = '\n';
  std::istringstream in{flat};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<Label> w;
    std::string tok;
    bool any = false;
    while (ls >> tok) {
      any = true;
      if (tok == "ε") continue;
      if (tok == "a0") w.push_back(Label::Act0);
      else if (tok == "a1") w.push_back(Label::Act1);
      else if (tok == "0") w.push_back(Label::Coin0);
      else if (tok == "1") w.push_back(Label::Coin1);
      else throw InvalidArgument("unknown response letter '" + tok + "'");
    }
    if (!any) continue;
    if (first) r.n = w.size() / 2;
    first = false;
    r.words.push_back(std::move(w));
  }
  const std::string why = validate(r);
  if (!why.empty()) throw InvalidArgument("invalid response: " + why);
  return r;
}

std::shared_ptr<const Program> normalize(const Program& src) {
  enum Phase : std::uint8_t { Unset, A, C };
  Program p = src;
  int pad = -1;
  int counter = 0;
  auto pad_slot = [&] {
    if (pad < 0) {
      Symbol s;
      s.name = kPadVariable;
      s.kind = SymbolKind::Var;
      s.lo = 0;
      s.hi = 1;
      s.init = 0;
      p.symbols.push_back(s);
      pad = static_cast<int>(p.symbols.size()) - 1;
    }
    return pad;
  };
  auto dummy = [&](Phase from) {
    // A dummy nondet moves A to C, a dummy coin moves C to A.
    return from == A ? Command::nondet(pad_slot()) : Command::coin(pad_slot(), Rational{1, 2});
  };
  // Splits edge `id` so that `cmd` runs on a fresh location before `to`.
  auto split_after = [&](int id, Command cmd) {
    const int m = p.add_location("pad" + std::to_string(++counter));
    const int to = p.edges[id].to;
    p.edges[id].to = m;
    p.edges.push_back({m, to, std::move(cmd)});
  };

  const std::size_t original = src.locations.size();
  std::vector<Phase> phase(original, Unset);
  std::deque<int> queue{src.start};
  phase[src.start] = A;
  while (!queue.empty()) {
    const int l = queue.front();
    queue.pop_front();
    if (l == src.end) continue;
    Phase ph = phase[l];
    const std::vector<int> ids = src.outgoing(l);
    std::vector<int> entering(ids.begin(), ids.end());  // edge that reaches the target
    const Command::Kind k = src.edges[ids.front()].cmd.kind;
    if (k == Command::Kind::Coin || k == Command::Kind::Nondet) {
      const Phase need = k == Command::Kind::Coin ? C : A;
      if (ph != need) {
        // The command moves to a fresh location behind a dummy.
        const int id = ids.front();
        const int m = p.add_location("pad" + std::to_string(++counter));
        p.edges.push_back({m, p.edges[id].to, p.edges[id].cmd});
        p.edges[id].to = m;
        p.edges[id].cmd = dummy(ph);
        entering[0] = static_cast<int>(p.edges.size()) - 1;
      }
      ph = k == Command::Kind::Coin ? A : C;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const int t = src.edges[ids[i]].to;
      if (t == src.end) continue;
      if (phase[t] == Unset) {
        phase[t] = ph;
        queue.push_back(t);
      } else if (phase[t] != ph) {
        split_after(entering[i], dummy(ph));
      }
    }
  }
  if (pad < 0) return std::make_shared<Program>(src);
  p.reindex();
  validate(p);
  return std::make_shared<Program>(std::move(p));
}

bool is_normal_form(const StateSpace& s) {
  enum Phase : std::uint8_t { Unset, A, C };
  std::vector<Phase> phase(s.size(), Unset);
  std::deque<NodeId> queue;
  for (NodeId i : s.init()) {
    phase[i] = A;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const NodeId q = queue.front();
    queue.pop_front();
    if (s.is_terminal(q)) continue;
    Phase out = phase[q];
    if (s.kind(q) == NodeKind::Action) {
      if (phase[q] != A) return false;
      out = C;
    } else if (s.kind(q) == NodeKind::Coin) {
      if (phase[q] != C) return false;
      out = A;
    }
    for (const Transition& t : s.successors(q)) {
      if (s.is_terminal(t.target)) continue;
      if (phase[t.target] == Unset) {
        phase[t.target] = out;
        queue.push_back(t.target);
      } else if (phase[t.target] != out) {
        return false;
      }
    }
  }
  return true;
}

namespace {

constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

struct Game {
  const StateSpace& s;
  std::vector<NodeId> actions;
  std::vector<std::size_t> rank;  // per node id; 0 for the end

  NodeId follow(NodeId q, Label l) const {
    for (const Transition& t : s.successors(q))
      if (t.label == l) return tau_closure(s, t.target);
    return kNoNode;
  }

  // Action node (or end) reached after action `a` and coin `c`.
  NodeId step(NodeId q, int a, int c) const {
    if (s.is_terminal(q)) return q;
    const NodeId p = follow(q, a ? Label::Act1 : Label::Act0);
    if (p == kNoNode || s.is_terminal(p)) return p;
    return follow(p, c ? Label::Coin1 : Label::Coin0);
  }

  std::size_t rank_of(NodeId q) const { return q == kNoNode ? kUnranked : rank[q]; }

  // Coin reply that minimises the successor rank, ties to 0.
  int reply(NodeId q, int a) const {
    if (s.is_terminal(q)) return 0;
    const NodeId p = follow(q, a ? Label::Act1 : Label::Act0);
    if (p == kNoNode || s.is_terminal(p)) return 0;
    return rank_of(step(q, a, 1)) < rank_of(step(q, a, 0)) ? 1 : 0;
  }
};

using Word = std::vector<Label>;

void responses_from(const Game& g, NodeId q, std::size_t k, Word& prefix, std::vector<Word>& out) {
  if (k == 0) {
    out.push_back(prefix);
    return;
  }
  for (int a = 0; a < 2; ++a) {
    const int c = g.reply(q, a);
    prefix.push_back(a ? Label::Act1 : Label::Act0);
    prefix.push_back(c ? Label::Coin1 : Label::Coin0);
    responses_from(g, g.step(q, a, c), k - 1, prefix, out);
    prefix.resize(prefix.size() - 2);
  }
}

}  // namespace

ResponseResult construct_response(const StateSpace& s, const ResponseOptions& opts) {
  if (!is_normal_form(s)) throw InvalidArgument("construct_response needs a normal-form space");
  ResponseResult res;
  Game g{s, {}, std::vector<std::size_t>(s.size(), kUnranked)};
  for (NodeId q = 0; q < s.size(); ++q)
    if (s.kind(q) == NodeKind::Action) g.actions.push_back(q);
  res.action_nodes = g.actions.size();
  if (s.terminal() != kNoNode) g.rank[s.terminal()] = 0;

  // Value iteration of the reachability game: we pick coins, the
  // adversary picks actions.
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId q : g.actions) {
      std::size_t worst = 0;
      for (int a = 0; a < 2 && worst != kUnranked; ++a) {
        const std::size_t best = std::min(g.rank_of(g.step(q, a, 0)), g.rank_of(g.step(q, a, 1)));
        worst = std::max(worst, best);
      }
      if (worst != kUnranked && worst + 1 < g.rank[q]) {
        g.rank[q] = worst + 1;
        changed = true;
      }
    }
  }
  for (NodeId q : g.actions) res.ranks.push_back(g.rank[q]);
  for (NodeId q : g.actions)
    if (g.rank[q] == kUnranked) {
      res.counterexample = as_terminating_mdp(s);
      res.message = "the adversary keeps " + s.node_name(q) + " away from the end";
      return res;
    }
  for (NodeId i : s.init())
    if (tau_closure(s, i) == kNoNode) {
      res.counterexample = as_terminating_mdp(s);
      res.message = "an initial node enters a tau-cycle";
      return res;
    }

  // One token per action node; every word is extended by the response of
  // the first token not yet at the end.
  struct Entry {
    Word word;
    std::vector<NodeId> tokens;
  };
  std::vector<Word> done;
  std::vector<Entry> work;
  work.push_back({{}, g.actions});
  while (!work.empty()) {
    Entry e = std::move(work.back());
    work.pop_back();
    NodeId q = kNoNode;
    for (NodeId t : e.tokens)
      if (!s.is_terminal(t)) {
        q = t;
        break;
      }
    if (q == kNoNode) {
      done.push_back(std::move(e.word));
      continue;
    }
    std::vector<Word> replies;
    Word scratch;
    responses_from(g, q, g.rank[q], scratch, replies);
    if ((e.word.size() + 2 * g.rank[q]) / 2 > opts.max_length)
      throw ResourceError("response longer than " + std::to_string(opts.max_length));
    for (auto it = replies.rbegin(); it != replies.rend(); ++it) {
      Entry x;
      x.word = e.word;
      x.word.insert(x.word.end(), it->begin(), it->end());
      x.tokens = e.tokens;
      for (NodeId& t : x.tokens)
        for (std::size_t i = 0; i < it->size() && !s.is_terminal(t); i += 2)
          t = g.step(t, (*it)[i] == Label::Act1, (*it)[i + 1] == Label::Coin1);
      work.push_back(std::move(x));
    }
  }

  std::size_t n = 0;
  for (const Word& w : done) n = std::max(n, w.size() / 2);
  Response r;
  r.n = n;
  for (const Word& w : done) {
    // Pad with every action sequence and zero coins.
    const std::size_t extra = n - w.size() / 2;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << extra); ++bits) {
      Word x = w;
      for (std::size_t k = 0; k < extra; ++k) {
        x.push_back((bits >> (extra - 1 - k)) & 1 ? Label::Act1 : Label::Act0);
        x.push_back(Label::Coin0);
      }
      r.words.push_back(std::move(x));
    }
  }
  sort_words(r.words);
  const std::string why = validate(r);
  if (!why.empty()) throw std::logic_error("constructed response is invalid: " + why);
  res.ok = true;
  res.response = std::move(r);
  return res;
}

}  // namespace asterm
