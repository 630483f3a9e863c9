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

#include "asterm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <thread>

#include "asterm/error.hpp"

namespace asterm {

namespace {

struct Pred {
  NodeId node;
  std::uint32_t index;  // position in successors(node)
};

std::vector<std::vector<Pred>> predecessors(const StateSpace& s) {
  std::vector<std::vector<Pred>> pred(s.size());
  for (NodeId n = 0; n < s.size(); ++n) {
    const auto succ = s.successors(n);
    for (std::uint32_t i = 0; i < succ.size(); ++i) pred[succ[i].target].push_back({n, i});
  }
  return pred;
}

std::vector<char> can_reach_terminal(const StateSpace& s,
                                     const std::vector<std::vector<Pred>>& pred) {
  std::vector<char> good(s.size(), 0);
  if (s.terminal() == kNoNode) return good;
  std::deque<NodeId> queue{s.terminal()};
  good[s.terminal()] = 1;
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    for (const Pred& p : pred[n])
      if (!good[p.node]) {
        good[p.node] = 1;
        queue.push_back(p.node);
      }
  }
  return good;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform value in [0, bound) without modulo bias.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace

DeterministicVerdict as_terminating_deterministic(const StateSpace& s) {
  if (s.has_action_nodes())
    throw InvalidArgument("deterministic oracle applied to a space with action nodes");
  const auto pred = predecessors(s);
  const auto good = can_reach_terminal(s, pred);
  DeterministicVerdict v;
  std::vector<Step> parent(s.size());
  std::vector<char> seen(s.size(), 0);
  std::vector<char> root(s.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId i : s.init()) {
    seen[i] = root[i] = 1;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    if (!good[n]) {
      v.terminating = false;
      v.stuck = n;
      for (NodeId at = n; !root[at];) {
        v.path.push_back(parent[at]);
        at = parent[at].from;
      }
      std::reverse(v.path.begin(), v.path.end());
      return v;
    }
    for (const Transition& t : s.successors(n))
      if (!seen[t.target]) {
        seen[t.target] = 1;
        parent[t.target] = {n, t.label, t.target};
        queue.push_back(t.target);
      }
  }
  return v;
}

MdpVerdict as_terminating_mdp(const StateSpace& s) {
  const auto pred = predecessors(s);
  const std::size_t n = s.size();

  // attr: the end is reached with positive probability whatever the
  // adversary does.
  std::vector<char> attr(n, 0);
  std::vector<std::uint32_t> missing(n, 0);
  for (NodeId q = 0; q < n; ++q) missing[q] = static_cast<std::uint32_t>(s.successors(q).size());
  std::deque<NodeId> queue;
  if (s.terminal() != kNoNode) {
    attr[s.terminal()] = 1;
    queue.push_back(s.terminal());
  }
  while (!queue.empty()) {
    const NodeId q = queue.front();
    queue.pop_front();
    for (const Pred& p : pred[q]) {
      if (attr[p.node]) continue;
      if (s.kind(p.node) == NodeKind::Action && --missing[p.node] > 0) continue;
      attr[p.node] = 1;
      queue.push_back(p.node);
    }
  }

  // Nodes from which the adversary reaches the complement of attr with
  // positive probability; dist counts steps towards it.
  std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint32_t> via(n, 0);
  for (NodeId q = 0; q < n; ++q)
    if (!attr[q]) {
      dist[q] = 0;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    const NodeId q = queue.front();
    queue.pop_front();
    for (const Pred& p : pred[q])
      if (dist[p.node] == std::numeric_limits<std::uint32_t>::max()) {
        dist[p.node] = dist[q] + 1;
        via[p.node] = p.index;
        queue.push_back(p.node);
      }
  }

  MdpVerdict v;
  NodeId entry = kNoNode;
  for (NodeId i : s.init())
    if (dist[i] != std::numeric_limits<std::uint32_t>::max()) {
      entry = i;
      break;
    }
  if (entry == kNoNode) return v;

  v.terminating = false;
  for (NodeId q = 0; q < n; ++q) {
    if (dist[q] == std::numeric_limits<std::uint32_t>::max()) continue;
    if (dist[q] == 0) v.trap.push_back(q);
    if (s.kind(q) != NodeKind::Action) continue;
    const auto succ = s.successors(q);
    if (dist[q] > 0) {
      v.strategy[q] = succ[via[q]].label;
    } else {
      for (const Transition& t : succ)
        if (!attr[t.target]) {
          v.strategy[q] = t.label;
          break;
        }
    }
  }
  for (NodeId q = entry; dist[q] > 0;) {
    const Transition& t = s.successors(q)[via[q]];
    v.path.push_back({q, t.label, t.target});
    q = t.target;
  }
  return v;
}

double Estimate::terminated_fraction() const {
  return samples ? static_cast<double>(terminated) / static_cast<double>(samples) : 0.0;
}

double Estimate::capped_fraction() const {
  return samples ? static_cast<double>(capped) / static_cast<double>(samples) : 0.0;
}

Estimate monte_carlo(const StateSpace& s, std::uint64_t samples, std::uint64_t step_cap,
                     std::uint64_t seed, const Strategy* strategy, unsigned jobs) {
  constexpr std::uint64_t kBatch = 1000;
  const auto pred = predecessors(s);
  const auto good = can_reach_terminal(s, pred);
  const std::uint64_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<std::uint64_t> terminated(batches, 0);

  auto run_batch = [&](std::uint64_t b) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
    const std::uint64_t lo = b * kBatch;
    const std::uint64_t hi = std::min(samples, lo + kBatch);
    std::uint64_t done = 0;
    for (std::uint64_t k = lo; k < hi; ++k) {
      NodeId q = s.init()[k % s.init().size()];
      for (std::uint64_t steps = 0; steps < step_cap; ++steps) {
        if (s.is_terminal(q)) break;
        // A node that cannot reach the end is certain to be capped.
        if (!good[q]) break;
        const auto succ = s.successors(q);
        switch (s.kind(q)) {
          case NodeKind::Coin: {
            const Rational& p0 = succ[0].prob;
            const bool zero = draw(rng, static_cast<std::uint64_t>(p0.den)) <
                              static_cast<std::uint64_t>(p0.num);
            q = succ[zero ? 0 : 1].target;
            break;
          }
          case NodeKind::Action: {
            Label want = Label::Act0;
            if (strategy) {
              auto it = strategy->find(q);
              if (it != strategy->end()) want = it->second;
            }
            q = succ[want == Label::Act0 ? 0 : 1].target;
            break;
          }
          default:
            q = succ[0].target;
        }
      }
      if (s.is_terminal(q)) ++done;
    }
    terminated[b] = done;
  };

  jobs = std::max(1u, jobs);
  if (jobs == 1 || batches < 2) {
    for (std::uint64_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::uint64_t b = j; b < batches; b += jobs) run_batch(b);
      });
    for (auto& t : pool) t.join();
  }

  Estimate e;
  e.samples = samples;
  for (std::uint64_t t : terminated) e.terminated += t;
  e.capped = samples - e.terminated;
  return e;
}

InfixEstimate coin_infix_statistics(std::string_view w, std::size_t L, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (w.empty() || L < w.size()) throw InvalidArgument("need 1 <= |w| <= L");
  if (samples == 0) throw InvalidArgument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::string word(L, '0');
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < L; i += 64) {
      std::uint64_t bits = rng();
      for (std::size_t j = i; j < std::min(L, i + 64); ++j, bits >>= 1)
        word[j] = (bits & 1) ? '1' : '0';
    }
    if (word.find(w) != std::string::npos) ++hits;
  }
  InfixEstimate e;
  e.p = static_cast<double>(hits) / static_cast<double>(samples);
  e.sigma = std::sqrt(e.p * (1 - e.p) / static_cast<double>(samples));
  return e;
}

double infix_lower_bound(std::size_t w_len, std::size_t L) {
  const double miss = 1.0 - std::ldexp(1.0, -static_cast<int>(w_len));
  return 1.0 - std::pow(miss, static_cast<double>(L / w_len));
}

}  // namespace asterm
