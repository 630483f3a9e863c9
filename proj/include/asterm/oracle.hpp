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
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "asterm/semantics.hpp"

namespace asterm {

struct DeterministicVerdict {
  bool terminating = true;
  NodeId stuck = kNoNode;   // reachable node that cannot reach the end
  std::vector<Step> path;   // from an initial node to `stuck`
};

/// Every reachable node can reach the terminal node. Requires no action nodes.
DeterministicVerdict as_terminating_deterministic(const StateSpace& s);

/// Positional resolution of action nodes.
using Strategy = std::map<NodeId, Label>;

struct MdpVerdict {
  bool terminating = true;
  Strategy strategy;        // adversary choices on action nodes
  std::vector<NodeId> trap; // closed under `strategy`, never reaches the end
  std::vector<Step> path;   // from an initial node into the trap under `strategy`
};

/// Almost-sure reachability of the terminal node under every strategy.
MdpVerdict as_terminating_mdp(const StateSpace& s);

struct Estimate {
  std::uint64_t samples = 0;
  std::uint64_t terminated = 0;
  std::uint64_t capped = 0;

  double terminated_fraction() const;
  double capped_fraction() const;
};

/// Samples runs from the initial nodes (round robin) for at most `step_cap`
/// steps each. Coins are drawn with exact integer rejection; action nodes use
/// `strategy`, defaulting to a0. Samples are split into fixed batches with
/// derived seeds, so the result does not depend on `jobs`.
Estimate monte_carlo(const StateSpace& s, std::uint64_t samples, std::uint64_t step_cap,
                     std::uint64_t seed, const Strategy* strategy = nullptr,
                     unsigned jobs = 1);

struct InfixEstimate {
  double p = 0;
  double sigma = 0;  // standard error of the estimate
};

/// Fraction of uniformly random words of length `L` containing `w`.
InfixEstimate coin_infix_statistics(std::string_view w, std::size_t L, std::uint64_t samples,
                                    std::uint64_t seed);

/// 1 - (1 - 2^-|w|)^floor(L/|w|): disjoint blocks alone already contain w
/// with this probability.
double infix_lower_bound(std::size_t w_len, std::size_t L);

}  // namespace asterm
