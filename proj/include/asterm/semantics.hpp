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
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asterm/expr.hpp"
#include "asterm/program.hpp"

namespace asterm {

/// Transition labels in their canonical order.
enum class Label : std::uint8_t { Tau, Coin0, Coin1, Act0, Act1 };

enum class NodeKind : std::uint8_t { Deterministic, Coin, Action, Terminal };

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct Transition {
  Label label = Label::Tau;
  NodeId target = 0;
  Rational prob = Rational::one();
  int edge = -1;  // program edge, -1 for the terminal self-loop
};

/// Values for (some of) the parameters.
using Instance = std::map<std::string, std::int64_t>;

struct BuildOptions {
  std::size_t node_cap = 10'000'000;
};

/// Explicit reachable part of the MDP of one program instance. Nodes are
/// interned by (location, valuation); the terminal node has no valuation.
class StateSpace {
 public:
  const Program& program() const { return *program_; }
  std::shared_ptr<const Program> program_ptr() const { return program_; }
  const Instance& instance() const { return instance_; }

  std::size_t size() const { return kind_.size(); }
  std::size_t transition_count() const { return trans_.size(); }
  const std::vector<NodeId>& init() const { return init_; }

  NodeKind kind(NodeId n) const { return kind_[n]; }
  bool is_terminal(NodeId n) const { return kind_[n] == NodeKind::Terminal; }
  NodeId terminal() const { return terminal_; }  // kNoNode if unreachable

  int location(NodeId n) const { return loc_[n]; }
  Valuation valuation(NodeId n) const;
  std::span<const Transition> successors(NodeId n) const {
    return {trans_.data() + first_[n], trans_.data() + first_[n + 1]};
  }

  /// `loc{x=1,y=0}`, or `top` for the terminal node.
  std::string node_name(NodeId n) const;

  /// Node with the given location and full valuation, if reachable.
  std::optional<NodeId> find(int location, std::span<const std::int64_t> vals) const;

  bool has_action_nodes() const;

 private:
  friend StateSpace build(std::shared_ptr<const Program>, const Instance&, const BuildOptions&);

  std::shared_ptr<const Program> program_;
  Instance instance_;
  std::size_t width_ = 0;
  std::vector<int> loc_;
  std::vector<std::int64_t> vals_;
  std::vector<NodeKind> kind_;
  std::vector<std::uint32_t> first_{0};
  std::vector<Transition> trans_;
  std::vector<NodeId> init_;
  NodeId terminal_ = kNoNode;
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept;
  };
  std::unordered_map<std::vector<std::int64_t>, NodeId, KeyHash> index_;
};

/// Builds the reachable state space. Parameters without an upper bound must
/// be fixed by `instance`; bounded ones not fixed there range over their
/// declared interval, one initial node each. Throws ModelingError when a
/// reachable assignment leaves its range or a conditional location does not
/// enable exactly one guard, ResourceError past `node_cap`, and
/// InvalidArgument for a bad instance.
StateSpace build(std::shared_ptr<const Program> prog, const Instance& instance = {},
                 const BuildOptions& opts = {});

std::string to_string(Label l);
bool is_coin(Label l);
bool is_action(Label l);

struct Step {
  NodeId from = 0;
  Label label = Label::Tau;
  NodeId to = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Lasso {
  std::vector<Step> prefix;
  std::vector<Step> loop;
  std::string coinword;
};

/// Re-executes the lasso: the prefix starts in an initial node, every step is
/// a transition of the space, the loop closes on its first node and the
/// coin word is the loop's coin projection.
bool replays(const StateSpace& s, const Lasso& l);

std::string format_steps(const StateSpace& s, std::span<const Step> steps);
std::string format_lasso(const StateSpace& s, const Lasso& l);

/// One line per transition: `SRC LABEL [P/Q] DST`, nodes in id order.
std::string dump(const StateSpace& s);

enum class Alphabet { Coins, Actions, All };

std::vector<Label> trace_projection(std::span<const Step> path, Alphabet a);

/// `01` for coin words; otherwise space-separated tokens such as `a0 1`.
std::string word_string(std::span<const Label> w);
std::string coin_word(std::span<const Step> path);

struct EndsUpIn {
  enum class Kind { Node, TerminatedEarly, Undefined };
  Kind kind = Kind::Undefined;
  NodeId node = kNoNode;
  std::size_t consumed = 0;
};

/// Follows tau-steps and then each letter of `w`, closing under tau at the
/// end. Requires a space without action nodes.
EndsUpIn ends_up_in(const StateSpace& s, NodeId from, std::string_view w);

/// Follows tau transitions from `n` until a coin, action or terminal node;
/// kNoNode when a tau-cycle is entered.
NodeId tau_closure(const StateSpace& s, NodeId n);

}  // namespace asterm
