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
#include <optional>
#include <string>
#include <vector>

#include "asterm/checker.hpp"

namespace asterm {

// Exit codes shared by all commands.
inline constexpr int kExitProven = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

struct Report {
  int exit_code = kExitError;
  std::string text;
};

/// `N=a..b` or `N=a`.
struct InstanceRange {
  std::string param;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

InstanceRange parse_instance_range(const std::string& text);

struct CheckRequest {
  std::string file;
  std::vector<InstanceRange> instances;  // at most one may span several values
  std::string base_word;
  std::size_t rounds = 64;
  std::size_t node_cap = 10'000'000;
  bool oracle = false;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::optional<Tail> tail;
  std::string pattern;  // check this pattern instead of synthesizing one
};

struct InstrumentRequest {
  std::string file;
  std::string pattern;  // empty: plain nondeterministic export
  std::string index_param;
  std::optional<Tail> tail;
  std::string out;  // empty: document goes into the report text
};

struct SimulateRequest {
  std::string file;
  std::vector<InstanceRange> instances;  // single values only
  std::uint64_t samples = 10'000;
  std::uint64_t cap = 100'000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::size_t node_cap = 10'000'000;
};

struct DumpRequest {
  std::string file;
  std::vector<InstanceRange> instances;
  std::size_t node_cap = 10'000'000;
};

Report cmd_check(const CheckRequest& req);
Report cmd_instrument(const InstrumentRequest& req);
Report cmd_simulate(const SimulateRequest& req);
Report cmd_dump(const DumpRequest& req);

}  // namespace asterm
