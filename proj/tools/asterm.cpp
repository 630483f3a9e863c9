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

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asterm/asterm.h"

namespace {

int tail_code(const std::string& t) {
  if (t == "repeat") return ASTERM_TAIL_REPEAT;
  if (t == "free") return ASTERM_TAIL_FREE;
  return ASTERM_TAIL_DEFAULT;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const std::string& s : v) out.push_back(s.c_str());
  return out;
}

int finish(asterm_status st, asterm_report* r) {
  if (st != ASTERM_OK) {
    std::fprintf(stderr, "asterm: %s\n", asterm_last_error());
    return 3;
  }
  std::fputs(asterm_report_text(r), stdout);
  const int code = asterm_report_exit_code(r);
  asterm_report_free(r);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-sure termination prover for probabilistic programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(asterm_version()));

  std::string file;
  std::vector<std::string> instances;
  std::string base_word, pattern, tail, out, index;
  std::size_t rounds = 64, node_cap = 10'000'000;
  bool oracle = false;
  std::uint64_t seed = 1, samples = 10'000, cap = 100'000;
  unsigned jobs = 1;

  auto* check = app.add_subcommand("check", "prove or refute almost-sure termination");
  check->add_option("file", file, "program (.ppg)")->required();
  check->add_option("--instances", instances, "parameter values, NAME=LO..HI or NAME=V");
  check->add_option("--base-word", base_word, "coin word every candidate extends");
  check->add_option("--rounds", rounds, "refinement rounds per instance");
  check->add_option("--node-cap", node_cap, "state space node limit");
  check->add_flag("--oracle", oracle, "cross-check with the exact oracle");
  check->add_option("--seed", seed, "random seed");
  check->add_option("--jobs", jobs, "parallel instance builds");
  check->add_option("--tail", tail, "tail of sequence patterns")
      ->check(CLI::IsMember({"repeat", "free"}));
  check->add_option("--pattern", pattern, "check this pattern instead of synthesizing one");

  auto* instr = app.add_subcommand("instrument", "emit a nondeterministic transition system");
  instr->add_option("file", file, "program (.ppg)")->required();
  instr->add_option("--pattern", pattern, "template or sequence pattern");
  instr->add_option("--index", index, "parameter indexing the pattern");
  instr->add_option("--tail", tail, "tail of sequence patterns")
      ->check(CLI::IsMember({"repeat", "free"}));
  instr->add_option("-o,--out", out, "output file");

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimate of termination");
  sim->add_option("file", file, "program (.ppg)")->required();
  sim->add_option("--instances", instances, "parameter values, NAME=V");
  sim->add_option("--samples", samples, "number of runs");
  sim->add_option("--cap", cap, "step cap per run");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--jobs", jobs, "worker threads");
  sim->add_option("--node-cap", node_cap, "state space node limit");

  auto* dump = app.add_subcommand("dump", "print the state space, one transition per line");
  dump->add_option("file", file, "program (.ppg)")->required();
  dump->add_option("--instances", instances, "parameter values, NAME=V");
  dump->add_option("--node-cap", node_cap, "state space node limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  const std::vector<const char*> inst = c_strings(instances);
  asterm_report* r = nullptr;
  if (check->parsed()) {
    asterm_check_options o;
    asterm_check_options_init(&o);
    o.file = file.c_str();
    o.instances = inst.data();
    o.instance_count = inst.size();
    o.base_word = base_word.c_str();
    o.rounds = rounds;
    o.node_cap = node_cap;
    o.oracle = oracle;
    o.seed = seed;
    o.jobs = jobs;
    o.tail = tail_code(tail);
    o.pattern = pattern.c_str();
    const asterm_status st = asterm_cmd_check(&o, &r);
    return finish(st, r);
  }
  if (instr->parsed()) {
    asterm_instrument_options o;
    asterm_instrument_options_init(&o);
    o.file = file.c_str();
    o.pattern = pattern.c_str();
    o.index_param = index.c_str();
    o.tail = tail_code(tail);
    o.out = out.c_str();
    const asterm_status st = asterm_cmd_instrument(&o, &r);
    return finish(st, r);
  }
  asterm_simulate_options o;
  asterm_simulate_options_init(&o);
  o.file = file.c_str();
  o.instances = inst.data();
  o.instance_count = inst.size();
  o.samples = samples;
  o.step_cap = cap;
  o.seed = seed;
  o.jobs = jobs;
  o.node_cap = node_cap;
  if (sim->parsed()) {
    const asterm_status st = asterm_cmd_simulate(&o, &r);
    return finish(st, r);
  }
  const asterm_status st = asterm_cmd_dump(&o, &r);
  return finish(st, r);
}
