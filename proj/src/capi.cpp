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

#include "asterm/asterm.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "asterm/checker.hpp"
#include "asterm/commands.hpp"
#include "asterm/error.hpp"
#include "asterm/lang.hpp"
#include "asterm/oracle.hpp"
#include "asterm/patterns.hpp"
#include "asterm/semantics.hpp"

struct asterm_program {
  std::shared_ptr<const asterm::Program> prog;
};

struct asterm_space {
  asterm::StateSpace space;
};

struct asterm_report {
  asterm::Report report;
};

namespace {

thread_local std::string last_error;

asterm_status status_of(asterm::ErrorKind k) {
  using asterm::ErrorKind;
  switch (k) {
    case ErrorKind::Parse: return ASTERM_E_PARSE;
    case ErrorKind::Semantic: return ASTERM_E_SEMANTIC;
    case ErrorKind::Modeling: return ASTERM_E_MODEL;
    case ErrorKind::Resource: return ASTERM_E_RESOURCE;
    case ErrorKind::InvalidArgument: return ASTERM_E_INVALID_ARGUMENT;
    case ErrorKind::Unsupported: return ASTERM_E_UNSUPPORTED;
    case ErrorKind::Io: return ASTERM_E_IO;
  }
  return ASTERM_E_INTERNAL;
}

template <class F>
asterm_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return ASTERM_OK;
  } catch (const asterm::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ASTERM_E_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ASTERM_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return ASTERM_E_INTERNAL;
  }
}

asterm_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return ASTERM_E_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string str(const char* s) { return s ? s : ""; }

std::vector<asterm::InstanceRange> ranges(const char* const* items, std::size_t n) {
  std::vector<asterm::InstanceRange> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!items || !items[i]) throw asterm::InvalidArgument("null instance entry");
    out.push_back(asterm::parse_instance_range(items[i]));
  }
  return out;
}

std::optional<asterm::Tail> tail_of(int t) {
  switch (t) {
    case ASTERM_TAIL_DEFAULT: return std::nullopt;
    case ASTERM_TAIL_REPEAT: return asterm::Tail::Repeat;
    case ASTERM_TAIL_FREE: return asterm::Tail::Free;
  }
  throw asterm::InvalidArgument("unknown tail mode " + std::to_string(t));
}

asterm::Instance parse_instance(const char* text) {
  asterm::Instance inst;
  if (!text) return inst;
  std::string s = text;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    const asterm::InstanceRange r = asterm::parse_instance_range(s.substr(start, comma - start));
    if (r.lo != r.hi) throw asterm::InvalidArgument("a space needs single instance values");
    inst[r.param] = r.lo;
    start = comma + 1;
  }
  return inst;
}

asterm_status emit(asterm::Report r, asterm_report** out) {
  *out = new asterm_report{std::move(r)};
  return ASTERM_OK;
}

}  // namespace

extern "C" {

const char* asterm_last_error(void) { return last_error.c_str(); }

const char* asterm_version(void) { return "0.1.0"; }

void asterm_string_free(char* s) { std::free(s); }

asterm_status asterm_program_load(const char* path, asterm_program** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] { *out = new asterm_program{asterm::load_program(path)}; });
}

asterm_status asterm_program_compile(const char* text, asterm_program** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] { *out = new asterm_program{asterm::compile(text)}; });
}

void asterm_program_free(asterm_program* p) { delete p; }

const char* asterm_program_name(const asterm_program* p) {
  return p ? p->prog->name.c_str() : "";
}

int asterm_program_is_deterministic(const asterm_program* p) {
  return p && p->prog->is_deterministic() ? 1 : 0;
}

size_t asterm_program_location_count(const asterm_program* p) {
  return p ? p->prog->locations.size() : 0;
}

asterm_status asterm_space_build(const asterm_program* p, const char* instance, size_t node_cap,
                                 asterm_space** out) {
  if (!p) return null_arg("program");
  if (!out) return null_arg("out");
  return guard([&] {
    asterm::BuildOptions o;
    if (node_cap) o.node_cap = node_cap;
    *out = new asterm_space{asterm::build(p->prog, parse_instance(instance), o)};
  });
}

void asterm_space_free(asterm_space* s) { delete s; }

size_t asterm_space_size(const asterm_space* s) { return s ? s->space.size() : 0; }

asterm_status asterm_space_dump(const asterm_space* s, char** out) {
  if (!s) return null_arg("space");
  if (!out) return null_arg("out");
  return guard([&] { *out = dup(asterm::dump(s->space)); });
}

asterm_status asterm_as_terminating(const asterm_space* s, int* terminating) {
  if (!s) return null_arg("space");
  if (!terminating) return null_arg("terminating");
  return guard([&] {
    *terminating = s->space.has_action_nodes()
                       ? asterm::as_terminating_mdp(s->space).terminating
                       : asterm::as_terminating_deterministic(s->space).terminating;
  });
}

asterm_status asterm_check_simple(const asterm_space* s, const char* word, int* terminating) {
  if (!s) return null_arg("space");
  if (!terminating) return null_arg("terminating");
  return guard([&] {
    *terminating = asterm::check_simple_pattern(s->space, str(word)).terminating() ? 1 : 0;
  });
}

asterm_status asterm_refine(const asterm_space* s, const char* base, size_t rounds, int* outcome,
                            char** word) {
  if (!s) return null_arg("space");
  if (!outcome) return null_arg("outcome");
  return guard([&] {
    asterm::RefineOptions o;
    if (rounds) o.rounds = rounds;
    const asterm::RefinementResult r = asterm::refine_finite(s->space, str(base), o);
    switch (r.trace.status) {
      case asterm::RefinementTrace::Status::Proven: *outcome = ASTERM_REFINE_PROVEN; break;
      case asterm::RefinementTrace::Status::Refuted: *outcome = ASTERM_REFINE_REFUTED; break;
      case asterm::RefinementTrace::Status::BudgetExhausted: *outcome = ASTERM_REFINE_BUDGET; break;
    }
    if (word)
      *word = r.trace.status == asterm::RefinementTrace::Status::Proven ? dup(r.pattern.word)
                                                                        : nullptr;
  });
}

asterm_status asterm_monte_carlo(const asterm_space* s, uint64_t samples, uint64_t step_cap,
                                 uint64_t seed, unsigned jobs, uint64_t* terminated,
                                 uint64_t* capped) {
  if (!s) return null_arg("space");
  return guard([&] {
    asterm::Strategy a0;
    for (asterm::NodeId n = 0; n < s->space.size(); ++n)
      if (s->space.kind(n) == asterm::NodeKind::Action) a0[n] = asterm::Label::Act0;
    const asterm::Estimate e = asterm::monte_carlo(s->space, samples, step_cap, seed,
                                                   a0.empty() ? nullptr : &a0, jobs ? jobs : 1);
    if (terminated) *terminated = e.terminated;
    if (capped) *capped = e.capped;
  });
}

void asterm_check_options_init(asterm_check_options* o) {
  if (!o) return;
  *o = asterm_check_options{};
  o->rounds = 64;
  o->node_cap = 10'000'000;
  o->seed = 1;
  o->jobs = 1;
}

void asterm_instrument_options_init(asterm_instrument_options* o) {
  if (o) *o = asterm_instrument_options{};
}

void asterm_simulate_options_init(asterm_simulate_options* o) {
  if (!o) return;
  *o = asterm_simulate_options{};
  o->samples = 10'000;
  o->step_cap = 100'000;
  o->seed = 1;
  o->jobs = 1;
  o->node_cap = 10'000'000;
}

asterm_status asterm_cmd_check(const asterm_check_options* o, asterm_report** out) {
  if (!o || !o->file) return null_arg("options.file");
  if (!out) return null_arg("out");
  return guard([&] {
    asterm::CheckRequest r;
    r.file = o->file;
    r.instances = ranges(o->instances, o->instance_count);
    r.base_word = str(o->base_word);
    r.rounds = o->rounds ? o->rounds : 64;
    r.node_cap = o->node_cap ? o->node_cap : 10'000'000;
    r.oracle = o->oracle != 0;
    r.seed = o->seed;
    r.jobs = o->jobs ? o->jobs : 1;
    r.tail = tail_of(o->tail);
    r.pattern = str(o->pattern);
    emit(asterm::cmd_check(r), out);
  });
}

asterm_status asterm_cmd_instrument(const asterm_instrument_options* o, asterm_report** out) {
  if (!o || !o->file) return null_arg("options.file");
  if (!out) return null_arg("out");
  return guard([&] {
    asterm::InstrumentRequest r;
    r.file = o->file;
    r.pattern = str(o->pattern);
    r.index_param = str(o->index_param);
    r.tail = tail_of(o->tail);
    r.out = str(o->out);
    emit(asterm::cmd_instrument(r), out);
  });
}

asterm_status asterm_cmd_simulate(const asterm_simulate_options* o, asterm_report** out) {
  if (!o || !o->file) return null_arg("options.file");
  if (!out) return null_arg("out");
  return guard([&] {
    asterm::SimulateRequest r;
    r.file = o->file;
    r.instances = ranges(o->instances, o->instance_count);
    r.samples = o->samples;
    r.cap = o->step_cap;
    r.seed = o->seed;
    r.jobs = o->jobs ? o->jobs : 1;
    r.node_cap = o->node_cap ? o->node_cap : 10'000'000;
    emit(asterm::cmd_simulate(r), out);
  });
}

asterm_status asterm_cmd_dump(const asterm_simulate_options* o, asterm_report** out) {
  if (!o || !o->file) return null_arg("options.file");
  if (!out) return null_arg("out");
  return guard([&] {
    asterm::DumpRequest r;
    r.file = o->file;
    r.instances = ranges(o->instances, o->instance_count);
    r.node_cap = o->node_cap ? o->node_cap : 10'000'000;
    emit(asterm::cmd_dump(r), out);
  });
}

int asterm_report_exit_code(const asterm_report* r) { return r ? r->report.exit_code : 3; }

const char* asterm_report_text(const asterm_report* r) { return r ? r->report.text.c_str() : ""; }

void asterm_report_free(asterm_report* r) { delete r; }

}  // extern "C"
