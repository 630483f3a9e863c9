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

#include "asterm/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "asterm/error.hpp"
#include "asterm/instrument.hpp"
#include "asterm/lang.hpp"
#include "asterm/oracle.hpp"
#include "asterm/patterns.hpp"
#include "asterm/responses.hpp"
#include "asterm/semantics.hpp"

namespace asterm {

namespace {

std::string eps(const std::string& w) { return w.empty() ? "ε" : w; }

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string status_name(int code) {
  switch (code) {
    case kExitProven: return "proven";
    case kExitRefuted: return "refuted";
    case kExitInconclusive: return "inconclusive";
    default: return "error";
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string instance_name(const Instance& inst) {
  if (inst.empty()) return "-";
  std::string s;
  for (const auto& [k, v] : inst) s += (s.empty() ? "" : ",") + k + "=" + std::to_string(v);
  return s;
}

std::string ranges_name(const std::vector<InstanceRange>& rs) {
  if (rs.empty()) return "-";
  std::string s;
  for (const InstanceRange& r : rs) {
    s += (s.empty() ? "" : ",") + r.param + "=" + std::to_string(r.lo);
    if (r.hi != r.lo) s += ".." + std::to_string(r.hi);
  }
  return s;
}

// Report body, assembled section by section.
struct Sections {
  std::ostringstream verdict, pattern, trace, witness, oracle;

  std::string text(int code) const {
    std::string out = "VERDICT\nstatus: " + status_name(code) + "\n" + verdict.str();
    out += "PATTERN\n" + pattern.str();
    out += "TRACE\n" + trace.str();
    out += "WITNESS\n" + (witness.str().empty() ? std::string("none\n") : witness.str());
    out += "ORACLE\n" + (oracle.str().empty() ? std::string("disabled\n") : oracle.str());
    return out;
  }
};

struct Expanded {
  std::vector<Instance> list;
  std::string varying;
};

Expanded expand(const Program& p, const std::vector<InstanceRange>& ranges) {
  Expanded e;
  Instance fixed;
  const InstanceRange* span = nullptr;
  for (const InstanceRange& r : ranges) {
    const int slot = p.slot_of(r.param);
    if (slot < 0 || p.symbols[slot].kind != SymbolKind::Param)
      throw InvalidArgument("'" + r.param + "' is not a parameter of " + p.name);
    if (r.lo > r.hi) throw InvalidArgument("empty instance range for '" + r.param + "'");
    if (fixed.count(r.param) || (span && span->param == r.param))
      throw InvalidArgument("parameter '" + r.param + "' given twice");
    if (r.lo == r.hi) {
      fixed[r.param] = r.lo;
    } else {
      if (span) throw InvalidArgument("only one parameter may range over several values");
      span = &r;
    }
  }
  if (!span) {
    e.list.push_back(fixed);
    return e;
  }
  e.varying = span->param;
  for (std::int64_t v = span->lo; v <= span->hi; ++v) {
    Instance inst = fixed;
    inst[span->param] = v;
    e.list.push_back(inst);
  }
  return e;
}

std::string round_line(std::size_t i, const Round& r) {
  std::string s = "round " + std::to_string(i + 1) + ": candidate=" + eps(r.candidate);
  if (r.proven) return s + " result=proven";
  return s + " result=lasso coinword=" + eps(r.coinword) + " loop=" + eps(r.loop_word) +
         " next=" + eps(r.next);
}

void put_trace(std::ostream& os, const RefinementTrace& t, const std::string& indent) {
  os << indent << "base: " << eps(t.base) << "\n";
  for (std::size_t i = 0; i < t.rounds.size(); ++i) os << indent << round_line(i, t.rounds[i]) << "\n";
  switch (t.status) {
    case RefinementTrace::Status::Proven: os << indent << "outcome: proven\n"; break;
    case RefinementTrace::Status::Refuted: os << indent << "outcome: refuted\n"; break;
    case RefinementTrace::Status::BudgetExhausted: os << indent << "outcome: budget\n"; break;
  }
}

void put_mdp_witness(std::ostream& os, const StateSpace& s, const MdpVerdict& v) {
  os << "path:\n" << format_steps(s, v.path);
  os << "strategy:";
  std::size_t shown = 0;
  for (const auto& [n, l] : v.strategy) {
    if (shown++ == 32) {
      os << " ...";
      break;
    }
    os << " " << s.node_name(n) << "->" << to_string(l);
  }
  os << "\ntrap:";
  for (std::size_t i = 0; i < v.trap.size() && i < 32; ++i) os << " " << s.node_name(v.trap[i]);
  if (v.trap.size() > 32) os << " ... (" << v.trap.size() - 32 << " more)";
  os << "\n";
}

std::int64_t template_index(const Instance& inst, const std::string& varying) {
  if (!varying.empty()) return inst.at(varying);
  if (inst.size() == 1) return inst.begin()->second;
  throw InvalidArgument("a template pattern needs exactly one instance parameter as index");
}

bool coinless(const Lasso& l) {
  for (const Step& st : l.loop)
    if (is_coin(st.label)) return false;
  return true;
}

int check_given_pattern(const CheckRequest& req, std::shared_ptr<const Program> prog,
                        const Expanded& ex, Sections& out) {
  Pattern pat = parse_pattern(req.pattern);
  if (req.tail && pat.kind == Pattern::Kind::Sequence) pat.tail = *req.tail;
  if (pat.kind == Pattern::Kind::Universal)
    throw UnsupportedError("the universal pattern cannot be checked on an instance");
  out.verdict << "mode: pattern\n";
  out.pattern << "kind: given\npattern: " << serialize(pat) << "\nfamily: " << pat.readable() << "\n";
  BuildOptions bo{req.node_cap};
  CheckOptions co;
  int code = kExitProven;
  for (const Instance& inst : ex.list) {
    const StateSpace s = build(prog, inst, bo);
    CheckVerdict v;
    std::string word;
    switch (pat.kind) {
      case Pattern::Kind::Simple:
        v = check_simple_pattern(s, pat.word, co);
        break;
      case Pattern::Kind::Sequence:
        v = check_sequence_pattern(s, pat.words, pat.tail, co);
        break;
      default:
        word = pat.expand(template_index(inst, ex.varying));
        v = check_simple_pattern(s, word, co);
        break;
    }
    out.trace << "instance " << instance_name(inst) << ": nodes=" << s.size();
    if (pat.kind == Pattern::Kind::Template) out.trace << " word=" << eps(word);
    out.trace << " product=" << v.product_states;
    if (v.terminating()) {
      out.trace << " result=terminating\n";
    } else {
      const bool dead = coinless(v.lasso);
      out.trace << " result=lasso coinword=" << eps(v.lasso.coinword) << "\n";
      if (out.witness.str().empty())
        out.witness << "instance: " << instance_name(inst) << "\n" << format_lasso(s, v.lasso);
      if (dead) code = kExitRefuted;
      else if (code == kExitProven) code = kExitInconclusive;
    }
    if (req.oracle) {
      const bool t = s.has_action_nodes() ? as_terminating_mdp(s).terminating
                                          : as_terminating_deterministic(s).terminating;
      out.oracle << "instance " << instance_name(inst) << ": terminating=" << yes(t)
                 << " agree=" << yes(!v.terminating() || t) << "\n";
    }
  }
  return code;
}

int check_nondeterministic(const CheckRequest& req, std::shared_ptr<const Program> prog,
                           const Expanded& ex, Sections& out) {
  out.verdict << "mode: nondeterministic\n";
  BuildOptions bo{req.node_cap};
  std::shared_ptr<const Program> normal;
  int code = kExitProven;
  for (const Instance& inst : ex.list) {
    const StateSpace s = build(prog, inst, bo);
    const MdpVerdict mv = as_terminating_mdp(s);
    out.oracle << "instance " << instance_name(inst) << ": mdp-terminating=" << yes(mv.terminating)
               << "\n";
    if (!mv.terminating) {
      out.trace << "instance " << instance_name(inst) << ": nodes=" << s.size()
                << " result=refuted\n";
      if (out.witness.str().empty()) {
        out.witness << "instance: " << instance_name(inst) << "\n";
        put_mdp_witness(out.witness, s, mv);
      }
      code = kExitRefuted;
      continue;
    }
    if (!normal) normal = normalize(*prog);
    const StateSpace ns = build(normal, inst, bo);
    ResponseResult rr;
    try {
      rr = construct_response(ns);
    } catch (const ResourceError& e) {
      rr.ok = false;
      rr.message = e.what();
    }
    out.trace << "instance " << instance_name(inst) << ": nodes=" << s.size()
              << " normal-nodes=" << ns.size() << " action-nodes=" << rr.action_nodes;
    if (!rr.ok) {
      out.trace << " result=no-response\n";
      if (!rr.message.empty()) out.verdict << "message: " << rr.message << "\n";
      if (code == kExitProven) code = kExitInconclusive;
      continue;
    }
    const CheckVerdict cv = check_response_pattern(ns, rr.response);
    out.trace << " length=" << rr.response.n << " result="
              << (cv.terminating() ? "terminating" : "lasso") << "\n";
    out.pattern << "instance " << instance_name(inst) << ": response " << serialize(rr.response)
                << "\n";
    if (!cv.terminating() && code == kExitProven) code = kExitInconclusive;
  }
  return code;
}

int check_finite(const CheckRequest& req, std::shared_ptr<const Program> prog,
                 const Instance& inst, Sections& out) {
  out.verdict << "mode: finite\n";
  const StateSpace s = build(prog, inst, BuildOptions{req.node_cap});
  RefineOptions ro;
  ro.rounds = req.rounds;
  const RefinementResult r = refine_finite(s, req.base_word, ro);
  out.verdict << "nodes: " << s.size() << "\n";
  put_trace(out.trace, r.trace, "");
  int code = kExitInconclusive;
  switch (r.trace.status) {
    case RefinementTrace::Status::Proven:
      code = kExitProven;
      out.pattern << "kind: simple\nword: " << eps(r.pattern.word) << "\npattern: "
                  << serialize(r.pattern) << "\n";
      break;
    case RefinementTrace::Status::Refuted:
      code = kExitRefuted;
      if (r.trace.witness) out.witness << "coinless lasso\n" << format_lasso(s, *r.trace.witness);
      break;
    case RefinementTrace::Status::BudgetExhausted:
      break;
  }
  if (!r.trace.message.empty()) out.verdict << "message: " << r.trace.message << "\n";
  if (req.oracle) {
    const DeterministicVerdict dv = as_terminating_deterministic(s);
    out.oracle << "instance " << instance_name(inst) << ": terminating=" << yes(dv.terminating)
               << " agree=" << yes(code == kExitInconclusive || dv.terminating == (code == kExitProven))
               << "\n";
  }
  return code;
}

int check_weakly_finite(const CheckRequest& req, std::shared_ptr<const Program> prog,
                        const Expanded& ex, Sections& out) {
  out.verdict << "mode: weakly-finite\n";
  DriveOptions o;
  o.refine.rounds = req.rounds;
  o.build.node_cap = req.node_cap;
  o.base_word = req.base_word;
  o.jobs = req.jobs;
  o.oracle = req.oracle;
  const DriveResult d = drive_weakly_finite(prog, ex.list, ex.varying, o);
  out.verdict << "index: " << d.index_param << "\n";
  if (!d.message.empty()) out.verdict << "message: " << d.message << "\n";
  bool agree = true;
  for (const InstanceOutcome& io : d.instances) {
    out.trace << "instance " << instance_name(io.instance) << ": nodes=" << io.nodes
              << " word=" << eps(io.word) << " verified=" << yes(io.verified) << "\n";
    put_trace(out.trace, io.trace, "  ");
    if (io.oracle) {
      const bool ok = io.trace.status == RefinementTrace::Status::BudgetExhausted ||
                      *io.oracle == (io.trace.status == RefinementTrace::Status::Proven);
      agree = agree && ok;
      out.oracle << "instance " << instance_name(io.instance) << ": terminating=" << yes(*io.oracle)
                 << " agree=" << yes(ok) << "\n";
    }
  }
  if (req.oracle) out.oracle << "agreement: " << yes(agree) << "\n";
  if (d.guess) {
    out.pattern << "kind: template\npattern: " << serialize(*d.guess) << "\nfamily: "
                << d.guess->readable() << "\n";
    if (d.fit_from < d.instances.size())
      out.pattern << "fit-from: " << instance_name(d.instances[d.fit_from].instance) << "\n";
  }
  switch (d.status) {
    case DriveResult::Status::Guessed: return kExitProven;
    case DriveResult::Status::Refuted: {
      if (d.failed < d.instances.size()) {
        const InstanceOutcome& io = d.instances[d.failed];
        if (io.trace.witness) {
          const StateSpace s = build(prog, io.instance, o.build);
          out.witness << "instance: " << instance_name(io.instance) << "\ncoinless lasso\n"
                      << format_lasso(s, *io.trace.witness);
        }
      }
      return kExitRefuted;
    }
    case DriveResult::Status::NoGuess:
    case DriveResult::Status::Budget: return kExitInconclusive;
  }
  return kExitInconclusive;
}

Report error_report(const std::exception& e, int code) {
  std::string kind = "internal";
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::Parse: kind = "parse"; break;
      case ErrorKind::Semantic: kind = "semantic"; break;
      case ErrorKind::Modeling: kind = "modeling"; break;
      case ErrorKind::Resource: kind = "resource"; break;
      case ErrorKind::InvalidArgument: kind = "invalid-argument"; break;
      case ErrorKind::Unsupported: kind = "unsupported"; break;
      case ErrorKind::Io: kind = "io"; break;
    }
  }
  return {code, "VERDICT\nstatus: " + status_name(code) + "\nerror: " + kind + ": " + e.what() + "\n"};
}

// Runs `body`, mapping errors onto exit codes: budgets are inconclusive,
// everything else is an input error.
template <class F>
Report guarded(F&& body) {
  try {
    return body();
  } catch (const ResourceError& e) {
    return error_report(e, kExitInconclusive);
  } catch (const std::exception& e) {
    return error_report(e, kExitError);
  }
}

Instance single_instance(const Program& p, const std::vector<InstanceRange>& ranges) {
  const Expanded ex = expand(p, ranges);
  if (ex.list.size() != 1) throw InvalidArgument("this command takes a single instance");
  return ex.list.front();
}

}  // namespace

InstanceRange parse_instance_range(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidArgument("instance must read NAME=LO..HI or NAME=VALUE, got '" + text + "'");
  InstanceRange r;
  r.param = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw InvalidArgument("bad instance value '" + s + "'");
    return v;
  };
  const std::size_t dots = rest.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = num(rest);
  } else {
    r.lo = num(rest.substr(0, dots));
    r.hi = num(rest.substr(dots + 2));
    if (r.lo > r.hi) throw InvalidArgument("empty instance range '" + text + "'");
  }
  return r;
}

Report cmd_check(const CheckRequest& req) {
  return guarded([&]() -> Report {
    const std::shared_ptr<const Program> prog = load_program(req.file);
    const Expanded ex = expand(*prog, req.instances);
    Sections out;
    out.verdict << "program: " << prog->name << "\ninstances: " << ranges_name(req.instances) << "\n";
    int code;
    if (!req.pattern.empty())
      code = check_given_pattern(req, prog, ex, out);
    else if (!prog->is_deterministic())
      code = check_nondeterministic(req, prog, ex, out);
    else if (ex.list.size() > 1)
      code = check_weakly_finite(req, prog, ex, out);
    else
      code = check_finite(req, prog, ex.list.front(), out);
    return {code, out.text(code)};
  });
}

Report cmd_instrument(const InstrumentRequest& req) {
  return guarded([&]() -> Report {
    const std::shared_ptr<const Program> prog = load_program(req.file);
    TransitionSystem doc;
    if (req.pattern.empty()) {
      doc = export_nondet(*prog);
    } else {
      Pattern pat = parse_pattern(req.pattern);
      if (req.tail && pat.kind == Pattern::Kind::Sequence) pat.tail = *req.tail;
      std::string index = req.index_param;
      if (index.empty() && pat.kind == Pattern::Kind::Template) {
        // default to the only unbounded parameter, if there is one
        int found = 0;
        for (const Symbol& s : prog->symbols)
          if (s.kind == SymbolKind::Param && !s.hi) {
            index = s.name;
            ++found;
          }
        if (found != 1) index.clear();
      }
      doc = instrument_pattern(*prog, pat, index);
    }
    const std::string text = emit(doc);
    if (req.out.empty()) return {kExitProven, text};
    std::ofstream f(req.out, std::ios::binary);
    if (!f) throw IoError("cannot write " + req.out);
    f << text;
    if (!f) throw IoError("cannot write " + req.out);
    return {kExitProven, "wrote " + req.out + "\n"};
  });
}

Report cmd_simulate(const SimulateRequest& req) {
  return guarded([&]() -> Report {
    const std::shared_ptr<const Program> prog = load_program(req.file);
    const Instance inst = single_instance(*prog, req.instances);
    const StateSpace s = build(prog, inst, BuildOptions{req.node_cap});
    Strategy always_a0;
    for (NodeId n = 0; n < s.size(); ++n)
      if (s.kind(n) == NodeKind::Action) always_a0[n] = Label::Act0;
    const Estimate e = monte_carlo(s, req.samples, req.cap, req.seed,
                                   always_a0.empty() ? nullptr : &always_a0, req.jobs);
    std::ostringstream os;
    os << "VERDICT\nstatus: estimate\nprogram: " << prog->name
       << "\ninstance: " << instance_name(inst) << "\nstrategy: "
       << (always_a0.empty() ? "none" : "always-a0") << "\nsamples: " << e.samples
       << "\nstep-cap: " << req.cap << "\nseed: " << req.seed << "\nterminated: " << e.terminated
       << "\ncapped: " << e.capped << "\nterminated-fraction: " << fixed6(e.terminated_fraction())
       << "\ncapped-fraction: " << fixed6(e.capped_fraction()) << "\n";
    return {kExitProven, os.str()};
  });
}

Report cmd_dump(const DumpRequest& req) {
  return guarded([&]() -> Report {
    const std::shared_ptr<const Program> prog = load_program(req.file);
    const Instance inst = single_instance(*prog, req.instances);
    const StateSpace s = build(prog, inst, BuildOptions{req.node_cap});
    return {kExitProven, dump(s)};
  });
}

}  // namespace asterm
