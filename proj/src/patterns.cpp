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

#include "asterm/patterns.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <set>
#include <thread>

#include "asterm/error.hpp"
#include "asterm/oracle.hpp"

namespace asterm {

Pattern Pattern::simple(std::string w) {
  Pattern p;
  p.kind = Kind::Simple;
  p.word = std::move(w);
  return p;
}

Pattern Pattern::sequence(std::vector<std::string> ws, Tail t) {
  Pattern p;
  p.kind = Kind::Sequence;
  p.words = std::move(ws);
  p.tail = t;
  return p;
}

Pattern Pattern::templ(std::string a, std::string b, std::string c, std::int64_t d) {
  Pattern p;
  p.kind = Kind::Template;
  p.alpha = std::move(a);
  p.beta = std::move(b);
  p.gamma = std::move(c);
  p.delta = p.beta.empty() ? 0 : d;
  return p;
}

Pattern Pattern::universal() {
  Pattern p;
  p.kind = Kind::Universal;
  return p;
}

std::string Pattern::expand(std::int64_t i) const {
  if (i < 1) throw InvalidArgument("pattern index must be at least 1");
  switch (kind) {
    case Kind::Simple:
      return word;
    case Kind::Sequence:
      if (words.empty()) return {};
      return words[std::min<std::size_t>(static_cast<std::size_t>(i), words.size()) - 1];
    case Kind::Template: {
      std::string out = alpha;
      for (std::int64_t k = 0; k < std::max<std::int64_t>(0, i - delta); ++k) out += beta;
      return out + gamma;
    }
    case Kind::Universal:
      return universal_word(static_cast<std::uint64_t>(i));
  }
  return {};
}

namespace {

std::string show(const std::string& w) { return w.empty() ? "ε" : w; }

void check_word(std::string_view w) {
  for (char c : w)
    if (c != '0' && c != '1') throw InvalidArgument("coin words use only 0 and 1");
}

}  // namespace

std::string Pattern::readable() const {
  switch (kind) {
    case Kind::Simple:
      return show(word);
    case Kind::Sequence: {
      std::string s;
      for (std::size_t i = 0; i < words.size(); ++i) s += (i ? ", " : "") + show(words[i]);
      return s + (tail == Tail::Repeat ? " (last repeats)" : " (then free)");
    }
    case Kind::Template: {
      if (beta.empty()) return "constant " + show(alpha + gamma);
      // a lone letter needs no parentheses unless α would run into it
      const bool bare = beta.size() == 1 && alpha.empty();
      std::string power = bare ? beta : "(" + beta + ")";
      if (delta == 0)
        power += "^i";
      else if (delta < 0)
        power += "^{i+" + std::to_string(-delta) + "}";
      else
        power += "^{i-" + std::to_string(delta) + "}";
      return alpha + power + gamma;
    }
    case Kind::Universal:
      return "all words in length-lexicographic order";
  }
  return {};
}

std::string serialize(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Simple:
      return "simple:" + p.word;
    case Pattern::Kind::Sequence: {
      std::string s = "seq:";
      for (std::size_t i = 0; i < p.words.size(); ++i) s += (i ? "," : "") + p.words[i];
      return s + ";tail=" + (p.tail == Tail::Repeat ? "repeat" : "free");
    }
    case Pattern::Kind::Template:
      return "template:a=" + p.alpha + ";b=" + p.beta + ";c=" + p.gamma +
             ";d=" + std::to_string(p.delta);
    case Pattern::Kind::Universal:
      return "universal:lenlex";
  }
  return {};
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw InvalidArgument("bad integer '" + s + "' in pattern");
  return v;
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InvalidArgument("pattern must look like kind:body, got '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);
  if (kind == "simple") {
    check_word(body);
    return Pattern::simple(std::string(body));
  }
  if (kind == "seq") {
    Tail tail = Tail::Repeat;
    std::string_view list = body;
    const std::size_t semi = body.find(';');
    if (semi != std::string_view::npos) {
      const std::string_view opt = body.substr(semi + 1);
      if (opt == "tail=repeat")
        tail = Tail::Repeat;
      else if (opt == "tail=free")
        tail = Tail::Free;
      else
        throw InvalidArgument("unknown sequence option '" + std::string(opt) + "'");
      list = body.substr(0, semi);
    }
    std::vector<std::string> ws;
    if (!list.empty()) ws = split(list, ',');
    for (const std::string& w : ws) check_word(w);
    return Pattern::sequence(std::move(ws), tail);
  }
  if (kind == "template") {
    std::string a, b, c, d = "0";
    bool seen[4] = {false, false, false, false};
    for (const std::string& field : split(body, ';')) {
      if (field.size() < 2 || field[1] != '=')
        throw InvalidArgument("bad template field '" + field + "'");
      const std::string value = field.substr(2);
      switch (field[0]) {
        case 'a': a = value; seen[0] = true; break;
        case 'b': b = value; seen[1] = true; break;
        case 'c': c = value; seen[2] = true; break;
        case 'd': d = value; seen[3] = true; break;
        default: throw InvalidArgument("bad template field '" + field + "'");
      }
    }
    if (!seen[0] || !seen[1] || !seen[2] || !seen[3])
      throw InvalidArgument("template needs fields a, b, c and d");
    check_word(a);
    check_word(b);
    check_word(c);
    return Pattern::templ(a, b, c, parse_int(d));
  }
  if (kind == "universal") {
    if (body != "lenlex") throw InvalidArgument("only universal:lenlex is supported");
    return Pattern::universal();
  }
  throw InvalidArgument("unknown pattern kind '" + std::string(kind) + "'");
}

std::string universal_word(std::uint64_t i) {
  if (i == 0) throw InvalidArgument("universal enumeration starts at 1");
  // Binary representation of i without its leading 1.
  std::string out;
  while (i > 1) {
    out += (i & 1) ? '1' : '0';
    i >>= 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool is_infix_of_power(std::string_view w, std::string_view u) {
  if (u.empty()) throw InvalidArgument("is_infix_of_power needs a nonempty period");
  if (w.empty()) return true;
  const std::size_t reps = (w.size() + u.size() - 1) / u.size() + 1;
  std::string hay;
  hay.reserve(reps * u.size());
  for (std::size_t k = 0; k < reps; ++k) hay += u;
  return hay.find(w) != std::string::npos;
}

std::string primitive_root(std::string_view u) {
  if (u.empty()) return {};
  const std::string doubled = std::string(u) + std::string(u);
  const std::size_t p = doubled.find(u, 1);
  return std::string(u.substr(0, p));
}

namespace {

bool spoils(std::string_view w, const std::vector<std::string>& loops) {
  for (const std::string& u : loops)
    if (is_infix_of_power(w, u)) return false;
  return true;
}

}  // namespace

std::string spoiler_shortest(std::string_view base, const std::vector<std::string>& loops) {
  check_word(base);
  for (const std::string& u : loops) {
    if (u.empty()) throw InvalidArgument("loop words must be nonempty");
    check_word(u);
  }
  std::size_t total = 0;
  for (const std::string& u : loops) total += u.size();
  // The greedy argument bounds the extension by 1 + log2(total).
  std::size_t bound = 1;
  while ((std::size_t{1} << (bound - 1)) <= total) ++bound;
  for (std::size_t len = 0; len <= bound + 1; ++len) {
    std::string w(base);
    w.resize(base.size() + len, '0');
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << len); ++x) {
      for (std::size_t k = 0; k < len; ++k)
        w[base.size() + k] = ((x >> (len - 1 - k)) & 1) ? '1' : '0';
      if (spoils(w, loops)) return w;
    }
  }
  throw std::logic_error("no spoiler within the proven length bound");
}

std::string spoiler_greedy(std::string_view base, const std::vector<std::string>& loops) {
  check_word(base);
  // Suffixes of the u^ω, identified by (loop, offset), that start with w.
  struct Suffix {
    const std::string* u;
    std::size_t offset;
  };
  auto letter = [](const Suffix& s, std::size_t k) { return (*s.u)[(s.offset + k) % s.u->size()]; };
  std::vector<Suffix> alive;
  for (const std::string& u : loops) {
    if (u.empty()) throw InvalidArgument("loop words must be nonempty");
    check_word(u);
    for (std::size_t r = 0; r < u.size(); ++r) alive.push_back({&u, r});
  }
  std::vector<Suffix> keep;
  for (const Suffix& s : alive) {
    bool ok = true;
    for (std::size_t k = 0; k < base.size() && ok; ++k) ok = letter(s, k) == base[k];
    if (ok) keep.push_back(s);
  }
  alive.swap(keep);
  std::string w(base);
  while (!alive.empty()) {
    const std::size_t k = w.size();
    std::size_t zeros = 0;
    for (const Suffix& s : alive)
      if (letter(s, k) == '0') ++zeros;
    const char c = zeros <= alive.size() - zeros ? '0' : '1';
    w += c;
    keep.clear();
    for (const Suffix& s : alive)
      if (letter(s, k) == c) keep.push_back(s);
    alive.swap(keep);
  }
  return w;
}

RefinementResult refine_finite(const StateSpace& s, std::string_view base,
                               const RefineOptions& opts) {
  check_word(base);
  if (s.has_action_nodes()) throw InvalidArgument("refinement requires a deterministic program");
  RefinementResult res;
  RefinementTrace& tr = res.trace;
  tr.base = std::string(base);

  if (auto l = check_coinless_nontermination(s)) {
    tr.status = RefinementTrace::Status::Refuted;
    tr.witness = std::move(l);
    tr.message = "a reachable cycle tosses no coin";
    return res;
  }

  std::vector<std::string> loops;
  std::set<std::string> tried;
  std::string cand(base);
  try {
    while (true) {
      if (tr.rounds.size() >= opts.rounds) {
        tr.status = RefinementTrace::Status::BudgetExhausted;
        tr.message = "round budget of " + std::to_string(opts.rounds) + " exhausted";
        return res;
      }
      if (!tried.insert(cand).second) throw std::logic_error("spoiler repeated a candidate");
      Round r;
      r.candidate = cand;
      const CheckVerdict v = check_simple_pattern(s, cand, opts.check);
      if (v.terminating()) {
        r.proven = true;
        tr.rounds.push_back(std::move(r));
        tr.status = RefinementTrace::Status::Proven;
        res.pattern = Pattern::simple(cand);
        return res;
      }
      r.coinword = v.lasso.coinword;
      r.loop_word = primitive_root(v.lasso.coinword);
      r.lasso = v.lasso;
      if (r.loop_word.empty()) throw std::logic_error("coin-free loop after the coinless check");
      loops.push_back(r.loop_word);
      cand = spoiler_shortest(base, loops);
      r.next = cand;
      tr.rounds.push_back(std::move(r));
    }
  } catch (const ResourceError& e) {
    tr.status = RefinementTrace::Status::BudgetExhausted;
    tr.message = e.what();
  }
  return res;
}

DirectResult construct_pattern_direct(const StateSpace& s) {
  DirectResult res;
  const DeterministicVerdict oracle = as_terminating_deterministic(s);
  std::vector<NodeId> coins;
  for (NodeId n = 0; n < s.size(); ++n)
    if (s.kind(n) == NodeKind::Coin) coins.push_back(n);
  res.abstraction_size = coins.size() + (s.terminal() != kNoNode ? 1 : 0);
  if (!oracle.terminating) {
    res.stuck = oracle.stuck;
    res.message = "node " + s.node_name(oracle.stuck) + " cannot reach the end";
    return res;
  }

  // Abstraction over coin nodes: successor after a letter and tau closure.
  auto next = [&](NodeId q, int bit) {
    const Label want = bit ? Label::Coin1 : Label::Coin0;
    for (const Transition& t : s.successors(q))
      if (t.label == want) return tau_closure(s, t.target);
    return kNoNode;
  };
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(s.size(), kInf);
  std::vector<std::vector<NodeId>> pred(s.size());
  for (NodeId q : coins)
    for (int b = 0; b < 2; ++b) {
      const NodeId t = next(q, b);
      if (t != kNoNode) pred[t].push_back(q);
    }
  std::deque<NodeId> queue;
  if (s.terminal() != kNoNode) {
    dist[s.terminal()] = 0;
    queue.push_back(s.terminal());
  }
  while (!queue.empty()) {
    const NodeId q = queue.front();
    queue.pop_front();
    for (NodeId p : pred[q])
      if (dist[p] == kInf) {
        dist[p] = dist[q] + 1;
        queue.push_back(p);
      }
  }
  auto escape = [&](NodeId q) {
    std::string w;
    while (!s.is_terminal(q)) {
      const NodeId z = next(q, 0);
      if (z != kNoNode && dist[z] + 1 == dist[q]) {
        w += '0';
        q = z;
      } else {
        w += '1';
        q = next(q, 1);
      }
    }
    return w;
  };

  // One token per coin node, tracking where it ends up following w.
  std::vector<NodeId> token(coins.begin(), coins.end());
  std::string w;
  while (true) {
    std::size_t pick = token.size();
    for (std::size_t i = 0; i < token.size(); ++i)
      if (!s.is_terminal(token[i])) {
        pick = i;
        break;
      }
    if (pick == token.size()) break;
    const std::string piece = escape(token[pick]);
    w += piece;
    for (NodeId& t : token) {
      if (s.is_terminal(t)) continue;
      const EndsUpIn e = ends_up_in(s, t, piece);
      if (e.kind == EndsUpIn::Kind::Undefined) throw std::logic_error("token entered a tau-cycle");
      t = e.node;
    }
  }
  res.ok = true;
  res.word = w;
  return res;
}

std::optional<Pattern> fit_template(const std::vector<std::int64_t>& indices,
                                    const std::vector<std::string>& words) {
  if (indices.size() != words.size() || words.size() < 3) return std::nullopt;
  const std::size_t m = words.size();
  const std::int64_t i1 = indices[m - 3];
  const std::string& w1 = words[m - 3];
  const std::string& w2 = words[m - 2];
  const std::string& w3 = words[m - 1];
  if (indices[m - 2] != i1 + 1 || indices[m - 1] != i1 + 2) return std::nullopt;
  const std::int64_t d1 = static_cast<std::int64_t>(w2.size()) - static_cast<std::int64_t>(w1.size());
  const std::int64_t d2 = static_cast<std::int64_t>(w3.size()) - static_cast<std::int64_t>(w2.size());
  if (d1 != d2 || d1 < 0) return std::nullopt;
  if (d1 == 0) {
    if (w1 != w2 || w2 != w3) return std::nullopt;
    return Pattern::templ(w3, "", "", 0);
  }
  const std::size_t d = static_cast<std::size_t>(d1);
  const std::string* ws[3] = {&w1, &w2, &w3};
  for (std::size_t gl = 0; gl <= w1.size(); ++gl)
    for (std::size_t al = 0; al + gl <= w1.size(); ++al) {
      const std::string alpha = w3.substr(0, al);
      const std::string gamma = w3.substr(w3.size() - gl);
      const std::string beta = w3.substr(al, d);
      bool ok = true;
      std::int64_t delta = 0;
      for (int j = 0; j < 3 && ok; ++j) {
        const std::string& w = *ws[j];
        if (w.compare(0, al, alpha) != 0 || w.compare(w.size() - gl, gl, gamma) != 0) {
          ok = false;
          break;
        }
        const std::string mid = w.substr(al, w.size() - al - gl);
        if (mid.size() % d != 0) {
          ok = false;
          break;
        }
        const std::size_t k = mid.size() / d;
        for (std::size_t r = 0; r < k && ok; ++r) ok = mid.compare(r * d, d, beta) == 0;
        const std::int64_t dj = i1 + j - static_cast<std::int64_t>(k);
        if (j == 0)
          delta = dj;
        else if (dj != delta)
          ok = false;
      }
      if (ok) return Pattern::templ(alpha, beta, gamma, delta);
    }
  return std::nullopt;
}

DriveResult drive_weakly_finite(std::shared_ptr<const Program> prog,
                                const std::vector<Instance>& instances, std::string index_param,
                                const DriveOptions& opts) {
  if (!prog) throw InvalidArgument("null program");
  if (instances.empty()) throw InvalidArgument("no instances given");
  if (!prog->is_deterministic())
    throw UnsupportedError("the weakly finite driver handles deterministic programs only");
  DriveResult res;

  if (index_param.empty()) {
    for (const Symbol& sym : prog->symbols) {
      if (sym.kind != SymbolKind::Param) continue;
      std::set<std::int64_t> values;
      for (const Instance& in : instances) {
        auto it = in.find(sym.name);
        if (it != in.end()) values.insert(it->second);
      }
      if (values.size() > 1 || (index_param.empty() && values.size() == 1 && !sym.hi))
        index_param = sym.name;
    }
  }
  if (index_param.empty()) throw InvalidArgument("cannot tell which parameter is the index");
  res.index_param = index_param;

  // Instances are independent until refinement, so build them up front.
  std::vector<std::optional<StateSpace>> spaces(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  auto build_one = [&](std::size_t k) {
    try {
      spaces[k] = build(prog, instances[k], opts.build);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < instances.size(); ++k) build_one(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t k = j; k < instances.size(); k += jobs) build_one(k);
      });
    for (auto& t : pool) t.join();
  }

  std::string base = opts.base_word;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const ResourceError& e) {
        res.status = DriveResult::Status::Budget;
        res.failed = k;
        res.message = e.what();
        return res;
      }
    }
    InstanceOutcome out;
    out.instance = instances[k];
    auto it = instances[k].find(index_param);
    if (it == instances[k].end())
      throw InvalidArgument("instance lacks the index parameter " + index_param);
    out.index = it->second;
    const StateSpace& s = *spaces[k];
    out.nodes = s.size();
    RefinementResult r = refine_finite(s, base, opts.refine);
    out.trace = std::move(r.trace);
    if (opts.oracle) out.oracle = as_terminating_deterministic(s).terminating;
    const auto status = out.trace.status;
    if (status == RefinementTrace::Status::Proven) {
      out.word = r.pattern.word;
      if (out.word.compare(0, base.size(), base) != 0)
        throw std::logic_error("instance word does not extend the base word");
      base = out.word;
    }
    res.instances.push_back(std::move(out));
    if (status == RefinementTrace::Status::Refuted) {
      res.status = DriveResult::Status::Refuted;
      res.failed = k;
      res.message = "instance refuted";
      return res;
    }
    if (status == RefinementTrace::Status::BudgetExhausted) {
      res.status = DriveResult::Status::Budget;
      res.failed = k;
      res.message = res.instances.back().trace.message;
      return res;
    }
  }

  std::vector<std::int64_t> idx;
  std::vector<std::string> words;
  for (const InstanceOutcome& o : res.instances) {
    idx.push_back(o.index);
    words.push_back(o.word);
  }
  res.guess = fit_template(idx, words);
  if (!res.guess) {
    res.status = DriveResult::Status::NoGuess;
    res.message = words.size() < 3 ? "fewer than three instances"
                                   : "no template fits the last three words";
    return res;
  }
  res.fit_from = res.instances.size() - 3;
  while (res.fit_from > 0 &&
         res.guess->expand(res.instances[res.fit_from - 1].index) ==
             res.instances[res.fit_from - 1].word)
    --res.fit_from;

  std::vector<char> ok(res.instances.size(), 0);
  auto verify = [&](std::size_t k) {
    try {
      ok[k] = check_simple_pattern(*spaces[k], res.guess->expand(res.instances[k].index),
                                   opts.refine.check)
                  .terminating();
    } catch (const ResourceError&) {
      ok[k] = 0;
    }
  };
  if (jobs == 1) {
    for (std::size_t k = 0; k < res.instances.size(); ++k) verify(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t k = j; k < res.instances.size(); k += jobs) verify(k);
      });
    for (auto& t : pool) t.join();
  }
  bool all = true;
  for (std::size_t k = 0; k < res.instances.size(); ++k) {
    res.instances[k].verified = ok[k] != 0;
    all = all && ok[k];
  }
  res.status = all ? DriveResult::Status::Guessed : DriveResult::Status::NoGuess;
  if (!all) res.message = "the guessed template fails on some instance";
  return res;
}

}  // namespace asterm
