// Copyright 2026 The Spanex Authors
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

// Brute-force oracles, random instance generators and the query
// generators for the 3CNF and clique reductions.

#ifndef SPANEX_HARNESS_HPP_
#define SPANEX_HARNESS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spanex/core.hpp"
#include "spanex/key.hpp"
#include "spanex/query.hpp"
#include "spanex/regex.hpp"
#include "spanex/vsa.hpp"

namespace spanex {

constexpr size_t kOracleMaxVars = 3;
constexpr size_t kOracleMaxLength = 8;

// ---------------------------------------------------------------------------
// Candidate tuples and interleavings

namespace internal {

inline void CheckOracleLimits(size_t vars, size_t length) {
  if (vars > kOracleMaxVars || length > kOracleMaxLength) {
    throw ValidationError("oracle limited to " +
                          std::to_string(kOracleMaxVars) + " variables and " +
                          "documents of length " +
                          std::to_string(kOracleMaxLength));
  }
}

// Calls f(tuple) for every assignment of spans of d to the variables.
inline void ForEachCandidate(const std::vector<std::string> &vars,
                             const Document &d,
                             const std::function<void(const SpanTuple &)> &f) {
  std::vector<Span> spans = AllSpans(d);
  SpanTuple t;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == vars.size()) {
      f(t);
      return;
    }
    for (const auto &s : spans) {
      t.Set(vars[k], s);
      rec(k + 1);
    }
  };
  rec(0);
}

// Orders of the markers placed at one boundary in which every open precedes
// the close of the same variable.
inline std::vector<RefWord> BoundaryOrders(RefWord markers) {
  std::vector<RefWord> out;
  std::sort(markers.begin(), markers.end());
  do {
    bool ok = true;
    for (size_t i = 0; i < markers.size() && ok; ++i) {
      if (markers[i].kind != RefSymbol::kClose) continue;
      for (size_t j = i + 1; j < markers.size(); ++j) {
        if (markers[j].kind == RefSymbol::kOpen &&
            markers[j].var == markers[i].var) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(markers);
  } while (std::next_permutation(markers.begin(), markers.end()));
  return out;
}

// Per boundary 0..l, the possible marker orders for the tuple.
inline std::vector<std::vector<RefWord>> MarkerOrders(const SpanTuple &t,
                                                      const Document &d) {
  std::vector<RefWord> at(d.length() + 1);
  for (const auto &[name, span] : t.entries()) {
    at[span.start - 1].push_back(RefSymbol::Open(name));
    at[span.end - 1].push_back(RefSymbol::Close(name));
  }
  std::vector<std::vector<RefWord>> out;
  for (auto &m : at) out.push_back(BoundaryOrders(m));
  return out;
}

}  // namespace internal

// Every ref-word whose clean text is d and which encodes the tuple.
inline std::vector<RefWord> Interleavings(const SpanTuple &t,
                                          const Document &d) {
  auto orders = internal::MarkerOrders(t, d);
  std::vector<RefWord> out;
  RefWord cur;
  std::function<void(size_t)> rec = [&](size_t b) {
    size_t mark = cur.size();
    for (const auto &o : orders[b]) {
      cur.resize(mark);
      cur.insert(cur.end(), o.begin(), o.end());
      if (b == d.length()) {
        out.push_back(cur);
      } else {
        cur.push_back(RefSymbol::Terminal(d.symbols()[b]));
        rec(b + 1);
      }
    }
    cur.resize(mark);
  };
  rec(0);
  return out;
}

// Tuples of a formula on a document by testing every candidate tuple and
// every interleaving of its markers against the formula's ref-language.
inline SpanRelation OracleEnumerate(const Regex &r, const Document &d) {
  std::vector<std::string> vars = RegexVars(r);
  internal::CheckOracleLimits(vars.size(), d.length());
  SpanRelation rel(vars);
  internal::ForEachCandidate(vars, d, [&](const SpanTuple &t) {
    for (const auto &w : Interleavings(t, d)) {
      if (MatchRefWord(r, w)) {
        rel.tuples.insert(t);
        return;
      }
    }
  });
  return rel;
}

// Same for an automaton: the automaton is read as a plain NFA over terminals
// and markers, where a transition with several operations reads them in
// order (opens first, each group by variable name).
inline SpanRelation OracleEnumerate(const VSetAutomaton &a, const Document &d) {
  internal::CheckOracleLimits(a.num_vars(), d.length());
  SpanRelation rel(a.vars());
  if (a.num_states() == 0) return rel;

  // Plain NFA: letters are terminal / any / marker / epsilon.
  struct Edge {
    int kind;  // 0 eps, 1 terminal, 2 any, 3 marker
    Symbol symbol;
    RefSymbol marker;
    uint32_t to;
  };
  std::vector<std::vector<Edge>> nfa(a.num_states());
  auto fresh = [&]() {
    nfa.emplace_back();
    return static_cast<uint32_t>(nfa.size() - 1);
  };
  for (const auto &t : a.transitions()) {
    switch (t.label.kind) {
      case Label::kEpsilon:
        nfa[t.from].push_back({0, 0, {}, t.to});
        break;
      case Label::kTerminal:
        nfa[t.from].push_back({1, t.label.symbol, {}, t.to});
        break;
      case Label::kAny:
        nfa[t.from].push_back({2, 0, {}, t.to});
        break;
      case Label::kVarOps: {
        uint32_t cur = t.from;
        for (size_t i = 0; i < t.label.ops.size(); ++i) {
          const VarOp &op = t.label.ops[i];
          const std::string &name = a.vars()[op.var];
          RefSymbol m = op.close ? RefSymbol::Close(name) : RefSymbol::Open(name);
          uint32_t next = i + 1 == t.label.ops.size() ? t.to : fresh();
          nfa[cur].push_back({3, 0, m, next});
          cur = next;
        }
        break;
      }
    }
  }
  auto close = [&](std::set<uint32_t> s) {
    std::vector<uint32_t> stack(s.begin(), s.end());
    while (!stack.empty()) {
      uint32_t q = stack.back();
      stack.pop_back();
      for (const auto &e : nfa[q]) {
        if (e.kind == 0 && s.insert(e.to).second) stack.push_back(e.to);
      }
    }
    return s;
  };
  auto read = [&](const std::set<uint32_t> &s, const RefSymbol &x) {
    std::set<uint32_t> out;
    for (uint32_t q : s) {
      for (const auto &e : nfa[q]) {
        bool ok = x.IsTerminal()
                      ? (e.kind == 1 && e.symbol == x.symbol) || e.kind == 2
                      : e.kind == 3 && e.marker == x;
        if (ok) out.insert(e.to);
      }
    }
    return close(out);
  };
  std::set<uint32_t> start = close({a.initial()});
  internal::ForEachCandidate(a.vars(), d, [&](const SpanTuple &t) {
    auto orders = internal::MarkerOrders(t, d);
    // Union over marker orders at each boundary keeps the simulation exact.
    std::set<uint32_t> cur = start;
    for (size_t b = 0; b <= d.length() && !cur.empty(); ++b) {
      std::set<uint32_t> next;
      for (const auto &o : orders[b]) {
        std::set<uint32_t> s = cur;
        for (const auto &m : o) s = read(s, m);
        next.insert(s.begin(), s.end());
      }
      if (b < d.length()) next = read(next, RefSymbol::Terminal(d.symbols()[b]));
      cur = std::move(next);
    }
    if (cur.count(a.final_state())) rel.tuples.insert(t);
  });
  return rel;
}

// ---------------------------------------------------------------------------
// Relational oracles (nested loops)

inline SpanRelation RelProject(const SpanRelation &r,
                               const std::vector<std::string> &vars) {
  SpanRelation out(vars);
  for (const auto &t : r.tuples) out.tuples.insert(t.Project(out.variables));
  return out;
}

inline SpanRelation RelUnion(const SpanRelation &a, const SpanRelation &b) {
  if (a.variables != b.variables) throw ValidationError("union arity mismatch");
  SpanRelation out = a;
  out.tuples.insert(b.tuples.begin(), b.tuples.end());
  return out;
}

inline SpanRelation RelJoin(const SpanRelation &a, const SpanRelation &b) {
  std::vector<std::string> vars = a.variables;
  vars.insert(vars.end(), b.variables.begin(), b.variables.end());
  SpanRelation out(vars);
  for (const auto &ta : a.tuples) {
    for (const auto &tb : b.tuples) {
      bool ok = true;
      for (const auto &[name, span] : ta.entries()) {
        const Span *s = tb.Find(name);
        if (s && *s != span) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      SpanTuple t = ta;
      for (const auto &[name, span] : tb.entries()) t.Set(name, span);
      out.tuples.insert(t);
    }
  }
  return out;
}

inline SpanRelation RelSelectEqual(const SpanRelation &r, const std::string &x,
                                   const std::string &y, const Document &d) {
  SpanRelation out(r.variables);
  for (const auto &t : r.tuples) {
    if (d.Substring(t.Get(x)) == d.Substring(t.Get(y))) out.tuples.insert(t);
  }
  return out;
}

// Query evaluation straight from the definition, using the formula oracle
// for every atom.
inline SpanRelation OracleEvalCQ(const RegexCQ &q, const Document &d) {
  SpanRelation acc = OracleEnumerate(q.atoms[0], d);
  for (size_t k = 1; k < q.atoms.size(); ++k) {
    acc = RelJoin(acc, OracleEnumerate(q.atoms[k], d));
  }
  for (const auto &[x, y] : q.equalities) acc = RelSelectEqual(acc, x, y, d);
  return RelProject(acc, q.projection);
}

inline SpanRelation ToRelation(const std::vector<std::string> &vars,
                               const std::vector<SpanTuple> &rows) {
  SpanRelation r(vars);
  for (const auto &t : rows) r.Insert(t);
  return r;
}

// ---------------------------------------------------------------------------
// Random instances

using Rng = std::mt19937_64;

inline Document RandomDocument(Rng &rng, const std::u32string &alphabet,
                               size_t length) {
  std::u32string s;
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  for (size_t i = 0; i < length; ++i) s.push_back(alphabet[pick(rng)]);
  return Document(s);
}

// Every word over the alphabet of length at most max_len, shortest first.
inline std::vector<Document> AllDocuments(const std::u32string &alphabet,
                                          size_t max_len) {
  std::vector<Document> out = {Document()};
  std::vector<std::u32string> layer = {U""};
  for (size_t l = 1; l <= max_len; ++l) {
    std::vector<std::u32string> next;
    for (const auto &w : layer) {
      for (char32_t c : alphabet) next.push_back(w + c);
    }
    for (const auto &w : next) out.emplace_back(w);
    layer = std::move(next);
  }
  return out;
}

namespace internal {

inline Regex RandomLeaf(Rng &rng, const std::u32string &alphabet,
                        bool wildcard) {
  std::uniform_int_distribution<int> pick(0, 9);
  int k = pick(rng);
  if (k == 0) return re::Epsilon();
  if (k == 1 && wildcard) return re::Any();
  std::uniform_int_distribution<size_t> sym(0, alphabet.size() - 1);
  return re::Sym(alphabet[sym(rng)]);
}

inline Regex RandomVarFree(Rng &rng, int depth, const std::u32string &alphabet,
                           bool wildcard) {
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth <= 0 ? 0 : pick(rng);
  switch (k) {
    case 1:
    case 2:
      return re::Cat(RandomVarFree(rng, depth - 1, alphabet, wildcard),
                     RandomVarFree(rng, depth - 1, alphabet, wildcard));
    case 3:
      return re::Or(RandomVarFree(rng, depth - 1, alphabet, wildcard),
                    RandomVarFree(rng, depth - 1, alphabet, wildcard));
    case 4:
      return re::Star(RandomVarFree(rng, depth - 1, alphabet, wildcard));
    default:
      return RandomLeaf(rng, alphabet, wildcard);
  }
}

}  // namespace internal

// A formula that binds exactly `vars` in every word, so it is functional by
// construction. Depth counts nested operators.
inline Regex RandomFunctionalFormula(Rng &rng, int depth,
                                     std::vector<std::string> vars,
                                     const std::u32string &alphabet = U"ab",
                                     bool wildcard = true) {
  if (vars.empty()) {
    return internal::RandomVarFree(rng, depth, alphabet, wildcard);
  }
  std::uniform_int_distribution<int> pick(0, 3);
  int k = depth <= 0 ? 0 : pick(rng);
  std::shuffle(vars.begin(), vars.end(), rng);
  switch (k) {
    case 1: {
      // Split the variables between two factors.
      std::uniform_int_distribution<size_t> cut(0, vars.size());
      size_t c = cut(rng);
      std::vector<std::string> l(vars.begin(), vars.begin() + c);
      std::vector<std::string> r(vars.begin() + c, vars.end());
      return re::Cat(RandomFunctionalFormula(rng, depth - 1, l, alphabet, wildcard),
                     RandomFunctionalFormula(rng, depth - 1, r, alphabet, wildcard));
    }
    case 2:
      return re::Or(RandomFunctionalFormula(rng, depth - 1, vars, alphabet, wildcard),
                    RandomFunctionalFormula(rng, depth - 1, vars, alphabet, wildcard));
    default: {
      std::string x = vars.back();
      vars.pop_back();
      return re::Bind(x, RandomFunctionalFormula(rng, depth - 1, vars, alphabet,
                                                 wildcard));
    }
  }
}

// A formula with no functionality guarantee, over the given variable pool.
inline Regex RandomFormula(Rng &rng, int depth,
                           const std::vector<std::string> &pool,
                           const std::u32string &alphabet = U"ab") {
  std::uniform_int_distribution<int> pick(0, 6);
  int k = depth <= 0 ? 7 : pick(rng);
  switch (k) {
    case 0:
    case 1:
      return re::Cat(RandomFormula(rng, depth - 1, pool, alphabet),
                     RandomFormula(rng, depth - 1, pool, alphabet));
    case 2:
      return re::Or(RandomFormula(rng, depth - 1, pool, alphabet),
                    RandomFormula(rng, depth - 1, pool, alphabet));
    case 3:
      return re::Star(RandomFormula(rng, depth - 1, pool, alphabet));
    case 4:
    case 5:
      if (!pool.empty()) {
        std::uniform_int_distribution<size_t> v(0, pool.size() - 1);
        return re::Bind(pool[v(rng)], RandomFormula(rng, depth - 1, pool, alphabet));
      }
      [[fallthrough]];
    default: {
      std::uniform_int_distribution<int> leaf(0, 7);
      int l = leaf(rng);
      if (l == 0) return re::Empty();
      if (l == 1) return re::Epsilon();
      if (l == 2) return re::Any();
      std::uniform_int_distribution<size_t> sym(0, alphabet.size() - 1);
      return re::Sym(alphabet[sym(rng)]);
    }
  }
}

// A trimmed, non-empty functional automaton with at most `states` states.
// Every state gets a configuration up front; symbol and epsilon edges join
// states with equal configurations and operation edges move forward by the
// difference, so every run is valid.
inline VSetAutomaton RandomFunctionalAutomaton(
    Rng &rng, size_t states, const std::vector<std::string> &vars,
    size_t edges, const std::u32string &alphabet = U"ab") {
  if (states < 2) throw ValidationError("need at least two states");
  std::uniform_int_distribution<size_t> pick_state(0, states - 1);
  std::uniform_int_distribution<int> pick_var_state(0, 2);
  std::uniform_int_distribution<size_t> pick_sym(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> pick_kind(0, 9);
  for (;;) {
    VSetAutomaton a(vars);
    size_t v = a.num_vars();
    std::vector<Configuration> conf(states);
    for (size_t q = 0; q < states; ++q) {
      a.AddState();
      conf[q].resize(v);
      for (auto &s : conf[q]) s = static_cast<VarState>(pick_var_state(rng));
    }
    conf[0].assign(v, VarState::kWaiting);
    conf[states - 1].assign(v, VarState::kClosed);
    a.set_initial(0);
    a.set_final(static_cast<StateId>(states - 1));
    for (size_t e = 0; e < edges; ++e) {
      StateId p = static_cast<StateId>(pick_state(rng));
      StateId q = static_cast<StateId>(pick_state(rng));
      if (conf[p] == conf[q]) {
        int k = pick_kind(rng);
        if (k == 0) {
          a.AddTransition(p, Label::Epsilon(), q);
        } else if (k == 1) {
          a.AddTransition(p, Label::Any(), q);
        } else {
          a.AddTransition(p, Label::Terminal(alphabet[pick_sym(rng)]), q);
        }
        continue;
      }
      std::vector<VarOp> ops;
      bool forward = true;
      for (VarId x = 0; x < v && forward; ++x) {
        VarState from = conf[p][x], to = conf[q][x];
        if (to < from) forward = false;
        if (from == VarState::kWaiting && to != VarState::kWaiting) {
          ops.push_back({x, false});
        }
        if (from != VarState::kClosed && to == VarState::kClosed) {
          ops.push_back({x, true});
        }
      }
      if (forward) a.AddTransition(p, Label::Ops(ops), q);
    }
    VSetAutomaton t = Trim(a);
    if (!t.IsEmpty()) return t;
  }
}

// Every word of the ref-language of a formula with at most max_terminals
// terminals and max_letters letters in total.
inline std::set<RefWord> BoundedRefLanguage(const Regex &r, size_t max_terminals,
                                            size_t max_letters) {
  auto fits = [&](const RefWord &w) {
    return w.size() <= max_letters && Clean(w).size() <= max_terminals;
  };
  std::function<std::set<RefWord>(const Regex &)> lang =
      [&](const Regex &n) -> std::set<RefWord> {
    std::set<RefWord> out;
    switch (n->kind) {
      case RegexNode::kEmpty:
        break;
      case RegexNode::kEpsilon:
        out.insert(RefWord{});
        break;
      case RegexNode::kSymbol:
        out.insert({RefSymbol::Terminal(n->symbol)});
        break;
      case RegexNode::kWildcard:
        // Two representative symbols are enough for validity questions.
        out.insert({RefSymbol::Terminal('a')});
        out.insert({RefSymbol::Terminal('b')});
        break;
      case RegexNode::kDisjunction: {
        out = lang(n->left);
        auto b = lang(n->right);
        out.insert(b.begin(), b.end());
        break;
      }
      case RegexNode::kConcatenation: {
        auto a = lang(n->left);
        auto b = lang(n->right);
        for (const auto &x : a) {
          for (const auto &y : b) {
            RefWord w = x;
            w.insert(w.end(), y.begin(), y.end());
            if (fits(w)) out.insert(w);
          }
        }
        break;
      }
      case RegexNode::kStar: {
        auto a = lang(n->left);
        out.insert(RefWord{});
        std::set<RefWord> frontier = {RefWord{}};
        while (!frontier.empty()) {
          std::set<RefWord> next;
          for (const auto &x : frontier) {
            for (const auto &y : a) {
              RefWord w = x;
              w.insert(w.end(), y.begin(), y.end());
              if (fits(w) && out.insert(w).second) next.insert(w);
            }
          }
          frontier = std::move(next);
        }
        break;
      }
      case RegexNode::kBinding: {
        for (const auto &x : lang(n->left)) {
          RefWord w = {RefSymbol::Open(n->var)};
          w.insert(w.end(), x.begin(), x.end());
          w.push_back(RefSymbol::Close(n->var));
          if (fits(w)) out.insert(w);
        }
        break;
      }
    }
    return out;
  };
  return lang(r);
}

// ---------------------------------------------------------------------------
// 3CNF reduction

// Literals are +v or -v for variables 1..num_vars.
struct Cnf {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

inline Cnf RandomCnf(Rng &rng, int num_vars, int num_clauses) {
  Cnf f;
  f.num_vars = num_vars;
  std::uniform_int_distribution<int> var(1, num_vars);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int c = 0; c < num_clauses; ++c) {
    std::array<int, 3> cl;
    for (auto &lit : cl) lit = var(rng) * (sign(rng) ? 1 : -1);
    f.clauses.push_back(cl);
  }
  return f;
}

inline bool BruteForceSat(const Cnf &f) {
  for (uint32_t m = 0; m < (1u << f.num_vars); ++m) {
    bool all = true;
    for (const auto &cl : f.clauses) {
      bool any = false;
      for (int lit : cl) {
        bool val = (m >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == val) any = true;
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

struct GeneratedQuery {
  RegexUCQ query;
  Document document;
};

inline std::string CnfVarName(int v) { return "x" + std::to_string(v); }

// Boolean query that is true on the document "a" iff the formula is
// satisfiable. A variable set to 0 selects the empty span before the 'a',
// one set to 1 the empty span after it.
inline GeneratedQuery Gen3CnfQuery(const Cnf &f) {
  if (f.clauses.empty()) throw ValidationError("formula has no clauses");
  RegexCQ q;
  for (const auto &cl : f.clauses) {
    std::vector<int> vars;
    for (int lit : cl) {
      if (lit == 0 || std::abs(lit) > f.num_vars) {
        throw ValidationError("malformed clause literal " + std::to_string(lit));
      }
      vars.push_back(std::abs(lit));
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<Regex> options;
    for (uint32_t m = 0; m < (1u << vars.size()); ++m) {
      auto value = [&](int v) {
        size_t k = std::find(vars.begin(), vars.end(), v) - vars.begin();
        return static_cast<bool>((m >> k) & 1);
      };
      bool sat = false;
      for (int lit : cl) {
        if ((lit > 0) == value(std::abs(lit))) sat = true;
      }
      if (!sat) continue;
      Regex zeros = re::Epsilon();
      Regex ones = re::Epsilon();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        if (value(*it)) {
          ones = re::Bind(CnfVarName(*it), ones);
        } else {
          zeros = re::Bind(CnfVarName(*it), zeros);
        }
      }
      options.push_back(re::Cat(re::Cat(zeros, re::Sym('a')), ones));
    }
    q.atoms.push_back(re::OrAll(options));
  }
  RegexUCQ u;
  u.disjuncts.push_back(std::move(q));
  return {std::move(u), Document(U"a")};
}

// ---------------------------------------------------------------------------
// Clique reductions

struct Graph {
  int num_nodes = 0;
  std::set<std::pair<int, int>> edges;  // 1-based, first < second

  void AddEdge(int u, int v) {
    if (u == v) return;
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  bool HasEdge(int u, int v) const {
    return edges.count({std::min(u, v), std::max(u, v)}) > 0;
  }
};

inline Graph RandomGraph(Rng &rng, int nodes, double p) {
  Graph g;
  g.num_nodes = nodes;
  std::bernoulli_distribution coin(p);
  for (int u = 1; u <= nodes; ++u) {
    for (int v = u + 1; v <= nodes; ++v) {
      if (coin(rng)) g.AddEdge(u, v);
    }
  }
  return g;
}

inline bool BruteForceClique(const Graph &g, int k) {
  std::vector<int> pick;
  std::function<bool(int)> rec = [&](int next) {
    if (static_cast<int>(pick.size()) == k) return true;
    for (int v = next; v <= g.num_nodes; ++v) {
      bool ok = true;
      for (int u : pick) ok = ok && g.HasEdge(u, v);
      if (!ok) continue;
      pick.push_back(v);
      if (rec(v + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(1);
}

constexpr char32_t kEdgeOpen = U'⊢';
constexpr char32_t kEdgeSep = U'#';
constexpr char32_t kEdgeClose = U'⊣';

// Fixed-width binary code of a node over {a, b}.
inline std::u32string NodeCode(int v, int num_nodes) {
  int width = 1;
  while ((1 << width) < num_nodes) ++width;
  std::u32string out;
  for (int b = width - 1; b >= 0; --b) out.push_back(((v - 1) >> b) & 1 ? U'b' : U'a');
  return out;
}

// The edge list as ⊢u#v⊣ blocks in lexicographic order.
inline Document EdgeDocument(const Graph &g) {
  std::u32string s;
  for (const auto &[u, v] : g.edges) {
    s.push_back(kEdgeOpen);
    s += NodeCode(u, g.num_nodes);
    s.push_back(kEdgeSep);
    s += NodeCode(v, g.num_nodes);
    s.push_back(kEdgeClose);
  }
  return Document(s);
}

inline std::string EdgeVar(char side, int i, int j) {
  return std::string(1, side) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

namespace internal {

inline Regex AnyStar() { return re::Star(re::Any()); }
inline Regex CodeChars() { return re::Star(re::Or(re::Sym('a'), re::Sym('b'))); }

// Matches k increasing edge blocks, one per pair i < j of clique slots,
// binding the two endpoint codes of block (i, j) to x_i_j and y_i_j.
inline Regex EdgeSequence(int k) {
  std::vector<Regex> parts;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      parts.push_back(re::CatAll({AnyStar(), re::Sym(kEdgeOpen),
                                  re::Bind(EdgeVar('x', i, j), CodeChars()),
                                  re::Sym(kEdgeSep),
                                  re::Bind(EdgeVar('y', i, j), CodeChars()),
                                  re::Sym(kEdgeClose), AnyStar()}));
    }
  }
  return re::CatAll(parts);
}

}  // namespace internal

// Boolean query that is true on the edge document iff the graph has a
// k-clique: the edge sequence atom plus, per slot l, an atom forcing every
// occurrence of slot l to the same node code.
inline GeneratedQuery GenCliqueQuery(const Graph &g, int k) {
  if (k < 2) throw ValidationError("clique size must be at least 2");
  RegexCQ q;
  q.atoms.push_back(internal::EdgeSequence(k));
  for (int l = 1; l <= k; ++l) {
    std::vector<Regex> per_node;
    for (int v = 1; v <= g.num_nodes; ++v) {
      Regex code = re::Word(NodeCode(v, g.num_nodes));
      std::vector<Regex> parts;
      for (int i = 1; i < l; ++i) {
        parts.push_back(re::CatAll({internal::AnyStar(), re::Sym(kEdgeSep),
                                    re::Bind(EdgeVar('y', i, l), code),
                                    re::Sym(kEdgeClose), internal::AnyStar()}));
      }
      for (int j = l + 1; j <= k; ++j) {
        parts.push_back(re::CatAll({internal::AnyStar(), re::Sym(kEdgeOpen),
                                    re::Bind(EdgeVar('x', l, j), code),
                                    re::Sym(kEdgeSep), internal::AnyStar()}));
      }
      per_node.push_back(re::CatAll(parts));
    }
    q.atoms.push_back(re::OrAll(per_node));
  }
  RegexUCQ u;
  u.disjuncts.push_back(std::move(q));
  return {std::move(u), EdgeDocument(g)};
}

// Same question with one atom and string-equality selections chaining the
// occurrences of each slot.
inline GeneratedQuery GenStreqCliqueQuery(const Graph &g, int k) {
  if (k < 2) throw ValidationError("clique size must be at least 2");
  RegexCQ q;
  q.atoms.push_back(internal::EdgeSequence(k));
  for (int l = 1; l <= k; ++l) {
    std::vector<std::string> slot;
    for (int i = 1; i < l; ++i) slot.push_back(EdgeVar('y', i, l));
    for (int j = l + 1; j <= k; ++j) slot.push_back(EdgeVar('x', l, j));
    for (size_t m = 0; m + 1 < slot.size(); ++m) {
      q.equalities.push_back({slot[m], slot[m + 1]});
    }
  }
  RegexUCQ u;
  u.disjuncts.push_back(std::move(q));
  return {std::move(u), EdgeDocument(g)};
}

// ---------------------------------------------------------------------------
// Key attribute by brute force

// Searches all documents over the alphabet up to max_len for two distinct
// tuples that agree on the key.
inline std::optional<KeyWitness> BruteForceKeyViolation(
    const VSetAutomaton &a, const std::string &key,
    const std::u32string &alphabet, size_t max_len) {
  for (const auto &d : AllDocuments(alphabet, max_len)) {
    SpanRelation r = OracleEnumerate(a, d);
    std::map<Span, SpanTuple> by_key;
    for (const auto &t : r.tuples) {
      auto [it, fresh] = by_key.emplace(t.Get(key), t);
      if (!fresh) return KeyWitness{d, it->second, t};
    }
  }
  return std::nullopt;
}

}  // namespace spanex

#endif  // SPANEX_HARNESS_HPP_
