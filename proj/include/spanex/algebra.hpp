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

// Automaton constructions: regex compilation, projection, union, natural
// join, strict expansion and string-equality selection.

#ifndef SPANEX_ALGEBRA_HPP_
#define SPANEX_ALGEBRA_HPP_

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spanex/core.hpp"
#include "spanex/regex.hpp"
#include "spanex/vsa.hpp"

namespace spanex {

// ---------------------------------------------------------------------------
// Regex compilation

namespace internal {

class ThompsonBuilder {
 public:
  explicit ThompsonBuilder(VSetAutomaton *a) : a_(a) {}

  std::pair<StateId, StateId> Build(const Regex &r) {
    StateId s = a_->AddState();
    StateId e = s;
    switch (r->kind) {
      case RegexNode::kEmpty:
        e = a_->AddState();
        break;
      case RegexNode::kEpsilon:
        e = a_->AddState();
        a_->AddTransition(s, Label::Epsilon(), e);
        break;
      case RegexNode::kSymbol:
        e = a_->AddState();
        a_->AddTransition(s, Label::Terminal(r->symbol), e);
        break;
      case RegexNode::kWildcard:
        e = a_->AddState();
        a_->AddTransition(s, Label::Any(), e);
        break;
      case RegexNode::kDisjunction: {
        auto [ls, le] = Build(r->left);
        auto [rs, rend] = Build(r->right);
        e = a_->AddState();
        a_->AddTransition(s, Label::Epsilon(), ls);
        a_->AddTransition(s, Label::Epsilon(), rs);
        a_->AddTransition(le, Label::Epsilon(), e);
        a_->AddTransition(rend, Label::Epsilon(), e);
        break;
      }
      case RegexNode::kConcatenation: {
        auto [ls, le] = Build(r->left);
        auto [rs, rend] = Build(r->right);
        a_->AddTransition(s, Label::Epsilon(), ls);
        a_->AddTransition(le, Label::Epsilon(), rs);
        e = rend;
        break;
      }
      case RegexNode::kStar: {
        auto [is, ie] = Build(r->left);
        e = a_->AddState();
        a_->AddTransition(s, Label::Epsilon(), is);
        a_->AddTransition(s, Label::Epsilon(), e);
        a_->AddTransition(ie, Label::Epsilon(), is);
        a_->AddTransition(ie, Label::Epsilon(), e);
        break;
      }
      case RegexNode::kBinding: {
        VarId v = a_->RequireVar(r->var);
        auto [is, ie] = Build(r->left);
        e = a_->AddState();
        a_->AddTransition(s, Label::Ops({{v, false}}), is);
        a_->AddTransition(ie, Label::Ops({{v, true}}), e);
        break;
      }
    }
    return {s, e};
  }

 private:
  VSetAutomaton *a_;
};

}  // namespace internal

// Thompson-style translation of a functional formula. Throws
// NonFunctionalError for formulas that are not functional.
inline VSetAutomaton CompileRegex(const Regex &r) {
  FunctionalityReport rep = CheckFunctionalRegex(r);
  if (!rep.functional) {
    std::string var = rep.violations.empty() ? "" : rep.violations[0].var;
    throw NonFunctionalError(RegexToString(r) + ": " + rep.ToString(), 0, var);
  }
  VSetAutomaton a(RegexVars(r));
  internal::ThompsonBuilder b(&a);
  auto [s, e] = b.Build(r);
  a.set_initial(s);
  a.set_final(e);
  return a;
}

// ---------------------------------------------------------------------------
// Projection

// Keeps only the operations of the given variables; transitions whose
// operation set becomes empty turn into epsilon transitions.
inline VSetAutomaton Project(const VSetAutomaton &a,
                             const std::vector<std::string> &keep) {
  std::vector<std::string> y = SortedUnique(keep);
  for (const auto &v : y) {
    if (!a.VarIndex(v)) {
      throw ValidationError("projection variable " + v +
                            " not in automaton variables");
    }
  }
  VSetAutomaton out(y);
  std::vector<int> remap(a.num_vars(), -1);
  for (size_t k = 0; k < y.size(); ++k) remap[a.RequireVar(y[k])] = k;
  for (size_t q = 0; q < a.num_states(); ++q) out.AddState();
  if (a.num_states() == 0) return VSetAutomaton::EmptyAutomaton(y);
  out.set_initial(a.initial());
  out.set_final(a.final_state());
  for (const auto &t : a.transitions()) {
    if (t.label.kind != Label::kVarOps) {
      out.AddTransition(t.from, t.label, t.to);
      continue;
    }
    std::vector<VarOp> ops;
    for (const auto &op : t.label.ops) {
      if (remap[op.var] >= 0) {
        ops.push_back({static_cast<VarId>(remap[op.var]), op.close});
      }
    }
    out.AddTransition(t.from, ops.empty() ? Label::Epsilon() : Label::Ops(ops),
                      t.to);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Union

inline VSetAutomaton Union(const std::vector<VSetAutomaton> &parts) {
  if (parts.empty()) throw ValidationError("union of no automata");
  const auto &vars = parts[0].vars();
  for (const auto &p : parts) {
    if (p.vars() != vars) {
      throw ValidationError("union operands have different variable sets");
    }
  }
  VSetAutomaton out(vars);
  StateId init = out.AddState();
  StateId fin = out.AddState();
  out.set_initial(init);
  out.set_final(fin);
  for (const auto &p : parts) {
    StateId base = static_cast<StateId>(out.num_states());
    for (size_t q = 0; q < p.num_states(); ++q) out.AddState();
    if (p.num_states() == 0) continue;
    for (const auto &t : p.transitions()) {
      out.AddTransition(base + t.from, t.label, base + t.to);
    }
    out.AddTransition(init, Label::Epsilon(), base + p.initial());
    out.AddTransition(base + p.final_state(), Label::Epsilon(), fin);
  }
  return out;
}

inline VSetAutomaton Union(const VSetAutomaton &a, const VSetAutomaton &b) {
  return Union(std::vector<VSetAutomaton>{a, b});
}

// ---------------------------------------------------------------------------
// Join

namespace internal {

// States that either read a symbol or are final; a run between two symbols
// always ends in one of these.
inline std::vector<char> ReadyStates(const VSetAutomaton &a) {
  std::vector<char> ready(a.num_states(), 0);
  for (const auto &t : a.transitions()) {
    if (t.label.IsSymbolic()) ready[t.from] = 1;
  }
  if (a.num_states() > 0) ready[a.final_state()] = 1;
  return ready;
}

// Operations (in the target variable numbering) that move configuration
// `from` to configuration `to`.
inline void OpsBetween(const Configuration &from, const Configuration &to,
                       const std::vector<VarId> &remap,
                       std::vector<VarOp> *ops) {
  for (size_t k = 0; k < from.size(); ++k) {
    if (from[k] == to[k]) continue;
    if (from[k] == VarState::kWaiting) ops->push_back({remap[k], false});
    if (to[k] == VarState::kClosed) ops->push_back({remap[k], true});
  }
}

}  // namespace internal

// Natural join of two functional automata: a product that synchronizes on
// symbols and moves both copies through their variable operations at once,
// keeping shared variables in agreement.
inline VSetAutomaton Join(const VSetAutomaton &left, const VSetAutomaton &right) {
  std::vector<std::string> all = left.vars();
  all.insert(all.end(), right.vars().begin(), right.vars().end());
  all = SortedUnique(all);
  VSetAutomaton a1 = Trim(left);
  VSetAutomaton a2 = Trim(right);
  if (a1.IsEmpty() || a2.IsEmpty()) return VSetAutomaton::EmptyAutomaton(all);
  RequireFunctional(a1);
  RequireFunctional(a2);

  VSetAutomaton out(all);
  std::vector<VarId> remap1, remap2;
  for (const auto &v : a1.vars()) remap1.push_back(out.RequireVar(v));
  for (const auto &v : a2.vars()) remap2.push_back(out.RequireVar(v));
  std::vector<std::pair<VarId, VarId>> shared;
  for (VarId i = 0; i < a1.num_vars(); ++i) {
    if (auto j = a2.VarIndex(a1.vars()[i])) shared.push_back({i, *j});
  }

  std::vector<Configuration> c1 = ComputeConfigurations(a1);
  std::vector<Configuration> c2 = ComputeConfigurations(a2);
  std::set<Symbol> alphabet = a1.Symbols();
  for (Symbol s : a2.Symbols()) alphabet.insert(s);
  ClosureTables t1 = ComputeClosures(a1, alphabet);
  ClosureTables t2 = ComputeClosures(a2, alphabet);
  std::vector<char> ready1 = internal::ReadyStates(a1);
  std::vector<char> ready2 = internal::ReadyStates(a2);

  auto consistent = [&](StateId p1, StateId p2) {
    for (const auto &[i, j] : shared) {
      if (c1[p1][i] != c2[p2][j]) return false;
    }
    return true;
  };

  size_t n2 = a2.num_states();
  std::unordered_map<uint64_t, StateId> ids;
  std::deque<std::pair<StateId, StateId>> queue;
  auto state_of = [&](StateId p1, StateId p2) {
    uint64_t key = static_cast<uint64_t>(p1) * n2 + p2;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId id = out.AddState();
    ids.emplace(key, id);
    queue.push_back({p1, p2});
    return id;
  };

  StateId start = state_of(a1.initial(), a2.initial());
  out.set_initial(start);
  for (StateId q1 : t1.eps[a1.initial()]) {
    for (StateId q2 : t2.eps[a2.initial()]) {
      if (q1 == a1.initial() && q2 == a2.initial()) continue;
      out.AddTransition(start, Label::Epsilon(), state_of(q1, q2));
    }
  }

  std::vector<VarOp> ops;
  while (!queue.empty()) {
    auto [p1, p2] = queue.front();
    queue.pop_front();
    StateId from = ids[static_cast<uint64_t>(p1) * n2 + p2];
    for (Symbol s : t1.alphabet) {
      const auto &s1 = t1.step[s][p1];
      if (s1.empty()) continue;
      const auto &s2 = t2.step[s][p2];
      for (StateId q1 : s1) {
        for (StateId q2 : s2) {
          out.AddTransition(from, Label::Terminal(s), state_of(q1, q2));
        }
      }
    }
    if (!t1.other[p1].empty()) {
      for (StateId q1 : t1.other[p1]) {
        for (StateId q2 : t2.other[p2]) {
          out.AddTransition(from, Label::Any(), state_of(q1, q2));
        }
      }
    }
    for (StateId q1 : t1.var[p1]) {
      if (!ready1[q1]) continue;
      bool moved1 = c1[q1] != c1[p1];
      for (StateId q2 : t2.var[p2]) {
        if (!ready2[q2]) continue;
        if (!moved1 && c2[q2] == c2[p2]) continue;
        if (!consistent(q1, q2)) continue;
        ops.clear();
        internal::OpsBetween(c1[p1], c1[q1], remap1, &ops);
        internal::OpsBetween(c2[p2], c2[q2], remap2, &ops);
        out.AddTransition(from, Label::Ops(ops), state_of(q1, q2));
      }
    }
  }
  auto fin = ids.find(static_cast<uint64_t>(a1.final_state()) * n2 +
                      a2.final_state());
  if (fin == ids.end()) return VSetAutomaton::EmptyAutomaton(all);
  out.set_final(fin->second);
  return Trim(out);
}

inline VSetAutomaton JoinMany(const std::vector<VSetAutomaton> &parts) {
  if (parts.empty()) throw ValidationError("join of no automata");
  VSetAutomaton acc = Trim(parts[0]);
  for (size_t i = 1; i < parts.size(); ++i) acc = Trim(Join(acc, parts[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// Strict expansion

// Replaces every transition carrying several operations by a chain of
// single-operation transitions, opens before closes, each by variable name.
inline VSetAutomaton ExpandStrict(const VSetAutomaton &a) {
  VSetAutomaton out(a.vars());
  for (size_t q = 0; q < a.num_states(); ++q) out.AddState();
  if (a.num_states() == 0) return VSetAutomaton::EmptyAutomaton(a.vars());
  out.set_initial(a.initial());
  out.set_final(a.final_state());
  for (const auto &t : a.transitions()) {
    if (t.label.kind != Label::kVarOps || t.label.ops.size() <= 1) {
      out.AddTransition(t.from, t.label, t.to);
      continue;
    }
    StateId cur = t.from;
    for (size_t i = 0; i < t.label.ops.size(); ++i) {
      StateId next =
          i + 1 == t.label.ops.size() ? t.to : out.AddState();
      out.AddTransition(cur, Label::Ops({t.label.ops[i]}), next);
      cur = next;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// String equality

using Selection = std::pair<std::string, std::string>;

namespace internal {

inline bool SameFactor(const std::u32string &d, uint32_t s1, uint32_t s2,
                       uint32_t len) {
  for (uint32_t k = 0; k < len; ++k) {
    if (d[s1 - 1 + k] != d[s2 - 1 + k]) return false;
  }
  return true;
}

// All assignments of spans to the members of one class such that every
// member selects the same string.
inline std::vector<std::vector<Span>> ClassAssignments(const Document &doc,
                                                       size_t members) {
  const std::u32string &d = doc.symbols();
  uint32_t l = static_cast<uint32_t>(d.size());
  std::vector<std::vector<Span>> out;
  for (uint32_t len = 0; len <= l; ++len) {
    for (uint32_t s1 = 1; s1 + len <= l + 1; ++s1) {
      std::vector<uint32_t> starts;
      for (uint32_t s = 1; s + len <= l + 1; ++s) {
        if (SameFactor(d, s1, s, len)) starts.push_back(s);
      }
      std::vector<Span> row(members);
      row[0] = {s1, s1 + len};
      std::function<void(size_t)> fill = [&](size_t m) {
        if (m == members) {
          out.push_back(row);
          return;
        }
        for (uint32_t s : starts) {
          row[m] = {s, s + len};
          fill(m + 1);
        }
      };
      fill(1);
    }
  }
  return out;
}

}  // namespace internal

// Automaton over the selection variables whose tuples on a document of
// length |d| are exactly the span assignments that satisfy every equality
// selection on d. Each assignment is a path of wildcard transitions with
// the variable operations at the chosen positions; paths share prefixes.
inline VSetAutomaton BuildEqualityAutomaton(
    const std::vector<Selection> &selections, const Document &d) {
  if (selections.empty()) throw ValidationError("no equality selections");
  std::vector<std::string> names;
  for (const auto &[x, y] : selections) {
    names.push_back(x);
    names.push_back(y);
  }
  names = SortedUnique(names);
  VSetAutomaton out(names);

  std::vector<size_t> parent(names.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (const auto &[x, y] : selections) {
    size_t a = out.RequireVar(x), b = out.RequireVar(y);
    parent[find(a)] = find(b);
  }
  std::map<size_t, std::vector<VarId>> classes;
  for (size_t i = 0; i < names.size(); ++i) {
    classes[find(i)].push_back(static_cast<VarId>(i));
  }
  std::vector<std::vector<VarId>> members;
  std::vector<std::vector<std::vector<Span>>> options;
  for (auto &[root, m] : classes) {
    members.push_back(m);
    options.push_back(internal::ClassAssignments(d, m.size()));
  }

  uint32_t l = static_cast<uint32_t>(d.length());
  StateId root = out.AddState();
  StateId fin = out.AddState();
  out.set_initial(root);
  out.set_final(fin);
  std::vector<std::map<std::vector<VarOp>, StateId>> ops_child(2);
  std::vector<StateId> any_child(2, UINT32_MAX);
  std::vector<char> linked(2, 0);
  auto new_state = [&]() {
    StateId q = out.AddState();
    ops_child.emplace_back();
    any_child.push_back(UINT32_MAX);
    linked.push_back(0);
    return q;
  };

  std::vector<Span> spans(names.size());
  std::vector<std::vector<VarOp>> at(l + 1);
  auto insert_path = [&]() {
    for (auto &v : at) v.clear();
    for (VarId v = 0; v < names.size(); ++v) {
      at[spans[v].start - 1].push_back({v, false});
      at[spans[v].end - 1].push_back({v, true});
    }
    StateId cur = root;
    for (uint32_t b = 0; b <= l; ++b) {
      if (!at[b].empty()) {
        Label lab = Label::Ops(at[b]);
        auto it = ops_child[cur].find(lab.ops);
        if (it == ops_child[cur].end()) {
          StateId q = new_state();
          out.AddTransition(cur, lab, q);
          ops_child[cur].emplace(lab.ops, q);
          cur = q;
        } else {
          cur = it->second;
        }
      }
      if (b < l) {
        if (any_child[cur] == UINT32_MAX) {
          StateId q = new_state();
          out.AddTransition(cur, Label::Any(), q);
          any_child[cur] = q;
        }
        cur = any_child[cur];
      }
    }
    if (!linked[cur]) {
      linked[cur] = 1;
      out.AddTransition(cur, Label::Epsilon(), fin);
    }
  };

  std::function<void(size_t)> product = [&](size_t c) {
    if (c == members.size()) {
      insert_path();
      return;
    }
    for (const auto &row : options[c]) {
      for (size_t k = 0; k < row.size(); ++k) spans[members[c][k]] = row[k];
      product(c + 1);
    }
  };
  product(0);
  return out;
}

// Restricts the tuples of an automaton to those satisfying the equality
// selections on the given document.
inline VSetAutomaton ApplySelections(const VSetAutomaton &a,
                                     const std::vector<Selection> &selections,
                                     const Document &d) {
  if (selections.empty()) return Trim(a);
  for (const auto &[x, y] : selections) {
    if (!a.VarIndex(x) || !a.VarIndex(y)) {
      throw ValidationError("selection " + x + " == " + y +
                            " uses a variable outside the automaton");
    }
  }
  return Trim(Join(a, BuildEqualityAutomaton(selections, d)));
}

}  // namespace spanex

#endif  // SPANEX_ALGEBRA_HPP_
