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

// Variable-set automata with set-labeled variable transitions.

#ifndef SPANEX_VSA_HPP_
#define SPANEX_VSA_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanex/core.hpp"

namespace spanex {

using StateId = uint32_t;
using VarId = uint32_t;

// Raised when an automaton is not functional.
class NonFunctionalError : public Error {
 public:
  NonFunctionalError(const std::string &msg, StateId state, std::string var)
      : Error(msg), state_(state), var_(std::move(var)) {}

  StateId state() const { return state_; }
  const std::string &var() const { return var_; }

 private:
  StateId state_;
  std::string var_;
};

// A single variable operation: open or close of the variable with the given
// index in the automaton's sorted variable list.
struct VarOp {
  VarId var = 0;
  bool close = false;

  // Opens come before closes, each group by variable index.
  auto operator<=>(const VarOp &o) const {
    if (close != o.close) return close <=> o.close;
    return var <=> o.var;
  }
  bool operator==(const VarOp &) const = default;
};

struct Label {
  enum Kind : uint8_t { kEpsilon, kTerminal, kAny, kVarOps };
  Kind kind = kEpsilon;
  Symbol symbol = 0;
  std::vector<VarOp> ops;  // sorted, for kVarOps

  static Label Epsilon() { return {kEpsilon, 0, {}}; }
  static Label Terminal(Symbol s) { return {kTerminal, s, {}}; }
  static Label Any() { return {kAny, 0, {}}; }
  static Label Ops(std::vector<VarOp> ops) {
    std::sort(ops.begin(), ops.end());
    ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
    return {kVarOps, 0, std::move(ops)};
  }

  bool IsSymbolic() const { return kind == kTerminal || kind == kAny; }
  auto operator<=>(const Label &) const = default;
  bool operator==(const Label &) const = default;
};

struct Transition {
  StateId from;
  Label label;
  StateId to;
};

class VSetAutomaton {
 public:
  VSetAutomaton() = default;
  explicit VSetAutomaton(std::vector<std::string> vars)
      : vars_(SortedUnique(std::move(vars))) {}

  const std::vector<std::string> &vars() const { return vars_; }
  size_t num_vars() const { return vars_.size(); }

  std::optional<VarId> VarIndex(const std::string &name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
    if (it == vars_.end() || *it != name) return std::nullopt;
    return static_cast<VarId>(it - vars_.begin());
  }

  VarId RequireVar(const std::string &name) const {
    auto v = VarIndex(name);
    if (!v) throw ValidationError("unknown variable " + name);
    return *v;
  }

  StateId AddState() {
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<StateId>(out_.size() - 1);
  }

  size_t num_states() const { return out_.size(); }
  size_t num_transitions() const { return transitions_.size(); }

  StateId initial() const { return initial_; }
  StateId final_state() const { return final_; }
  void set_initial(StateId q) {
    CheckState(q);
    initial_ = q;
  }
  void set_final(StateId q) {
    CheckState(q);
    final_ = q;
  }

  void AddTransition(StateId from, Label label, StateId to) {
    CheckState(from);
    CheckState(to);
    if (label.kind == Label::kVarOps) {
      if (label.ops.empty()) label = Label::Epsilon();
      for (const auto &op : label.ops) {
        if (op.var >= vars_.size()) {
          throw ValidationError("variable index out of range");
        }
      }
    }
    uint32_t id = static_cast<uint32_t>(transitions_.size());
    transitions_.push_back({from, std::move(label), to});
    out_[from].push_back(id);
    in_[to].push_back(id);
  }

  const std::vector<Transition> &transitions() const { return transitions_; }
  const Transition &transition(uint32_t id) const { return transitions_[id]; }
  const std::vector<uint32_t> &out(StateId q) const { return out_[q]; }
  const std::vector<uint32_t> &in(StateId q) const { return in_[q]; }

  // Literal symbols on terminal transitions.
  std::set<Symbol> Symbols() const {
    std::set<Symbol> s;
    for (const auto &t : transitions_) {
      if (t.label.kind == Label::kTerminal) s.insert(t.label.symbol);
    }
    return s;
  }

  // True when no accepting run exists at all: the final state is not
  // reachable from the initial one.
  bool IsEmpty() const {
    if (out_.empty()) return true;
    std::vector<char> seen(num_states(), 0);
    std::vector<StateId> stack = {initial_};
    seen[initial_] = 1;
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      if (q == final_) return false;
      for (uint32_t id : out_[q]) {
        StateId t = transitions_[id].to;
        if (!seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
    return true;
  }

  // Canonical automaton with no accepting run: two states and no transitions.
  static VSetAutomaton EmptyAutomaton(std::vector<std::string> vars) {
    VSetAutomaton a(std::move(vars));
    a.initial_ = a.AddState();
    a.final_ = a.AddState();
    return a;
  }

 private:
  void CheckState(StateId q) const {
    if (q >= out_.size()) {
      throw std::out_of_range("state " + std::to_string(q) + " out of range");
    }
  }

  std::vector<std::string> vars_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<uint32_t>> out_;
  std::vector<std::vector<uint32_t>> in_;
  StateId initial_ = 0;
  StateId final_ = 0;
};

inline std::string LabelToString(const Label &l,
                                 const std::vector<std::string> &vars) {
  switch (l.kind) {
    case Label::kEpsilon:
      return "eps";
    case Label::kAny:
      return "any";
    case Label::kTerminal: {
      std::string out = "sym:";
      switch (l.symbol) {
        case '\\':
          return out + "\\\\";
        case '\n':
          return out + "\\n";
        case '\t':
          return out + "\\t";
        case '\r':
          return out + "\\r";
        default:
          AppendUtf8(&out, l.symbol);
          return out;
      }
    }
    case Label::kVarOps: {
      std::string out = "ops:[";
      for (size_t i = 0; i < l.ops.size(); ++i) {
        if (i > 0) out += ",";
        out += (l.ops[i].close ? "⊣" : "⊢") + vars[l.ops[i].var];
      }
      return out + "]";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Trimming

// Keeps the states that are reachable from the initial state and co-reach
// the final state. State ids are renumbered densely in their old order.
inline VSetAutomaton Trim(const VSetAutomaton &a) {
  size_t n = a.num_states();
  if (n == 0) return VSetAutomaton::EmptyAutomaton(a.vars());
  auto sweep = [&](StateId start, bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack = {start};
    seen[start] = 1;
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      const auto &edges = forward ? a.out(q) : a.in(q);
      for (uint32_t id : edges) {
        const Transition &t = a.transition(id);
        StateId next = forward ? t.to : t.from;
        if (!seen[next]) {
          seen[next] = 1;
          stack.push_back(next);
        }
      }
    }
    return seen;
  };
  std::vector<char> fwd = sweep(a.initial(), true);
  std::vector<char> bwd = sweep(a.final_state(), false);
  if (!fwd[a.final_state()] || !bwd[a.initial()]) {
    return VSetAutomaton::EmptyAutomaton(a.vars());
  }
  VSetAutomaton out(a.vars());
  std::vector<StateId> remap(n, UINT32_MAX);
  for (StateId q = 0; q < n; ++q) {
    if (fwd[q] && bwd[q]) remap[q] = out.AddState();
  }
  out.set_initial(remap[a.initial()]);
  out.set_final(remap[a.final_state()]);
  for (const auto &t : a.transitions()) {
    if (remap[t.from] != UINT32_MAX && remap[t.to] != UINT32_MAX) {
      out.AddTransition(remap[t.from], t.label, remap[t.to]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configurations

namespace internal {

// Applies a set of operations to a configuration. An open and a close of the
// same variable in one set move it from waiting to closed. On failure
// returns the message and the offending variable.
struct OpsError {
  std::string message;
  VarId var;
};

inline std::optional<OpsError> ApplyOps(const std::vector<VarOp> &ops,
                                        const std::vector<std::string> &vars,
                                        Configuration *c) {
  for (const auto &op : ops) {
    VarState &s = (*c)[op.var];
    const std::string &name = vars[op.var];
    if (!op.close) {
      if (s != VarState::kWaiting) {
        return OpsError{"variable " + name + " reopened", op.var};
      }
      s = VarState::kOpen;
    } else {
      if (s == VarState::kWaiting) {
        return OpsError{"variable " + name + " closed before open", op.var};
      }
      if (s == VarState::kClosed) {
        return OpsError{"variable " + name + " closed twice", op.var};
      }
      s = VarState::kClosed;
    }
  }
  return std::nullopt;
}

}  // namespace internal

// Configuration of every state of a trimmed automaton, derived by a
// breadth-first sweep from the all-waiting initial state. Throws
// NonFunctionalError when two runs disagree or an operation is invalid.
inline std::vector<Configuration> ComputeConfigurations(const VSetAutomaton &a) {
  size_t n = a.num_states();
  std::vector<Configuration> conf(n);
  std::vector<char> known(n, 0);
  if (n == 0) return conf;
  conf[a.initial()] = Configuration(a.num_vars(), VarState::kWaiting);
  known[a.initial()] = 1;
  std::deque<StateId> queue = {a.initial()};
  while (!queue.empty()) {
    StateId p = queue.front();
    queue.pop_front();
    for (uint32_t id : a.out(p)) {
      const Transition &t = a.transition(id);
      Configuration next = conf[p];
      if (t.label.kind == Label::kVarOps) {
        auto err = internal::ApplyOps(t.label.ops, a.vars(), &next);
        if (err) {
          throw NonFunctionalError(
              "not functional: " + err->message + " on transition " +
                  std::to_string(t.from) + " -> " + std::to_string(t.to),
              t.to, a.vars()[err->var]);
        }
      }
      if (!known[t.to]) {
        known[t.to] = 1;
        conf[t.to] = std::move(next);
        queue.push_back(t.to);
      } else if (conf[t.to] != next) {
        std::string var;
        for (size_t k = 0; k < next.size(); ++k) {
          if (next[k] != conf[t.to][k]) {
            var = a.vars()[k];
            break;
          }
        }
        throw NonFunctionalError("not functional: state " +
                                     std::to_string(t.to) +
                                     " reached with configurations " +
                                     ConfigurationToString(conf[t.to]) +
                                     " and " + ConfigurationToString(next),
                                 t.to, var);
      }
    }
  }
  // Unreachable states (only in untrimmed input) get the all-closed
  // configuration so callers never see an empty vector.
  for (StateId q = 0; q < n; ++q) {
    if (!known[q]) conf[q] = Configuration(a.num_vars(), VarState::kClosed);
  }
  return conf;
}

struct FunctionalCheck {
  bool functional = true;
  std::string message;
  std::optional<StateId> state;
  std::string var;
};

// Trims, derives configurations, and requires the final configuration to be
// all-closed. An automaton with no accepting run is functional.
inline FunctionalCheck CheckFunctionalVsa(const VSetAutomaton &a) {
  VSetAutomaton t = Trim(a);
  if (t.IsEmpty()) return {};
  try {
    std::vector<Configuration> conf = ComputeConfigurations(t);
    const Configuration &f = conf[t.final_state()];
    for (size_t k = 0; k < f.size(); ++k) {
      if (f[k] != VarState::kClosed) {
        return {false,
                "not functional: variable " + t.vars()[k] +
                    " not closed at the final state",
                t.final_state(), t.vars()[k]};
      }
    }
  } catch (const NonFunctionalError &e) {
    return {false, e.what(), e.state(), e.var()};
  }
  return {};
}

inline void RequireFunctional(const VSetAutomaton &a) {
  FunctionalCheck c = CheckFunctionalVsa(a);
  if (!c.functional) {
    throw NonFunctionalError(c.message, c.state.value_or(0), c.var);
  }
}

// ---------------------------------------------------------------------------
// Closures

using StateSet = std::vector<StateId>;  // sorted, unique

namespace internal {

template <typename Pred>
std::vector<StateSet> ClosureOver(const VSetAutomaton &a, Pred follow) {
  size_t n = a.num_states();
  std::vector<StateSet> out(n);
  std::vector<uint32_t> stamp(n, UINT32_MAX);
  std::vector<StateId> stack;
  for (StateId p = 0; p < n; ++p) {
    StateSet &set = out[p];
    stack.assign(1, p);
    stamp[p] = p;
    while (!stack.empty()) {
      StateId q = stack.back();
      stack.pop_back();
      set.push_back(q);
      for (uint32_t id : a.out(q)) {
        const Transition &t = a.transition(id);
        if (follow(t.label) && stamp[t.to] != p) {
          stamp[t.to] = p;
          stack.push_back(t.to);
        }
      }
    }
    std::sort(set.begin(), set.end());
  }
  return out;
}

}  // namespace internal

// States reachable by epsilon transitions only.
inline std::vector<StateSet> EpsilonClosure(const VSetAutomaton &a) {
  return internal::ClosureOver(
      a, [](const Label &l) { return l.kind == Label::kEpsilon; });
}

// States reachable by epsilon and variable transitions.
inline std::vector<StateSet> VariableClosure(const VSetAutomaton &a) {
  return internal::ClosureOver(a, [](const Label &l) {
    return l.kind == Label::kEpsilon || l.kind == Label::kVarOps;
  });
}

inline StateSet UnionOf(const std::vector<StateSet> &closure,
                        const StateSet &states) {
  StateSet out;
  for (StateId q : states) {
    out.insert(out.end(), closure[q].begin(), closure[q].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Direct successors of p on the symbol, through literal and wildcard edges.
inline StateSet SymbolSuccessors(const VSetAutomaton &a, StateId p, Symbol s) {
  StateSet out;
  for (uint32_t id : a.out(p)) {
    const Transition &t = a.transition(id);
    if ((t.label.kind == Label::kTerminal && t.label.symbol == s) ||
        t.label.kind == Label::kAny) {
      out.push_back(t.to);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Successors through wildcard edges only.
inline StateSet AnySuccessors(const VSetAutomaton &a, StateId p) {
  StateSet out;
  for (uint32_t id : a.out(p)) {
    const Transition &t = a.transition(id);
    if (t.label.kind == Label::kAny) out.push_back(t.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Closure tables of an automaton. The terminal step for a symbol is the
// epsilon closure of its direct successors; wildcard edges contribute to
// every symbol. Symbols outside the alphabet behave like `other`, which
// only follows wildcard edges.
struct ClosureTables {
  std::vector<StateSet> eps;
  std::vector<StateSet> var;
  std::vector<Symbol> alphabet;
  std::map<Symbol, std::vector<StateSet>> step;  // per symbol in alphabet
  std::vector<StateSet> other;                   // wildcard-only step

  const std::vector<StateSet> &StepFor(Symbol s) const {
    auto it = step.find(s);
    return it == step.end() ? other : it->second;
  }
};

inline ClosureTables ComputeClosures(const VSetAutomaton &a,
                                     const std::set<Symbol> &alphabet) {
  ClosureTables t;
  t.eps = EpsilonClosure(a);
  t.var = VariableClosure(a);
  t.alphabet.assign(alphabet.begin(), alphabet.end());
  size_t n = a.num_states();
  for (Symbol s : t.alphabet) {
    std::vector<StateSet> &tab = t.step[s];
    tab.resize(n);
    for (StateId p = 0; p < n; ++p) {
      tab[p] = UnionOf(t.eps, SymbolSuccessors(a, p, s));
    }
  }
  t.other.resize(n);
  for (StateId p = 0; p < n; ++p) t.other[p] = UnionOf(t.eps, AnySuccessors(a, p));
  return t;
}

// ---------------------------------------------------------------------------
// Dump format
//
//   vsa v=<comma separated vars> n=<states>
//   init <q>
//   final <q>
//   <from> <label> <to>
//
// Labels: eps, any, sym:<symbol> (with \\, \n, \t, \r escapes), ops:[⊢x,⊣y].

inline std::string DumpVsa(const VSetAutomaton &a) {
  std::ostringstream out;
  out << "vsa v=";
  for (size_t i = 0; i < a.vars().size(); ++i) {
    if (i > 0) out << ",";
    out << a.vars()[i];
  }
  out << " n=" << a.num_states() << "\n";
  out << "init " << a.initial() << "\n";
  out << "final " << a.final_state() << "\n";
  for (const auto &t : a.transitions()) {
    out << t.from << " " << LabelToString(t.label, a.vars()) << " " << t.to
        << "\n";
  }
  return out.str();
}

inline VSetAutomaton ParseVsaDump(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &why) {
    throw ValidationError("dump line " + std::to_string(lineno) + ": " + why);
  };
  auto parse_num = [&](const std::string &s) -> uint32_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      fail("bad number '" + s + "'");
    }
    return static_cast<uint32_t>(std::stoul(s));
  };
  if (!std::getline(in, line)) fail("missing header");
  ++lineno;
  if (line.rfind("vsa v=", 0) != 0) fail("bad header");
  size_t npos = line.rfind(" n=");
  if (npos == std::string::npos || npos < 6) fail("bad header");
  std::string vlist = line.substr(6, npos - 6);
  std::vector<std::string> vars;
  for (size_t i = 0; i < vlist.size();) {
    size_t j = vlist.find(',', i);
    if (j == std::string::npos) j = vlist.size();
    vars.push_back(vlist.substr(i, j - i));
    i = j + 1;
  }
  uint32_t n = parse_num(line.substr(npos + 3));
  VSetAutomaton a(vars);
  if (a.vars() != vars) fail("variables not sorted and unique");
  for (uint32_t i = 0; i < n; ++i) a.AddState();
  bool have_init = false, have_final = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("init ", 0) == 0) {
      a.set_initial(parse_num(line.substr(5)));
      have_init = true;
      continue;
    }
    if (line.rfind("final ", 0) == 0) {
      a.set_final(parse_num(line.substr(6)));
      have_final = true;
      continue;
    }
    size_t first = line.find(' ');
    size_t last = line.rfind(' ');
    if (first == std::string::npos || first == last) fail("bad transition");
    uint32_t from = parse_num(line.substr(0, first));
    uint32_t to = parse_num(line.substr(last + 1));
    std::string label = line.substr(first + 1, last - first - 1);
    if (label == "eps") {
      a.AddTransition(from, Label::Epsilon(), to);
    } else if (label == "any") {
      a.AddTransition(from, Label::Any(), to);
    } else if (label.rfind("sym:", 0) == 0) {
      std::string body = label.substr(4);
      Symbol s;
      if (body == "\\\\") {
        s = '\\';
      } else if (body == "\\n") {
        s = '\n';
      } else if (body == "\\t") {
        s = '\t';
      } else if (body == "\\r") {
        s = '\r';
      } else {
        std::u32string u = DecodeUtf8(body);
        if (u.size() != 1) fail("symbol label must hold one symbol");
        s = u[0];
      }
      a.AddTransition(from, Label::Terminal(s), to);
    } else if (label.rfind("ops:[", 0) == 0 && label.back() == ']') {
      std::string body = label.substr(5, label.size() - 6);
      std::vector<VarOp> ops;
      for (size_t i = 0; i < body.size();) {
        size_t j = body.find(',', i);
        if (j == std::string::npos) j = body.size();
        std::string item = body.substr(i, j - i);
        i = j + 1;
        bool close;
        if (item.rfind("⊢", 0) == 0) {
          close = false;
        } else if (item.rfind("⊣", 0) == 0) {
          close = true;
        } else {
          fail("bad operation '" + item + "'");
        }
        std::string name = item.substr(std::string("⊢").size());
        auto v = a.VarIndex(name);
        if (!v) fail("unknown variable '" + name + "'");
        ops.push_back({*v, close});
      }
      a.AddTransition(from, Label::Ops(ops), to);
    } else {
      fail("bad label '" + label + "'");
    }
  }
  if (!have_init || !have_final) fail("missing init or final line");
  return a;
}

}  // namespace spanex

#endif  // SPANEX_VSA_HPP_
