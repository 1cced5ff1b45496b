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

// Key attribute test for functional automata.
//
// Two copies of the automaton run in lockstep over the same string. Each
// copy sits at a state from which the next symbol is read, so the pair of
// states gives the two configurations at the current position. Pairs must
// agree on the key variable; a flag records whether the two configuration
// sequences have differed anywhere. The variable is not a key iff both
// copies can reach the final state with the flag set.

#ifndef SPANEX_KEY_HPP_
#define SPANEX_KEY_HPP_

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "spanex/core.hpp"
#include "spanex/vsa.hpp"

namespace spanex {

struct KeyWitness {
  Document document;
  SpanTuple first;
  SpanTuple second;
};

struct KeyResult {
  bool is_key = true;
  std::optional<KeyWitness> witness;
};

inline KeyResult IsKeyAttribute(const VSetAutomaton &input,
                                const std::string &key) {
  if (!input.VarIndex(key)) {
    throw ValidationError("key variable " + key + " not in automaton");
  }
  VSetAutomaton a = Trim(input);
  KeyResult result;
  if (a.IsEmpty() || a.num_vars() == 1) return result;
  RequireFunctional(a);
  std::vector<Configuration> conf = ComputeConfigurations(a);
  VarId kx = a.RequireVar(key);
  size_t n = a.num_states();

  // Effective alphabet: the literal symbols plus one fresh symbol standing
  // for every other symbol, which only wildcard edges read.
  std::set<Symbol> lits = a.Symbols();
  std::vector<Symbol> sigma(lits.begin(), lits.end());
  Symbol fresh = 'a';
  while (lits.count(fresh)) ++fresh;
  sigma.push_back(fresh);

  std::vector<StateSet> ve = VariableClosure(a);
  // move[s][p]: states reachable from p by reading symbol s and then
  // following epsilon and variable transitions.
  std::vector<std::vector<StateSet>> move(sigma.size(),
                                          std::vector<StateSet>(n));
  for (size_t s = 0; s < sigma.size(); ++s) {
    for (StateId p = 0; p < n; ++p) {
      move[s][p] = UnionOf(ve, SymbolSuccessors(a, p, sigma[s]));
    }
  }

  auto index = [&](int flag, StateId q1, StateId q2) {
    return (static_cast<size_t>(flag) * n + q1) * n + q2;
  };
  const size_t kNone = SIZE_MAX;
  size_t total = 2 * n * n;
  std::vector<size_t> parent(total, kNone);
  std::vector<int> via(total, -1);  // symbol index, -1 for start nodes
  std::vector<char> seen(total, 0);
  std::deque<size_t> queue;

  auto agree = [&](StateId q1, StateId q2) {
    return conf[q1][kx] == conf[q2][kx];
  };
  for (StateId q1 : ve[a.initial()]) {
    for (StateId q2 : ve[a.initial()]) {
      if (!agree(q1, q2)) continue;
      int flag = conf[q1] != conf[q2];
      size_t id = index(flag, q1, q2);
      if (!seen[id]) {
        seen[id] = 1;
        queue.push_back(id);
      }
    }
  }
  size_t goal = index(1, a.final_state(), a.final_state());
  while (!queue.empty() && !seen[goal]) {
    size_t id = queue.front();
    queue.pop_front();
    int flag = static_cast<int>(id / (n * n));
    StateId p1 = static_cast<StateId>((id / n) % n);
    StateId p2 = static_cast<StateId>(id % n);
    for (size_t s = 0; s < sigma.size(); ++s) {
      for (StateId q1 : move[s][p1]) {
        for (StateId q2 : move[s][p2]) {
          if (!agree(q1, q2)) continue;
          int nf = flag | (conf[q1] != conf[q2]);
          size_t nid = index(nf, q1, q2);
          if (seen[nid]) continue;
          seen[nid] = 1;
          parent[nid] = id;
          via[nid] = static_cast<int>(s);
          queue.push_back(nid);
        }
      }
    }
  }
  if (!seen[goal]) return result;

  std::vector<size_t> path;
  for (size_t id = goal; id != kNone; id = parent[id]) path.push_back(id);
  std::reverse(path.begin(), path.end());
  std::u32string text;
  ConfigSequence seq1, seq2;
  for (size_t id : path) {
    if (via[id] >= 0) text.push_back(sigma[via[id]]);
    seq1.push_back(conf[(id / n) % n]);
    seq2.push_back(conf[id % n]);
  }
  result.is_key = false;
  result.witness = KeyWitness{Document(text),
                              ConfigSequenceToTuple(seq1, a.vars()),
                              ConfigSequenceToTuple(seq2, a.vars())};
  return result;
}

}  // namespace spanex

#endif  // SPANEX_KEY_HPP_
