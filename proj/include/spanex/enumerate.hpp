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

// Polynomial-delay enumeration of the tuples of a functional automaton on a
// document.
//
// The match graph has one layer per position 0..l of the document. A node
// (i, q) stands for state q right before symbol i+1 is read (or at the end,
// for i = l), after all variable operations at that position. Every edge
// into (i, q) carries the configuration of q as its letter, so each path
// from the start node spells the configuration sequence of one tuple.
// Tuples are produced in radix order of these sequences by a depth-first
// walk over sets of nodes.

#ifndef SPANEX_ENUMERATE_HPP_
#define SPANEX_ENUMERATE_HPP_

#include <algorithm>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "spanex/core.hpp"
#include "spanex/vsa.hpp"

namespace spanex {

class MatchGraph {
 public:
  static constexpr uint32_t kNoLetter = UINT32_MAX;

  MatchGraph(const VSetAutomaton &input, const Document &d) {
    vars_ = input.vars();
    length_ = d.length();
    VSetAutomaton a = Trim(input);
    if (a.IsEmpty()) return;
    RequireFunctional(a);
    std::vector<Configuration> conf = ComputeConfigurations(a);
    size_t n = a.num_states();

    // States that read a symbol, plus the final state.
    std::vector<char> ready(n, 0);
    for (const auto &t : a.transitions()) {
      if (t.label.IsSymbolic()) ready[t.from] = 1;
    }
    ready[a.final_state()] = 1;

    // Letters: distinct configurations of ready states, in canonical order.
    std::vector<Configuration> distinct;
    for (StateId q = 0; q < n; ++q) {
      if (ready[q]) distinct.push_back(conf[q]);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    letters_ = distinct;
    std::vector<uint32_t> letter_of(n, kNoLetter);
    for (StateId q = 0; q < n; ++q) {
      if (!ready[q]) continue;
      letter_of[q] = static_cast<uint32_t>(
          std::lower_bound(letters_.begin(), letters_.end(), conf[q]) -
          letters_.begin());
    }
    final_letter_ = letter_of[a.final_state()];

    std::vector<StateSet> ve = VariableClosure(a);
    for (auto &s : ve) {
      s.erase(std::remove_if(s.begin(), s.end(),
                             [&](StateId q) { return !ready[q]; }),
              s.end());
    }
    // Per distinct document symbol, the ready states reached from p by
    // reading it.
    std::unordered_map<Symbol, std::vector<StateSet>> step;
    auto step_for = [&](Symbol s) -> const std::vector<StateSet> & {
      auto it = step.find(s);
      if (it != step.end()) return it->second;
      std::vector<StateSet> tab(n);
      for (StateId p = 0; p < n; ++p) {
        if (ready[p]) tab[p] = UnionOf(ve, SymbolSuccessors(a, p, s));
      }
      return step.emplace(s, std::move(tab)).first->second;
    };

    // Forward layers.
    std::vector<StateSet> layers(length_ + 1);
    layers[0] = ve[a.initial()];
    std::vector<uint32_t> stamp(n, UINT32_MAX);
    for (size_t i = 0; i < length_; ++i) {
      const auto &tab = step_for(d.symbols()[i]);
      StateSet &next = layers[i + 1];
      for (StateId p : layers[i]) {
        for (StateId q : tab[p]) {
          if (stamp[q] != i) {
            stamp[q] = static_cast<uint32_t>(i);
            next.push_back(q);
          }
        }
      }
      std::sort(next.begin(), next.end());
    }

    // Backward pruning to nodes that reach (l, final).
    std::vector<StateSet> alive(length_ + 1);
    if (std::binary_search(layers[length_].begin(), layers[length_].end(),
                           a.final_state())) {
      alive[length_] = {a.final_state()};
    } else {
      return;
    }
    for (size_t i = length_; i-- > 0;) {
      const auto &tab = step_for(d.symbols()[i]);
      for (StateId p : layers[i]) {
        for (StateId q : tab[p]) {
          if (std::binary_search(alive[i + 1].begin(), alive[i + 1].end(), q)) {
            alive[i].push_back(p);
            break;
          }
        }
      }
      if (alive[i].empty()) return;
    }
    if (alive[0].empty()) return;

    // Node numbering: 0 is the start node, then layer by layer.
    std::vector<uint32_t> layer_base(length_ + 2, 1);
    for (size_t i = 0; i <= length_; ++i) {
      layer_base[i + 1] = layer_base[i] + static_cast<uint32_t>(alive[i].size());
    }
    size_t num_nodes = layer_base[length_ + 1];
    node_state_.assign(num_nodes, 0);
    node_layer_.assign(num_nodes, 0);
    for (size_t i = 0; i <= length_; ++i) {
      for (size_t k = 0; k < alive[i].size(); ++k) {
        node_state_[layer_base[i] + k] = alive[i][k];
        node_layer_[layer_base[i] + k] = static_cast<uint32_t>(i);
      }
    }
    auto node_of = [&](size_t layer, StateId q) -> uint32_t {
      const auto &v = alive[layer];
      auto it = std::lower_bound(v.begin(), v.end(), q);
      if (it == v.end() || *it != q) return UINT32_MAX;
      return layer_base[layer] + static_cast<uint32_t>(it - v.begin());
    };

    group_begin_.assign(num_nodes + 1, 0);
    std::vector<std::pair<uint32_t, uint32_t>> out;  // (letter, node)
    auto emit = [&](uint32_t node) {
      std::sort(out.begin(), out.end());
      group_begin_[node] = static_cast<uint32_t>(group_letter_.size());
      for (size_t k = 0; k < out.size(); ++k) {
        if (k == 0 || out[k].first != out[k - 1].first) {
          group_letter_.push_back(out[k].first);
          group_target_begin_.push_back(static_cast<uint32_t>(targets_.size()));
        }
        targets_.push_back(out[k].second);
      }
      out.clear();
    };
    for (StateId q : alive[0]) out.push_back({letter_of[q], node_of(0, q)});
    emit(0);
    for (size_t i = 0; i <= length_; ++i) {
      for (size_t k = 0; k < alive[i].size(); ++k) {
        uint32_t node = layer_base[i] + static_cast<uint32_t>(k);
        if (i < length_) {
          const auto &tab = step_for(d.symbols()[i]);
          for (StateId q : tab[alive[i][k]]) {
            uint32_t t = node_of(i + 1, q);
            if (t != UINT32_MAX) out.push_back({letter_of[q], t});
          }
        }
        emit(node);
      }
    }
    group_begin_[num_nodes] = static_cast<uint32_t>(group_letter_.size());
    group_target_begin_.push_back(static_cast<uint32_t>(targets_.size()));
    empty_ = false;
  }

  bool empty() const { return empty_; }
  size_t length() const { return length_; }
  size_t num_nodes() const { return node_state_.size(); }
  size_t num_edges() const { return targets_.size(); }
  const std::vector<std::string> &vars() const { return vars_; }
  const std::vector<Configuration> &letters() const { return letters_; }
  uint32_t final_letter() const { return final_letter_; }

  // Smallest letter on an edge leaving the node.
  uint32_t MinLetter(uint32_t node) const {
    return group_letter_[group_begin_[node]];
  }

  // Smallest letter on an edge leaving the node that is greater than
  // `letter`, or kNoLetter.
  uint32_t NextLetter(uint32_t node, uint32_t letter) const {
    auto b = group_letter_.begin() + group_begin_[node];
    auto e = group_letter_.begin() + group_begin_[node + 1];
    auto it = std::upper_bound(b, e, letter);
    return it == e ? kNoLetter : *it;
  }

  // Calls f(target) for every edge leaving the node with the letter.
  template <typename F>
  void ForEachTarget(uint32_t node, uint32_t letter, F f) const {
    auto b = group_letter_.begin() + group_begin_[node];
    auto e = group_letter_.begin() + group_begin_[node + 1];
    auto it = std::lower_bound(b, e, letter);
    if (it == e || *it != letter) return;
    size_t g = it - group_letter_.begin();
    for (uint32_t k = group_target_begin_[g]; k < group_target_begin_[g + 1];
         ++k) {
      f(targets_[k]);
    }
  }

  StateId node_state(uint32_t node) const { return node_state_[node]; }
  uint32_t node_layer(uint32_t node) const { return node_layer_[node]; }

 private:
  std::vector<std::string> vars_;
  size_t length_ = 0;
  bool empty_ = true;
  std::vector<Configuration> letters_;
  uint32_t final_letter_ = kNoLetter;
  std::vector<StateId> node_state_;
  std::vector<uint32_t> node_layer_;
  // Outgoing edges grouped by letter: node -> [group_begin_[node],
  // group_begin_[node+1]) in group_letter_; group g -> targets
  // [group_target_begin_[g], group_target_begin_[g+1]).
  std::vector<uint32_t> group_begin_;
  std::vector<uint32_t> group_letter_;
  std::vector<uint32_t> group_target_begin_;
  std::vector<uint32_t> targets_;
};

class Enumerator {
 public:
  Enumerator(const VSetAutomaton &a, const Document &d)
      : Enumerator(std::make_shared<const MatchGraph>(a, d)) {}

  explicit Enumerator(std::shared_ptr<const MatchGraph> g)
      : g_(std::move(g)), stamp_(g_->num_nodes(), 0) {
    size_t l = g_->length();
    kappa_.assign(l + 1, MatchGraph::kNoLetter);
    stack_.resize(std::max<size_t>(l, 1));
  }

  const MatchGraph &graph() const { return *g_; }

  // Advances to the next configuration sequence; false once exhausted.
  bool NextSequence() {
    if (done_) return false;
    if (g_->empty()) {
      done_ = true;
      return false;
    }
    if (!started_) {
      started_ = true;
      depth_ = 1;
      stack_[0].assign(1, 0);
      Track(0);
      MinString(0);
      return true;
    }
    if (!NextString()) {
      done_ = true;
      return false;
    }
    return true;
  }

  std::optional<SpanTuple> Next() {
    if (!NextSequence()) return std::nullopt;
    return CurrentTuple();
  }

  // Current letters k_0 .. k_l (indices into graph().letters()).
  const std::vector<uint32_t> &letters() const { return kappa_; }

  ConfigSequence CurrentSequence() const {
    ConfigSequence seq;
    for (uint32_t k : kappa_) seq.push_back(g_->letters()[k]);
    return seq;
  }

  SpanTuple CurrentTuple() const {
    SpanTuple t;
    const auto &vars = g_->vars();
    const auto &lets = g_->letters();
    for (size_t x = 0; x < vars.size(); ++x) {
      uint32_t start = 0, end = 0;
      for (size_t p = 0; p < kappa_.size(); ++p) {
        VarState s = lets[kappa_[p]][x];
        if (start == 0 && s != VarState::kWaiting) start = p + 1;
        if (s == VarState::kClosed) {
          end = p + 1;
          break;
        }
      }
      t.Set(vars[x], Span{start, end});
    }
    return t;
  }

  // Largest node set held on the stack so far.
  size_t max_frontier() const { return max_frontier_; }

 private:
  void Track(size_t i) { max_frontier_ = std::max(max_frontier_, stack_[i].size()); }

  // Pushes S_{i+1}: successors of S_i under the letter k_i.
  void PushSuccessors(size_t i) {
    ++generation_;
    auto &next = stack_[i + 1];
    next.clear();
    for (uint32_t v : stack_[i]) {
      g_->ForEachTarget(v, kappa_[i], [&](uint32_t t) {
        if (stamp_[t] != generation_) {
          stamp_[t] = generation_;
          next.push_back(t);
        }
      });
    }
    depth_ = i + 2;
    Track(i + 1);
  }

  void MinString(size_t from) {
    size_t l = g_->length();
    for (size_t i = from; i < l; ++i) {
      uint32_t best = MatchGraph::kNoLetter;
      for (uint32_t v : stack_[i]) best = std::min(best, g_->MinLetter(v));
      kappa_[i] = best;
      if (i + 1 < l) PushSuccessors(i);
    }
    kappa_[l] = g_->final_letter();
  }

  bool NextString() {
    size_t l = g_->length();
    for (size_t i = l; i-- > 0;) {
      uint32_t best = MatchGraph::kNoLetter;
      for (uint32_t v : stack_[i]) {
        best = std::min(best, g_->NextLetter(v, kappa_[i]));
      }
      if (best == MatchGraph::kNoLetter) {
        depth_ = i;
        continue;
      }
      kappa_[i] = best;
      if (i + 1 < l) PushSuccessors(i);
      MinString(i + 1);
      return true;
    }
    return false;
  }

  std::shared_ptr<const MatchGraph> g_;
  std::vector<std::vector<uint32_t>> stack_;
  std::vector<uint32_t> kappa_;
  std::vector<uint32_t> stamp_;
  uint32_t generation_ = 0;
  size_t depth_ = 0;
  size_t max_frontier_ = 0;
  bool started_ = false;
  bool done_ = false;
};

// Materializes every tuple of the automaton on the document.
inline SpanRelation EnumerateAll(const VSetAutomaton &a, const Document &d) {
  SpanRelation rel(a.vars());
  Enumerator e(a, d);
  while (auto t = e.Next()) rel.tuples.insert(rel.tuples.end(), *t);
  return rel;
}

}  // namespace spanex

#endif  // SPANEX_ENUMERATE_HPP_
