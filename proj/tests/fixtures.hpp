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

// Hand-built automata shared by the tests.

#ifndef SPANEX_TESTS_FIXTURES_HPP_
#define SPANEX_TESTS_FIXTURES_HPP_

#include "spanex/vsa.hpp"

namespace spanex::testing {

inline Label Open(VarId v) { return Label::Ops({{v, false}}); }
inline Label Close(VarId v) { return Label::Ops({{v, true}}); }

// a* ⊢x a* ⊣x a* on three states.
inline VSetAutomaton ChainAutomaton() {
  VSetAutomaton a({"x"});
  StateId q0 = a.AddState(), q1 = a.AddState(), qf = a.AddState();
  a.set_initial(q0);
  a.set_final(qf);
  a.AddTransition(q0, Label::Terminal('a'), q0);
  a.AddTransition(q0, Open(0), q1);
  a.AddTransition(q1, Label::Terminal('a'), q1);
  a.AddTransition(q1, Close(0), qf);
  a.AddTransition(qf, Label::Terminal('a'), qf);
  return a;
}

// One accepting state looping on ⊢x, a and ⊣x.
inline VSetAutomaton LoopAutomaton() {
  VSetAutomaton a({"x"});
  StateId q = a.AddState();
  a.set_initial(q);
  a.set_final(q);
  a.AddTransition(q, Open(0), q);
  a.AddTransition(q, Label::Terminal('a'), q);
  a.AddTransition(q, Close(0), q);
  return a;
}

// Two open states joined by a-edges in both directions and a-loops, so a
// document a^n has 2^n accepting runs but a single tuple.
inline VSetAutomaton DiamondAutomaton() {
  VSetAutomaton a({"x"});
  StateId q0 = a.AddState(), q1 = a.AddState(), q2 = a.AddState(),
          qf = a.AddState();
  a.set_initial(q0);
  a.set_final(qf);
  a.AddTransition(q0, Open(0), q1);
  a.AddTransition(q0, Open(0), q2);
  a.AddTransition(q1, Close(0), qf);
  a.AddTransition(q2, Close(0), qf);
  a.AddTransition(q1, Label::Terminal('a'), q2);
  a.AddTransition(q2, Label::Terminal('a'), q1);
  a.AddTransition(q1, Label::Terminal('a'), q1);
  a.AddTransition(q2, Label::Terminal('a'), q2);
  return a;
}

}  // namespace spanex::testing

#endif  // SPANEX_TESTS_FIXTURES_HPP_
