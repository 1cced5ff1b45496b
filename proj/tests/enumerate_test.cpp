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

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "spanex/algebra.hpp"
#include "spanex/enumerate.hpp"
#include "spanex/harness.hpp"

namespace spanex {
namespace {

using testing::ChainAutomaton;
using testing::DiamondAutomaton;

std::vector<SpanTuple> All(const VSetAutomaton &a, const Document &d) {
  std::vector<SpanTuple> out;
  Enumerator e(a, d);
  while (auto t = e.Next()) out.push_back(*t);
  return out;
}

std::string Sequence(const Enumerator &e) {
  std::string out;
  for (const auto &c : e.CurrentSequence()) out += ConfigurationToString(c);
  return out;
}

TEST(MatchGraphTest, ChainOnTwoSymbols) {
  MatchGraph g(ChainAutomaton(), Document::FromUtf8("aa"));
  ASSERT_FALSE(g.empty());
  // Start node, three states on layers 0 and 1, the final state on layer 2.
  EXPECT_EQ(g.num_nodes(), 8u);
  EXPECT_EQ(g.letters().size(), 3u);
  EXPECT_EQ(ConfigurationToString(g.letters()[g.MinLetter(0)]), "(w)");
  EXPECT_EQ(ConfigurationToString(g.letters()[g.final_letter()]), "(c)");
  // Nodes on the last inner layer lead only to the final state.
  for (uint32_t v = 1; v < g.num_nodes(); ++v) {
    if (g.node_layer(v) == 1) {
      EXPECT_EQ(g.MinLetter(v), g.final_letter());
      EXPECT_EQ(g.NextLetter(v, g.final_letter()), MatchGraph::kNoLetter);
    }
  }
}

TEST(MatchGraphTest, EmptyResultHasNoNodes) {
  MatchGraph g(ChainAutomaton(), Document::FromUtf8("ab"));
  EXPECT_TRUE(g.empty());
  Enumerator e(ChainAutomaton(), Document::FromUtf8("ab"));
  EXPECT_FALSE(e.Next().has_value());
  EXPECT_FALSE(e.Next().has_value());
}

TEST(EnumeratorTest, ChainOrderIsFrozen) {
  Enumerator e(ChainAutomaton(), Document::FromUtf8("aa"));
  std::vector<std::string> seqs;
  std::vector<SpanTuple> tuples;
  while (e.NextSequence()) {
    seqs.push_back(Sequence(e));
    tuples.push_back(e.CurrentTuple());
  }
  EXPECT_EQ(seqs, (std::vector<std::string>{"(w)(w)(c)", "(w)(o)(c)",
                                            "(w)(c)(c)", "(o)(o)(c)",
                                            "(o)(c)(c)", "(c)(c)(c)"}));
  EXPECT_EQ(tuples, (std::vector<SpanTuple>{{{"x", {3, 3}}},
                                            {{"x", {2, 3}}},
                                            {{"x", {2, 2}}},
                                            {{"x", {1, 3}}},
                                            {{"x", {1, 2}}},
                                            {{"x", {1, 1}}}}));
  EXPECT_FALSE(e.NextSequence());
}

TEST(EnumeratorTest, WorkedExampleTenTuples) {
  auto out = All(CompileRegex(ParseRegex("a* x{a*} a*")),
                 Document::FromUtf8("aaa"));
  std::set<SpanTuple> got(out.begin(), out.end());
  std::set<SpanTuple> expect;
  for (uint32_t i = 1; i <= 4; ++i) {
    for (uint32_t j = i; j <= 4; ++j) expect.insert({{"x", {i, j}}});
  }
  EXPECT_EQ(out.size(), 10u);
  EXPECT_EQ(got, expect);
}

TEST(EnumeratorTest, DiamondSingleTuple) {
  Enumerator e(DiamondAutomaton(), Document::FromUtf8("aaa"));
  ASSERT_TRUE(e.NextSequence());
  EXPECT_EQ(Sequence(e), "(o)(o)(o)(c)");
  EXPECT_EQ(e.CurrentTuple(), (SpanTuple{{"x", {1, 4}}}));
  EXPECT_FALSE(e.NextSequence());
}

TEST(EnumeratorTest, DiamondExponentialPathsCollapse) {
  auto out = All(DiamondAutomaton(), Document(std::u32string(16, U'a')));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (SpanTuple{{"x", {1, 17}}}));
}

TEST(EnumeratorTest, EmptyDocument) {
  auto out = All(CompileRegex(ParseRegex("x{.*}")), Document());
  EXPECT_EQ(out, (std::vector<SpanTuple>{{{"x", {1, 1}}}}));
  auto none = All(CompileRegex(ParseRegex("x{.+}")), Document());
  EXPECT_TRUE(none.empty());
  auto bool_true = All(CompileRegex(ParseRegex("ε")), Document());
  EXPECT_EQ(bool_true, (std::vector<SpanTuple>{SpanTuple{}}));
}

TEST(EnumeratorTest, VariableFreeAutomaton) {
  VSetAutomaton a = CompileRegex(ParseRegex("a .*"));
  EXPECT_EQ(All(a, Document::FromUtf8("ab")).size(), 1u);
  EXPECT_TRUE(All(a, Document::FromUtf8("ba")).empty());
}

TEST(EnumeratorTest, SingleSpanSelectorHasUnitFrontier) {
  Enumerator e(CompileRegex(ParseRegex(".* x{.*} .*")),
               Document(std::u32string(30, U'q')));
  size_t count = 0;
  while (e.NextSequence()) ++count;
  EXPECT_EQ(count, 31u * 32u / 2u);
  EXPECT_EQ(e.max_frontier(), 1u);
}

TEST(EnumeratorTest, RejectsNonFunctional) {
  EXPECT_THROW(Enumerator(testing::LoopAutomaton(), Document::FromUtf8("a")),
               NonFunctionalError);
}

// Output equals the ref-word oracle, has no duplicates, and comes in
// strictly increasing radix order.
TEST(EnumeratorTest, AgreesWithOracleProperty) {
  Rng rng(101);
  for (int iter = 0; iter < 300; ++iter) {
    VSetAutomaton a =
        iter % 2 == 0
            ? CompileRegex(RandomFunctionalFormula(rng, 4, {"x", "y"}))
            : RandomFunctionalAutomaton(rng, 6, {"x", "y"}, 14);
    Document d = RandomDocument(rng, U"ab", rng() % 7);
    Enumerator e(a, d);
    std::vector<SpanTuple> out;
    std::vector<ConfigSequence> seqs;
    while (e.NextSequence()) {
      out.push_back(e.CurrentTuple());
      seqs.push_back(e.CurrentSequence());
    }
    for (size_t i = 1; i < seqs.size(); ++i) {
      ASSERT_LT(seqs[i - 1], seqs[i]);
      ASSERT_TRUE(RadixLess(out[i - 1], out[i]));
    }
    for (size_t i = 0; i < out.size(); ++i) {
      ASSERT_EQ(TupleToConfigSequence(out[i], a.vars(), d.length()), seqs[i]);
    }
    SpanRelation got(a.vars());
    for (const auto &t : out) got.Insert(t);
    ASSERT_EQ(got.size(), out.size());
    ASSERT_EQ(got, OracleEnumerate(a, d)) << DumpVsa(a) << d.ToUtf8();
  }
}

TEST(EnumeratorTest, SharedGraphRestarts) {
  auto g = std::make_shared<const MatchGraph>(ChainAutomaton(),
                                              Document::FromUtf8("aaa"));
  size_t first = 0, second = 0;
  Enumerator a(g), b(g);
  while (a.Next()) ++first;
  while (b.Next()) ++second;
  EXPECT_EQ(first, 10u);
  EXPECT_EQ(second, 10u);
}

}  // namespace
}  // namespace spanex
