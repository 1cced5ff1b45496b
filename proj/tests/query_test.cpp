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

#include <cstdlib>

#include "gtest/gtest.h"
#include "spanex/harness.hpp"
#include "spanex/query.hpp"

namespace spanex {
namespace {

std::set<SpanTuple> RunQuery(const std::string &query,
                             const std::string &doc, EvalOptions::Strategy strategy) {
  EvalOptions opt;
  opt.strategy = strategy;
  auto s = Eval(ParseQuery(query), Document::FromUtf8(doc), opt);
  auto rows = Drain(s.get());
  std::set<SpanTuple> out(rows.begin(), rows.end());
  EXPECT_EQ(out.size(), rows.size()) << "duplicate output for " << query;
  return out;
}

TEST(QueryParseTest, SingleAtom) {
  RegexUCQ q = ParseQuery("SELECT x FROM /a* x{a*} a*/");
  ASSERT_EQ(q.disjuncts.size(), 1u);
  EXPECT_EQ(q.projection(), (std::vector<std::string>{"x"}));
  ASSERT_EQ(q.disjuncts[0].atoms.size(), 1u);
  EXPECT_EQ(RegexToString(q.disjuncts[0].atoms[0]), "a* x{a*} a*");
  EXPECT_FALSE(q.IsBoolean());
}

TEST(QueryParseTest, ManyAtomsEqualitiesAndUnion) {
  RegexUCQ q = ParseQuery(
      "-- pairs of equal words\n"
      "select y, x from /.* x{a+} .*/, /.* y{a+} .*/ where x == y\n"
      "UNION SELECT x, y FROM /x{b} y{b}/");
  ASSERT_EQ(q.disjuncts.size(), 2u);
  EXPECT_EQ(q.projection(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(q.disjuncts[0].atoms.size(), 2u);
  EXPECT_EQ(q.disjuncts[0].equalities,
            (std::vector<Selection>{{"x", "y"}}));
}

TEST(QueryParseTest, SixAtomShape) {
  RegexUCQ q = ParseQuery(
      "SELECT x FROM /.* x{.*} .*/, /.* y{.*} z{.*} .*/, /.*/, /.* y{.*} .*/, "
      "/.* z{a*} .*/, /.* x{.*} w{.*} .*/");
  EXPECT_EQ(q.disjuncts[0].atoms.size(), 6u);
  RelationalView v = MapToRelational(q.disjuncts[0]);
  ASSERT_EQ(v.atoms.size(), 6u);
  EXPECT_EQ(v.atoms[1].relation, "R2");
  EXPECT_EQ(v.atoms[1].attributes, (std::vector<std::string>{"y", "z"}));
  EXPECT_EQ(v.ToString().substr(0, 10), "project(x)");
}

TEST(QueryParseTest, EscapedSlash) {
  RegexUCQ q = ParseQuery("SELECT x FROM /x{a\\/b}/");
  EXPECT_TRUE(RegexEqual(q.disjuncts[0].atoms[0],
                         re::Bind("x", re::Word(U"a/b"))));
}

TEST(QueryParseTest, Boolean) {
  RegexUCQ q = ParseQuery("SELECT () FROM /.* a .*/");
  EXPECT_TRUE(q.IsBoolean());
}

TEST(QueryParseTest, Errors) {
  EXPECT_THROW(ParseQuery(""), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x /a/"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a}"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a/"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x, x FROM /x{a}/"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a}/ WHERE x = x"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a}/ garbage"), SyntaxError);
  EXPECT_THROW(ParseQuery("SELECT y FROM /x{a}/"), ValidationError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a}/ WHERE x == z"),
               ValidationError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a} x{a}/"), NonFunctionalError);
  EXPECT_THROW(ParseQuery("SELECT x FROM /x{a}/ UNION SELECT () FROM /a/"),
               ValidationError);
}

TEST(QueryParseTest, FormulaErrorPositionIsInQueryText) {
  auto position = [](const std::string &text) -> size_t {
    try {
      ParseQuery(text);
    } catch (const SyntaxError &e) {
      return e.position();
    }
    return 0;
  };
  // An unclosed binding is reported at the binding, a stray ')' at itself.
  EXPECT_EQ(position("SELECT x FROM /x{a)/"), 16u);
  EXPECT_EQ(position("SELECT x FROM /x{a})/"), 20u);
}

TEST(QueryParseTest, RoundTripProperty) {
  Rng rng(107);
  for (int iter = 0; iter < 200; ++iter) {
    RegexUCQ q;
    size_t disjuncts = 1 + rng() % 2;
    for (size_t k = 0; k < disjuncts; ++k) {
      RegexCQ cq;
      cq.atoms.push_back(RandomFunctionalFormula(rng, 3, {"x", "y"}));
      if (rng() % 2) cq.atoms.push_back(RandomFunctionalFormula(rng, 3, {"y"}));
      if (rng() % 2) cq.equalities.push_back({"x", "y"});
      cq.projection = {"x"};
      q.disjuncts.push_back(cq);
    }
    std::string text = QueryToString(q);
    RegexUCQ back = ParseQuery(text);
    EXPECT_EQ(QueryToString(back), text);
  }
}

TEST(EvalTest, WorkedExample) {
  for (auto s : {EvalOptions::kCanonical, EvalOptions::kCompiled}) {
    auto out = RunQuery("SELECT x FROM /a* x{a*} a*/", "aaa", s);
    EXPECT_EQ(out.size(), 10u);
  }
}

TEST(EvalTest, CompiledOutputIsRadixOrdered) {
  auto s = Eval(ParseQuery("SELECT x FROM /a* x{a*} a*/"),
                Document::FromUtf8("aaa"));
  auto rows = Drain(s.get());
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows.front(), (SpanTuple{{"x", {4, 4}}}));
  EXPECT_EQ(rows.back(), (SpanTuple{{"x", {1, 1}}}));
  for (size_t i = 1; i < rows.size(); ++i) {
    EXPECT_TRUE(RadixLess(rows[i - 1], rows[i]));
  }
}

TEST(EvalTest, Equality) {
  const char *q = "SELECT x, y FROM /.* x{.+} .* y{.+} .*/ WHERE x == y";
  for (auto s : {EvalOptions::kCanonical, EvalOptions::kCompiled}) {
    auto out = RunQuery(q, "abab", s);
    std::set<SpanTuple> expect = {
        {{"x", {1, 2}}, {"y", {3, 4}}},
        {{"x", {2, 3}}, {"y", {4, 5}}},
        {{"x", {1, 3}}, {"y", {3, 5}}},
    };
    EXPECT_EQ(out, expect);
  }
}

TEST(EvalTest, BooleanQuery) {
  for (auto s : {EvalOptions::kCanonical, EvalOptions::kCompiled}) {
    EXPECT_EQ(RunQuery("SELECT () FROM /.* ab .*/", "cabd", s).size(), 1u);
    EXPECT_EQ(RunQuery("SELECT () FROM /.* ab .*/", "cbad", s).size(), 0u);
  }
}

TEST(EvalTest, UnionDropsRepeats) {
  for (auto s : {EvalOptions::kCanonical, EvalOptions::kCompiled}) {
    auto out = RunQuery(
        "SELECT x FROM /.* x{a} .*/ UNION SELECT x FROM /.* x{.} .*/", "ab", s);
    EXPECT_EQ(out.size(), 2u);
  }
}

TEST(EvalTest, MixedPlanDedups) {
  EvalOptions opt;
  opt.max_equality_compile = 0;
  RegexUCQ q = ParseQuery(
      "SELECT x FROM /.* x{a} .*/ UNION "
      "SELECT x FROM /.* x{.} .* y{.} .*/ WHERE x == y");
  EXPECT_TRUE(ShouldCompile(q.disjuncts[0], opt));
  EXPECT_FALSE(ShouldCompile(q.disjuncts[1], opt));
  auto rows = Drain(Eval(q, Document::FromUtf8("aab"), opt).get());
  std::set<SpanTuple> got(rows.begin(), rows.end());
  EXPECT_EQ(got.size(), rows.size());
  EXPECT_EQ(got, (std::set<SpanTuple>{{{"x", {1, 2}}}, {{"x", {2, 3}}}}));
}

TEST(EvalTest, PlannerLimits) {
  RegexUCQ q = ParseQuery(
      "SELECT x FROM /x{.*} .*/, /.* y{.*}/, /.*/, /.*/ WHERE x == y AND y == x");
  EvalOptions opt;
  EXPECT_FALSE(ShouldCompile(q.disjuncts[0], opt));
  opt.max_join_compile = 4;
  EXPECT_FALSE(ShouldCompile(q.disjuncts[0], opt));
  opt.max_equality_compile = 2;
  EXPECT_TRUE(ShouldCompile(q.disjuncts[0], opt));
  opt.strategy = EvalOptions::kCanonical;
  EXPECT_FALSE(ShouldCompile(q.disjuncts[0], opt));
}

TEST(EvalTest, EnvironmentOverridesLimits) {
  setenv("SPANEX_MAX_JOIN_COMPILE", "7", 1);
  setenv("SPANEX_MAX_EQUALITY_COMPILE", "0", 1);
  EvalOptions opt;
  opt.ApplyEnvironment();
  EXPECT_EQ(opt.max_join_compile, 7u);
  EXPECT_EQ(opt.max_equality_compile, 0u);
  unsetenv("SPANEX_MAX_JOIN_COMPILE");
  unsetenv("SPANEX_MAX_EQUALITY_COMPILE");
}

RegexCQ RandomQuery(Rng &rng) {
  std::vector<std::string> pool = {"x", "y", "z"};
  RegexCQ q;
  size_t atoms = 1 + rng() % 3;
  for (size_t k = 0; k < atoms; ++k) {
    std::vector<std::string> vars;
    for (const auto &v : pool) {
      if (rng() % 3 == 0) vars.push_back(v);
    }
    if (vars.empty()) vars.push_back(pool[rng() % pool.size()]);
    q.atoms.push_back(RandomFunctionalFormula(rng, 3, vars));
  }
  std::vector<std::string> all = q.AtomVars();
  if (all.size() >= 2 && rng() % 2) {
    q.equalities.push_back({all[0], all[1]});
  }
  for (const auto &v : all) {
    if (rng() % 2) q.projection.push_back(v);
  }
  return q;
}

// Canonical and compiled evaluation agree, and both match the definition.
TEST(EvalTest, StrategyAgreementProperty) {
  Rng rng(109);
  for (int iter = 0; iter < 150; ++iter) {
    RegexCQ q = RandomQuery(rng);
    Document d = RandomDocument(rng, U"ab", rng() % 6);
    RegexUCQ u{{q}};
    std::string text = QueryToString(u);
    auto canonical = EvalCanonical(q, d);
    auto compiled = Drain(EvalCompiled(q, d).get());
    SpanRelation a = ToRelation(q.projection, canonical);
    SpanRelation b = ToRelation(q.projection, compiled);
    ASSERT_EQ(a.size(), canonical.size()) << text;
    ASSERT_EQ(b.size(), compiled.size()) << text;
    ASSERT_EQ(a, b) << text << d.ToUtf8();
    ASSERT_EQ(a, OracleEvalCQ(q, d)) << text << d.ToUtf8();
  }
}

}  // namespace
}  // namespace spanex
