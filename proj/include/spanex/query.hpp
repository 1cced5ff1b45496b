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

// Conjunctive queries and their unions over regex formulas.
//
// Query text:
//   SELECT x, y FROM /formula/, /formula/ WHERE x == y AND ... UNION SELECT ...
//   SELECT () FROM /formula/          -- Boolean query
//
// Keywords are case-insensitive. Inside a formula '/' must be written '\/'.

#ifndef SPANEX_QUERY_HPP_
#define SPANEX_QUERY_HPP_

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spanex/algebra.hpp"
#include "spanex/core.hpp"
#include "spanex/enumerate.hpp"
#include "spanex/regex.hpp"
#include "spanex/vsa.hpp"

namespace spanex {

struct RegexCQ {
  std::vector<std::string> projection;  // sorted; empty for Boolean queries
  std::vector<Regex> atoms;
  std::vector<Selection> equalities;

  std::vector<std::string> AtomVars() const {
    std::vector<std::string> all;
    for (const auto &a : atoms) {
      auto v = RegexVars(a);
      all.insert(all.end(), v.begin(), v.end());
    }
    return SortedUnique(all);
  }
};

struct RegexUCQ {
  std::vector<RegexCQ> disjuncts;

  const std::vector<std::string> &projection() const {
    return disjuncts.at(0).projection;
  }
  bool IsBoolean() const { return projection().empty(); }
};

// Checks variable scoping and functionality; throws ValidationError or
// NonFunctionalError.
inline void ValidateCQ(const RegexCQ &q) {
  if (q.atoms.empty()) throw ValidationError("query has no atoms");
  std::vector<std::string> vars = q.AtomVars();
  auto known = [&](const std::string &v) {
    return std::binary_search(vars.begin(), vars.end(), v);
  };
  for (const auto &v : q.projection) {
    if (!known(v)) {
      throw ValidationError("projected variable " + v + " occurs in no atom");
    }
  }
  for (const auto &[x, y] : q.equalities) {
    if (!known(x)) throw ValidationError("equality variable " + x + " occurs in no atom");
    if (!known(y)) throw ValidationError("equality variable " + y + " occurs in no atom");
  }
  for (const auto &a : q.atoms) {
    FunctionalityReport rep = CheckFunctionalRegex(a);
    if (!rep.functional) {
      throw NonFunctionalError(
          "atom /" + RegexToString(a) + "/ is " + rep.ToString(), 0,
          rep.violations.empty() ? "" : rep.violations[0].var);
    }
  }
}

inline void ValidateUCQ(const RegexUCQ &q) {
  if (q.disjuncts.empty()) throw ValidationError("query has no disjuncts");
  for (const auto &d : q.disjuncts) {
    ValidateCQ(d);
    if (d.projection != q.disjuncts[0].projection) {
      throw ValidationError("disjuncts project different variable sets");
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace internal {

class QueryParser {
 public:
  explicit QueryParser(std::u32string text) : s_(std::move(text)) {}

  RegexUCQ Parse() {
    RegexUCQ q;
    q.disjuncts.push_back(ParseCQ());
    for (;;) {
      Skip();
      if (AtEnd()) break;
      ExpectKeyword("UNION");
      q.disjuncts.push_back(ParseCQ());
    }
    return q;
  }

 private:
  bool AtEnd() const { return i_ >= s_.size(); }

  [[noreturn]] void Fail(const std::string &msg) {
    throw SyntaxError("query: " + msg, i_ + 1);
  }

  void Skip() {
    for (;;) {
      while (!AtEnd() && IsSpaceChar(s_[i_])) ++i_;
      // "--" starts a comment that runs to the end of the line.
      if (i_ + 1 < s_.size() && s_[i_] == '-' && s_[i_ + 1] == '-') {
        while (!AtEnd() && s_[i_] != '\n') ++i_;
        continue;
      }
      break;
    }
  }

  std::string Ident() {
    Skip();
    size_t j = i_;
    while (j < s_.size() && IsIdentChar(s_[j])) ++j;
    if (j == i_) Fail("expected a name");
    std::string out = EncodeUtf8(s_.substr(i_, j - i_));
    i_ = j;
    return out;
  }

  bool PeekKeyword(const char *kw) {
    Skip();
    size_t n = std::char_traits<char>::length(kw);
    if (i_ + n > s_.size()) return false;
    for (size_t k = 0; k < n; ++k) {
      char32_t c = s_[i_ + k];
      if (c >= 'a' && c <= 'z') c = c - 'a' + 'A';
      if (c != static_cast<char32_t>(kw[k])) return false;
    }
    return i_ + n == s_.size() || !IsIdentChar(s_[i_ + n]);
  }

  void ExpectKeyword(const char *kw) {
    if (!PeekKeyword(kw)) Fail(std::string("expected ") + kw);
    i_ += std::char_traits<char>::length(kw);
  }

  bool Accept(char32_t c) {
    Skip();
    if (!AtEnd() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Regex Formula() {
    Skip();
    if (!Accept('/')) Fail("expected '/' to open a formula");
    size_t start = i_;
    std::u32string body;
    while (!AtEnd() && s_[i_] != '/') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
        body.push_back(s_[i_]);
        ++i_;
      }
      body.push_back(s_[i_]);
      ++i_;
    }
    if (AtEnd()) Fail("unterminated formula");
    ++i_;
    try {
      return RegexParser(body).Parse();
    } catch (const SyntaxError &e) {
      throw SyntaxError(std::string("in formula: ") + e.what(),
                        start + e.position());
    }
  }

  RegexCQ ParseCQ() {
    RegexCQ q;
    ExpectKeyword("SELECT");
    Skip();
    if (Accept('(')) {
      if (!Accept(')')) Fail("expected ')'");
    } else {
      q.projection.push_back(Ident());
      while (Accept(',')) q.projection.push_back(Ident());
    }
    std::vector<std::string> sorted = SortedUnique(q.projection);
    if (sorted.size() != q.projection.size()) Fail("duplicate projected variable");
    q.projection = sorted;
    ExpectKeyword("FROM");
    q.atoms.push_back(Formula());
    while (Accept(',')) q.atoms.push_back(Formula());
    if (PeekKeyword("WHERE")) {
      ExpectKeyword("WHERE");
      for (;;) {
        std::string x = Ident();
        if (!(Accept('=') && Accept('='))) Fail("expected '=='");
        std::string y = Ident();
        q.equalities.push_back({x, y});
        if (!PeekKeyword("AND")) break;
        ExpectKeyword("AND");
      }
    }
    return q;
  }

  std::u32string s_;
  size_t i_ = 0;
};

}  // namespace internal

// Parses and validates a query.
inline RegexUCQ ParseQuery(std::string_view text) {
  RegexUCQ q = internal::QueryParser(DecodeUtf8(text)).Parse();
  ValidateUCQ(q);
  return q;
}

inline std::string QueryToString(const RegexUCQ &q) {
  std::string out;
  for (size_t d = 0; d < q.disjuncts.size(); ++d) {
    const RegexCQ &cq = q.disjuncts[d];
    if (d > 0) out += "\nUNION ";
    out += "SELECT ";
    if (cq.projection.empty()) {
      out += "()";
    } else {
      for (size_t k = 0; k < cq.projection.size(); ++k) {
        if (k > 0) out += ", ";
        out += cq.projection[k];
      }
    }
    out += "\nFROM ";
    for (size_t k = 0; k < cq.atoms.size(); ++k) {
      if (k > 0) out += ",\n     ";
      out += "/" + RegexToString(cq.atoms[k]) + "/";
    }
    if (!cq.equalities.empty()) {
      out += "\nWHERE ";
      for (size_t k = 0; k < cq.equalities.size(); ++k) {
        if (k > 0) out += " AND ";
        out += cq.equalities[k].first + " == " + cq.equalities[k].second;
      }
    }
  }
  return out + "\n";
}

// ---------------------------------------------------------------------------
// Relational view

struct RelationalAtom {
  std::string relation;
  std::vector<std::string> attributes;
  std::string formula;
};

struct RelationalView {
  std::vector<RelationalAtom> atoms;
  std::vector<Selection> equalities;
  std::vector<std::string> projection;

  std::string ToString() const {
    std::string out = "project(";
    for (size_t k = 0; k < projection.size(); ++k) {
      out += (k ? "," : "") + projection[k];
    }
    out += ")";
    for (const auto &[x, y] : equalities) out += " select(" + x + "=" + y + ")";
    for (const auto &a : atoms) {
      out += " " + a.relation + "(";
      for (size_t k = 0; k < a.attributes.size(); ++k) {
        out += (k ? "," : "") + a.attributes[k];
      }
      out += ")";
    }
    return out;
  }
};

// One fresh relation symbol per atom whose attributes are the atom's
// variables.
inline RelationalView MapToRelational(const RegexCQ &q) {
  RelationalView v;
  for (size_t k = 0; k < q.atoms.size(); ++k) {
    v.atoms.push_back({"R" + std::to_string(k + 1), RegexVars(q.atoms[k]),
                       RegexToString(q.atoms[k])});
  }
  v.equalities = q.equalities;
  v.projection = q.projection;
  return v;
}

// ---------------------------------------------------------------------------
// Tuple streams

class TupleStream {
 public:
  virtual ~TupleStream() = default;
  virtual std::optional<SpanTuple> Next() = 0;
};

class EnumeratorStream : public TupleStream {
 public:
  explicit EnumeratorStream(std::unique_ptr<Enumerator> e) : e_(std::move(e)) {}
  std::optional<SpanTuple> Next() override { return e_->Next(); }
  const Enumerator &enumerator() const { return *e_; }

 private:
  std::unique_ptr<Enumerator> e_;
};

class VectorStream : public TupleStream {
 public:
  explicit VectorStream(std::vector<SpanTuple> rows) : rows_(std::move(rows)) {}
  std::optional<SpanTuple> Next() override {
    if (pos_ >= rows_.size()) return std::nullopt;
    return rows_[pos_++];
  }

 private:
  std::vector<SpanTuple> rows_;
  size_t pos_ = 0;
};

// Concatenates streams and drops tuples already produced.
class DedupStream : public TupleStream {
 public:
  explicit DedupStream(std::vector<std::unique_ptr<TupleStream>> parts)
      : parts_(std::move(parts)) {}

  std::optional<SpanTuple> Next() override {
    while (cur_ < parts_.size()) {
      auto t = parts_[cur_]->Next();
      if (!t) {
        ++cur_;
        continue;
      }
      if (seen_.insert(*t).second) return t;
    }
    return std::nullopt;
  }

 private:
  std::vector<std::unique_ptr<TupleStream>> parts_;
  size_t cur_ = 0;
  std::unordered_set<SpanTuple, SpanTupleHash> seen_;
};

inline std::vector<SpanTuple> Drain(TupleStream *s) {
  std::vector<SpanTuple> out;
  while (auto t = s->Next()) out.push_back(std::move(*t));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical evaluation

namespace internal {

// A materialized relation: one column per variable, rows deduplicated.
struct Table {
  std::vector<std::string> vars;  // sorted
  std::vector<std::vector<Span>> rows;
};

struct RowHash {
  size_t operator()(const std::vector<Span> &r) const {
    size_t h = 1469598103934665603ULL;
    for (const auto &s : r) {
      h ^= (static_cast<size_t>(s.start) << 32) | s.end;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

inline Table Materialize(const Regex &atom, const Document &d) {
  Table t;
  t.vars = RegexVars(atom);
  Enumerator e(CompileRegex(atom), d);
  while (e.NextSequence()) {
    SpanTuple tup = e.CurrentTuple();
    std::vector<Span> row;
    for (const auto &[name, span] : tup.entries()) row.push_back(span);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Hash join on the shared variables; a cross product when there are none.
inline Table HashJoin(const Table &a, const Table &b) {
  Table out;
  out.vars = a.vars;
  out.vars.insert(out.vars.end(), b.vars.begin(), b.vars.end());
  out.vars = SortedUnique(out.vars);
  std::vector<std::pair<size_t, size_t>> shared;
  for (size_t i = 0; i < a.vars.size(); ++i) {
    auto it = std::find(b.vars.begin(), b.vars.end(), a.vars[i]);
    if (it != b.vars.end()) shared.push_back({i, it - b.vars.begin()});
  }
  // Output column k comes from a or b.
  std::vector<std::pair<int, size_t>> source;
  for (const auto &v : out.vars) {
    auto ia = std::find(a.vars.begin(), a.vars.end(), v);
    if (ia != a.vars.end()) {
      source.push_back({0, ia - a.vars.begin()});
    } else {
      source.push_back(
          {1, std::find(b.vars.begin(), b.vars.end(), v) - b.vars.begin()});
    }
  }
  const Table &build = a.rows.size() <= b.rows.size() ? a : b;
  const Table &probe = &build == &a ? b : a;
  bool build_is_a = &build == &a;
  auto key_of = [&](const std::vector<Span> &row, bool is_a) {
    std::vector<Span> k;
    for (const auto &[ia, ib] : shared) k.push_back(row[is_a ? ia : ib]);
    return k;
  };
  std::unordered_map<std::vector<Span>, std::vector<size_t>, RowHash> index;
  for (size_t r = 0; r < build.rows.size(); ++r) {
    index[key_of(build.rows[r], build_is_a)].push_back(r);
  }
  for (const auto &prow : probe.rows) {
    auto it = index.find(key_of(prow, !build_is_a));
    if (it == index.end()) continue;
    for (size_t r : it->second) {
      const auto &arow = build_is_a ? build.rows[r] : prow;
      const auto &brow = build_is_a ? prow : build.rows[r];
      std::vector<Span> row;
      row.reserve(source.size());
      for (const auto &[side, col] : source) {
        row.push_back(side == 0 ? arow[col] : brow[col]);
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

inline std::vector<SpanTuple> SortedTuples(std::vector<SpanTuple> rows) {
  std::sort(rows.begin(), rows.end(), RadixLess);
  return rows;
}

}  // namespace internal

// Materializes every atom, joins them smallest first, filters the
// equalities and projects. Result tuples are in radix order.
inline std::vector<SpanTuple> EvalCanonical(const RegexCQ &q,
                                            const Document &d) {
  ValidateCQ(q);
  std::vector<internal::Table> tables;
  for (const auto &atom : q.atoms) {
    tables.push_back(internal::Materialize(atom, d));
    if (tables.back().rows.empty()) return {};
  }
  std::sort(tables.begin(), tables.end(),
            [](const internal::Table &a, const internal::Table &b) {
              return a.rows.size() < b.rows.size();
            });
  internal::Table acc = std::move(tables[0]);
  std::vector<char> used(tables.size(), 0);
  used[0] = 1;
  // Prefer the smallest remaining table that shares a variable with the
  // accumulated one; fall back to a cross product.
  for (size_t step = 1; step < tables.size(); ++step) {
    size_t pick = tables.size();
    for (size_t k = 0; k < tables.size() && pick == tables.size(); ++k) {
      if (used[k]) continue;
      for (const auto &v : tables[k].vars) {
        if (std::binary_search(acc.vars.begin(), acc.vars.end(), v)) {
          pick = k;
          break;
        }
      }
    }
    if (pick == tables.size()) {
      for (size_t k = 0; k < tables.size(); ++k) {
        if (!used[k]) {
          pick = k;
          break;
        }
      }
    }
    used[pick] = 1;
    acc = internal::HashJoin(acc, tables[pick]);
    if (acc.rows.empty()) return {};
  }
  std::vector<std::pair<size_t, size_t>> eq;
  for (const auto &[x, y] : q.equalities) {
    eq.push_back({std::find(acc.vars.begin(), acc.vars.end(), x) - acc.vars.begin(),
                  std::find(acc.vars.begin(), acc.vars.end(), y) - acc.vars.begin()});
  }
  std::vector<size_t> keep;
  for (const auto &v : q.projection) {
    keep.push_back(std::find(acc.vars.begin(), acc.vars.end(), v) - acc.vars.begin());
  }
  std::unordered_set<std::vector<Span>, internal::RowHash> seen;
  std::vector<SpanTuple> out;
  for (const auto &row : acc.rows) {
    bool ok = true;
    for (const auto &[i, j] : eq) {
      if (d.Substring(row[i]) != d.Substring(row[j])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<Span> proj;
    for (size_t k : keep) proj.push_back(row[k]);
    if (!seen.insert(proj).second) continue;
    SpanTuple t;
    for (size_t k = 0; k < keep.size(); ++k) t.Set(q.projection[k], proj[k]);
    out.push_back(std::move(t));
  }
  return internal::SortedTuples(std::move(out));
}

// ---------------------------------------------------------------------------
// Compiled evaluation

// Compiles, joins, applies the selections for the document and projects.
inline VSetAutomaton CompileCQ(const RegexCQ &q, const Document &d) {
  ValidateCQ(q);
  std::vector<VSetAutomaton> parts;
  for (const auto &atom : q.atoms) parts.push_back(CompileRegex(atom));
  VSetAutomaton joined = JoinMany(parts);
  if (!q.equalities.empty()) joined = ApplySelections(joined, q.equalities, d);
  return Trim(Project(joined, q.projection));
}

inline std::unique_ptr<TupleStream> EvalCompiled(const RegexCQ &q,
                                                 const Document &d) {
  return std::make_unique<EnumeratorStream>(
      std::make_unique<Enumerator>(CompileCQ(q, d), d));
}

// ---------------------------------------------------------------------------
// Planning

struct EvalOptions {
  enum Strategy { kAuto, kCanonical, kCompiled };
  Strategy strategy = kAuto;
  size_t max_join_compile = 3;      // atoms per disjunct
  size_t max_equality_compile = 1;  // equalities per disjunct

  // Applies SPANEX_MAX_JOIN_COMPILE and SPANEX_MAX_EQUALITY_COMPILE.
  void ApplyEnvironment() {
    if (const char *v = std::getenv("SPANEX_MAX_JOIN_COMPILE")) {
      max_join_compile = std::strtoul(v, nullptr, 10);
    }
    if (const char *v = std::getenv("SPANEX_MAX_EQUALITY_COMPILE")) {
      max_equality_compile = std::strtoul(v, nullptr, 10);
    }
  }
};

inline bool ShouldCompile(const RegexCQ &q, const EvalOptions &opt) {
  switch (opt.strategy) {
    case EvalOptions::kCanonical:
      return false;
    case EvalOptions::kCompiled:
      return true;
    case EvalOptions::kAuto:
      break;
  }
  return q.atoms.size() <= opt.max_join_compile &&
         q.equalities.size() <= opt.max_equality_compile;
}

// Evaluates a union of conjunctive queries. When every disjunct is
// compiled the union automaton is enumerated directly, which yields
// duplicate-free output in radix order. Otherwise disjuncts are evaluated
// one after another and repeats are dropped.
inline std::unique_ptr<TupleStream> Eval(const RegexUCQ &q, const Document &d,
                                         const EvalOptions &opt = {}) {
  ValidateUCQ(q);
  bool all = true;
  for (const auto &cq : q.disjuncts) all = all && ShouldCompile(cq, opt);
  if (all) {
    std::vector<VSetAutomaton> parts;
    for (const auto &cq : q.disjuncts) parts.push_back(CompileCQ(cq, d));
    VSetAutomaton u = parts.size() == 1 ? parts[0] : Trim(Union(parts));
    return std::make_unique<EnumeratorStream>(std::make_unique<Enumerator>(u, d));
  }
  std::vector<std::unique_ptr<TupleStream>> streams;
  for (const auto &cq : q.disjuncts) {
    if (ShouldCompile(cq, opt)) {
      streams.push_back(EvalCompiled(cq, d));
    } else {
      streams.push_back(std::make_unique<VectorStream>(EvalCanonical(cq, d)));
    }
  }
  return std::make_unique<DedupStream>(std::move(streams));
}

}  // namespace spanex

#endif  // SPANEX_QUERY_HPP_
