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

// Regex formulas with capture variables.
//
// Concrete syntax:
//   alt     := concat ( ('|' | '∨') concat )*
//   concat  := postfix+
//   postfix := atom ('*' | '+')*
//   atom    := '(' alt ')' | '(' ')' | name '{' [alt] '}'
//            | '.' | 'Σ' | 'ε' | '∅' | '\' char | char
//
// Whitespace between tokens is ignored; a literal blank is written '\ '.
// A variable name is a run of ASCII letters, digits and underscores that is
// immediately followed by '{'. A run not followed by '{' is a sequence of
// literal symbols. '.' and 'Σ' match any symbol, 'ε' and '()' match the empty
// word, '∅' matches nothing. 'a+' is sugar for 'a a*'.

#ifndef SPANEX_REGEX_HPP_
#define SPANEX_REGEX_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spanex/core.hpp"

namespace spanex {

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &msg, size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " +
              msg),
        position_(position) {}

  // 1-based code point offset into the formula text.
  size_t position() const { return position_; }

 private:
  size_t position_;
};

struct RegexNode;
using Regex = std::shared_ptr<const RegexNode>;

struct RegexNode {
  enum Kind : uint8_t {
    kEmpty,
    kEpsilon,
    kSymbol,
    kWildcard,
    kDisjunction,
    kConcatenation,
    kStar,
    kBinding,
  };

  RegexNode(Kind k = kEpsilon, Symbol s = 0, std::string v = {},
            Regex l = nullptr, Regex r = nullptr)
      : kind(k), symbol(s), var(std::move(v)), left(std::move(l)),
        right(std::move(r)) {}

  Kind kind = kEpsilon;
  Symbol symbol = 0;   // kSymbol
  std::string var;     // kBinding
  Regex left;          // kDisjunction, kConcatenation, kStar, kBinding
  Regex right;         // kDisjunction, kConcatenation
  size_t position = 0;  // 1-based source offset, 0 when built in code
};

namespace re {

inline Regex Make(RegexNode n) {
  return std::make_shared<const RegexNode>(std::move(n));
}
inline Regex Empty() { return Make({RegexNode::kEmpty}); }
inline Regex Epsilon() { return Make({RegexNode::kEpsilon}); }
inline Regex Sym(Symbol s) { return Make({RegexNode::kSymbol, s}); }
inline Regex Any() { return Make({RegexNode::kWildcard}); }
inline Regex Or(Regex a, Regex b) {
  return Make({RegexNode::kDisjunction, 0, {}, std::move(a), std::move(b)});
}
inline Regex Cat(Regex a, Regex b) {
  return Make({RegexNode::kConcatenation, 0, {}, std::move(a), std::move(b)});
}
inline Regex Star(Regex a) {
  return Make({RegexNode::kStar, 0, {}, std::move(a), nullptr});
}
inline Regex Plus(Regex a) { return Cat(a, Star(a)); }
inline Regex Bind(std::string var, Regex a) {
  return Make({RegexNode::kBinding, 0, std::move(var), std::move(a), nullptr});
}

// Concatenation of the symbols of a string, or epsilon if empty.
inline Regex Word(std::u32string_view w) {
  if (w.empty()) return Epsilon();
  Regex r = Sym(w[0]);
  for (size_t i = 1; i < w.size(); ++i) r = Cat(r, Sym(w[i]));
  return r;
}

// Left-nested concatenation of the parts.
inline Regex CatAll(const std::vector<Regex> &parts) {
  if (parts.empty()) return Epsilon();
  Regex r = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) r = Cat(r, parts[i]);
  return r;
}

inline Regex OrAll(const std::vector<Regex> &parts) {
  if (parts.empty()) return Empty();
  Regex r = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) r = Or(r, parts[i]);
  return r;
}

}  // namespace re

// Structural equality ignoring source positions.
inline bool RegexEqual(const Regex &a, const Regex &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case RegexNode::kSymbol:
      return a->symbol == b->symbol;
    case RegexNode::kBinding:
      return a->var == b->var && RegexEqual(a->left, b->left);
    case RegexNode::kStar:
      return RegexEqual(a->left, b->left);
    case RegexNode::kDisjunction:
    case RegexNode::kConcatenation:
      return RegexEqual(a->left, b->left) && RegexEqual(a->right, b->right);
    default:
      return true;
  }
}

inline size_t RegexSize(const Regex &r) {
  if (!r) return 0;
  return 1 + RegexSize(r->left) + RegexSize(r->right);
}

namespace internal {

inline void CollectVars(const Regex &r, std::set<std::string> *out) {
  if (!r) return;
  if (r->kind == RegexNode::kBinding) out->insert(r->var);
  CollectVars(r->left, out);
  CollectVars(r->right, out);
}

inline void CollectSymbols(const Regex &r, std::set<Symbol> *out) {
  if (!r) return;
  if (r->kind == RegexNode::kSymbol) out->insert(r->symbol);
  CollectSymbols(r->left, out);
  CollectSymbols(r->right, out);
}

}  // namespace internal

// Variables bound anywhere in the formula, sorted.
inline std::vector<std::string> RegexVars(const Regex &r) {
  std::set<std::string> s;
  internal::CollectVars(r, &s);
  return {s.begin(), s.end()};
}

inline std::set<Symbol> RegexSymbols(const Regex &r) {
  std::set<Symbol> s;
  internal::CollectSymbols(r, &s);
  return s;
}

// ---------------------------------------------------------------------------
// Parser

namespace internal {

inline bool IsSpaceChar(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

inline bool IsSpecialChar(char32_t c) {
  switch (c) {
    case '{':
    case '}':
    case '(':
    case ')':
    case '|':
    case '*':
    case '+':
    case '.':
    case '\\':
    case '/':
    case U'∨':
    case U'Σ':
    case U'ε':
    case U'∅':
      return true;
    default:
      return IsSpaceChar(c);
  }
}

class RegexParser {
 public:
  explicit RegexParser(std::u32string text) : s_(std::move(text)) {}

  Regex Parse() {
    SkipSpace();
    if (AtEnd()) throw SyntaxError("empty formula", 1);
    Regex r = ParseAlt();
    SkipSpace();
    if (!AtEnd()) {
      if (s_[i_] == ')') throw SyntaxError("unbalanced ')'", i_ + 1);
      if (s_[i_] == '}') throw SyntaxError("unbalanced '}'", i_ + 1);
      throw SyntaxError("unexpected character", i_ + 1);
    }
    return r;
  }

 private:
  bool AtEnd() const { return i_ >= s_.size(); }

  void SkipSpace() {
    while (!AtEnd() && IsSpaceChar(s_[i_])) ++i_;
  }

  Regex At(RegexNode n, size_t pos) {
    n.position = pos;
    return re::Make(std::move(n));
  }

  bool StartsAtom() {
    SkipSpace();
    if (AtEnd()) return false;
    char32_t c = s_[i_];
    return !(c == '|' || c == U'∨' || c == ')' || c == '}' || c == '*' ||
             c == '+');
  }

  Regex ParseAlt() {
    size_t pos = i_ + 1;
    Regex r = ParseConcat();
    for (;;) {
      SkipSpace();
      if (AtEnd() || (s_[i_] != '|' && s_[i_] != U'∨')) break;
      ++i_;
      Regex rhs = ParseConcat();
      r = At({RegexNode::kDisjunction, 0, {}, r, rhs}, pos);
    }
    return r;
  }

  Regex ParseConcat() {
    size_t pos = i_ + 1;
    if (!StartsAtom()) {
      if (AtEnd()) throw SyntaxError("expected expression", i_ + 1);
      throw SyntaxError("expected expression before '" +
                            EncodeUtf8(std::u32string(1, s_[i_])) + "'",
                        i_ + 1);
    }
    Regex r = ParsePostfix();
    while (StartsAtom()) {
      Regex rhs = ParsePostfix();
      r = At({RegexNode::kConcatenation, 0, {}, r, rhs}, pos);
    }
    return r;
  }

  Regex ParsePostfix() {
    size_t pos = i_ + 1;
    Regex r = ParseAtom();
    for (;;) {
      SkipSpace();
      if (AtEnd()) break;
      if (s_[i_] == '*') {
        ++i_;
        r = At({RegexNode::kStar, 0, {}, r, nullptr}, pos);
      } else if (s_[i_] == '+') {
        ++i_;
        Regex star = At({RegexNode::kStar, 0, {}, r, nullptr}, pos);
        r = At({RegexNode::kConcatenation, 0, {}, r, star}, pos);
      } else {
        break;
      }
    }
    return r;
  }

  Regex ParseAtom() {
    SkipSpace();
    size_t pos = i_ + 1;
    char32_t c = s_[i_];
    if (c == '(') {
      ++i_;
      SkipSpace();
      if (!AtEnd() && s_[i_] == ')') {
        ++i_;
        return At({RegexNode::kEpsilon}, pos);
      }
      Regex r = ParseAlt();
      SkipSpace();
      if (AtEnd() || s_[i_] != ')') throw SyntaxError("missing ')'", pos);
      ++i_;
      return r;
    }
    if (c == '.' || c == U'Σ') {
      ++i_;
      return At({RegexNode::kWildcard}, pos);
    }
    if (c == U'ε') {
      ++i_;
      return At({RegexNode::kEpsilon}, pos);
    }
    if (c == U'∅') {
      ++i_;
      return At({RegexNode::kEmpty}, pos);
    }
    if (c == '\\') {
      if (i_ + 1 >= s_.size()) throw SyntaxError("dangling escape", pos);
      char32_t lit = s_[i_ + 1];
      i_ += 2;
      return At({RegexNode::kSymbol, lit}, pos);
    }
    if (c == '{') throw SyntaxError("'{' without variable name", pos);
    if (IsIdentChar(c)) {
      size_t j = i_;
      while (j < s_.size() && IsIdentChar(s_[j])) ++j;
      if (j < s_.size() && s_[j] == '{') {
        std::string name = EncodeUtf8(s_.substr(i_, j - i_));
        i_ = j + 1;
        SkipSpace();
        Regex body;
        if (!AtEnd() && s_[i_] == '}') {
          body = At({RegexNode::kEpsilon}, i_ + 1);
        } else {
          body = ParseAlt();
          SkipSpace();
        }
        if (AtEnd() || s_[i_] != '}') throw SyntaxError("missing '}'", pos);
        ++i_;
        return At({RegexNode::kBinding, 0, name, body, nullptr}, pos);
      }
    }
    ++i_;
    return At({RegexNode::kSymbol, c}, pos);
  }

  std::u32string s_;
  size_t i_ = 0;
};

}  // namespace internal

inline Regex ParseRegex(std::string_view text) {
  return internal::RegexParser(DecodeUtf8(text)).Parse();
}

// ---------------------------------------------------------------------------
// Printer

namespace internal {

// Precedence levels: 0 alternation, 1 concatenation, 2 postfix/atom.
inline void PrintRegex(const Regex &r, int context, std::string *out) {
  switch (r->kind) {
    case RegexNode::kEmpty:
      *out += "∅";
      return;
    case RegexNode::kEpsilon:
      *out += "ε";
      return;
    case RegexNode::kWildcard:
      *out += ".";
      return;
    case RegexNode::kSymbol:
      if (IsSpecialChar(r->symbol)) out->push_back('\\');
      AppendUtf8(out, r->symbol);
      return;
    case RegexNode::kBinding:
      *out += r->var + "{";
      PrintRegex(r->left, 0, out);
      *out += "}";
      return;
    case RegexNode::kStar:
      PrintRegex(r->left, 2, out);
      *out += "*";
      return;
    case RegexNode::kConcatenation: {
      bool paren = context > 1;
      if (paren) *out += "(";
      PrintRegex(r->left, 1, out);
      *out += " ";
      PrintRegex(r->right, 2, out);
      if (paren) *out += ")";
      return;
    }
    case RegexNode::kDisjunction: {
      bool paren = context > 0;
      if (paren) *out += "(";
      PrintRegex(r->left, 0, out);
      *out += " | ";
      PrintRegex(r->right, 1, out);
      if (paren) *out += ")";
      return;
    }
  }
}

}  // namespace internal

// Canonical text that parses back to a structurally equal formula.
inline std::string RegexToString(const Regex &r) {
  std::string out;
  internal::PrintRegex(r, 0, &out);
  return out;
}

// ---------------------------------------------------------------------------
// Functionality

struct FunctionalityViolation {
  enum Reason { kRebound, kBranchMismatch, kUnderStar, kNeverBound };
  std::string var;
  Reason reason;
  size_t position;  // source offset of the offending node, 0 if unknown
};

inline const char *ViolationReasonName(FunctionalityViolation::Reason r) {
  switch (r) {
    case FunctionalityViolation::kRebound:
      return "rebound";
    case FunctionalityViolation::kBranchMismatch:
      return "branch-mismatch";
    case FunctionalityViolation::kUnderStar:
      return "under-star";
    case FunctionalityViolation::kNeverBound:
      return "never-bound";
  }
  return "?";
}

struct FunctionalityReport {
  bool functional = true;
  std::vector<FunctionalityViolation> violations;

  std::string ToString() const {
    if (functional) return "functional";
    std::string out = "not functional:";
    for (const auto &v : violations) {
      out += " " + v.var + " (" + ViolationReasonName(v.reason);
      if (v.position > 0) out += " at " + std::to_string(v.position);
      out += ")";
    }
    return out;
  }
};

namespace internal {

// Result of the bottom-up analysis: either the language of the subformula
// is empty, or every word in it binds exactly `vars`.
struct BindInfo {
  bool empty = false;
  std::set<std::string> vars;
};

inline bool LanguageIsEmpty(const Regex &r) {
  switch (r->kind) {
    case RegexNode::kEmpty:
      return true;
    case RegexNode::kDisjunction:
      return LanguageIsEmpty(r->left) && LanguageIsEmpty(r->right);
    case RegexNode::kConcatenation:
      return LanguageIsEmpty(r->left) || LanguageIsEmpty(r->right);
    case RegexNode::kBinding:
      return LanguageIsEmpty(r->left);
    default:
      return false;
  }
}

inline BindInfo AnalyzeBindings(const Regex &r, FunctionalityReport *rep) {
  if (LanguageIsEmpty(r)) return {true, {}};
  auto flag = [&](const std::string &v, FunctionalityViolation::Reason why) {
    rep->functional = false;
    rep->violations.push_back({v, why, r->position});
  };
  switch (r->kind) {
    case RegexNode::kEmpty:
      return {true, {}};
    case RegexNode::kEpsilon:
    case RegexNode::kSymbol:
    case RegexNode::kWildcard:
      return {false, {}};
    case RegexNode::kDisjunction: {
      BindInfo a = AnalyzeBindings(r->left, rep);
      BindInfo b = AnalyzeBindings(r->right, rep);
      if (a.empty) return b;
      if (b.empty) return a;
      for (const auto &v : a.vars) {
        if (!b.vars.count(v)) flag(v, FunctionalityViolation::kBranchMismatch);
      }
      for (const auto &v : b.vars) {
        if (!a.vars.count(v)) flag(v, FunctionalityViolation::kBranchMismatch);
      }
      a.vars.insert(b.vars.begin(), b.vars.end());
      return a;
    }
    case RegexNode::kConcatenation: {
      BindInfo a = AnalyzeBindings(r->left, rep);
      BindInfo b = AnalyzeBindings(r->right, rep);
      if (a.empty || b.empty) return {true, {}};
      for (const auto &v : b.vars) {
        if (a.vars.count(v)) flag(v, FunctionalityViolation::kRebound);
      }
      a.vars.insert(b.vars.begin(), b.vars.end());
      return a;
    }
    case RegexNode::kStar: {
      BindInfo a = AnalyzeBindings(r->left, rep);
      if (a.empty) return {false, {}};
      for (const auto &v : a.vars) flag(v, FunctionalityViolation::kUnderStar);
      return {false, {}};
    }
    case RegexNode::kBinding: {
      BindInfo a = AnalyzeBindings(r->left, rep);
      if (a.empty) return {true, {}};
      if (a.vars.count(r->var)) flag(r->var, FunctionalityViolation::kRebound);
      a.vars.insert(r->var);
      return a;
    }
  }
  return {};
}

}  // namespace internal

// Accepts a formula iff every ref-word it denotes is valid for its variable
// set. Subformulas with an empty language impose no constraint.
inline FunctionalityReport CheckFunctionalRegex(const Regex &r) {
  FunctionalityReport rep;
  internal::BindInfo info = internal::AnalyzeBindings(r, &rep);
  if (!rep.functional || info.empty) return rep;
  for (const auto &v : RegexVars(r)) {
    if (!info.vars.count(v)) {
      rep.functional = false;
      rep.violations.push_back({v, FunctionalityViolation::kNeverBound, 0});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Ref-word membership

namespace internal {

// For each start index i, a bitmask of end indices j such that the factor
// r[i, j) belongs to the language of the node.
using FactorMatrix = std::vector<uint64_t>;

inline FactorMatrix Compose(const FactorMatrix &a, const FactorMatrix &b) {
  FactorMatrix out(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t row = a[i];
    while (row) {
      int k = __builtin_ctzll(row);
      row &= row - 1;
      out[i] |= b[k];
    }
  }
  return out;
}

inline FactorMatrix Factors(const Regex &r, const RefWord &w) {
  size_t n = w.size();
  FactorMatrix m(n + 1, 0);
  switch (r->kind) {
    case RegexNode::kEmpty:
      break;
    case RegexNode::kEpsilon:
      for (size_t i = 0; i <= n; ++i) m[i] = 1ULL << i;
      break;
    case RegexNode::kSymbol:
      for (size_t i = 0; i < n; ++i) {
        if (w[i].IsTerminal() && w[i].symbol == r->symbol) m[i] = 1ULL << (i + 1);
      }
      break;
    case RegexNode::kWildcard:
      for (size_t i = 0; i < n; ++i) {
        if (w[i].IsTerminal()) m[i] = 1ULL << (i + 1);
      }
      break;
    case RegexNode::kDisjunction: {
      FactorMatrix a = Factors(r->left, w);
      FactorMatrix b = Factors(r->right, w);
      for (size_t i = 0; i <= n; ++i) m[i] = a[i] | b[i];
      break;
    }
    case RegexNode::kConcatenation:
      m = Compose(Factors(r->left, w), Factors(r->right, w));
      break;
    case RegexNode::kStar: {
      FactorMatrix a = Factors(r->left, w);
      for (size_t i = 0; i <= n; ++i) m[i] = 1ULL << i;
      for (;;) {
        FactorMatrix next = Compose(m, a);
        bool changed = false;
        for (size_t i = 0; i <= n; ++i) {
          uint64_t v = m[i] | next[i];
          if (v != m[i]) changed = true;
          m[i] = v;
        }
        if (!changed) break;
      }
      break;
    }
    case RegexNode::kBinding: {
      FactorMatrix a = Factors(r->left, w);
      for (size_t i = 0; i + 1 < n; ++i) {
        if (w[i].kind != RefSymbol::kOpen || w[i].var != r->var) continue;
        uint64_t row = a[i + 1];
        while (row) {
          int k = __builtin_ctzll(row);
          row &= row - 1;
          if (static_cast<size_t>(k) < n && w[k].kind == RefSymbol::kClose &&
              w[k].var == r->var) {
            m[i] |= 1ULL << (k + 1);
          }
        }
      }
      break;
    }
  }
  return m;
}

}  // namespace internal

// Membership of a ref-word in the ref-language of the formula. Works on the
// formula directly by interval matching; ref-words are limited to 63
// letters.
inline bool MatchRefWord(const Regex &r, const RefWord &w) {
  if (w.size() > 63) throw ValidationError("ref-word too long for matcher");
  internal::FactorMatrix m = internal::Factors(r, w);
  return (m[0] >> w.size()) & 1;
}

}  // namespace spanex

#endif  // SPANEX_REGEX_HPP_
