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

// Documents, spans, span tuples, ref-words and variable configurations.

#ifndef SPANEX_CORE_HPP_
#define SPANEX_CORE_HPP_

#include <algorithm>
#include <cstdint>
#include <compare>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spanex {

using Symbol = char32_t;

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for inputs that are structurally invalid (bad UTF-8, bad spans,
// mismatched variable sets and so on).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// UTF-8

inline std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  auto bad = [&](const char *why) {
    throw ValidationError("invalid UTF-8 at byte " + std::to_string(i) + ": " +
                          why);
  };
  while (i < text.size()) {
    unsigned char c = text[i];
    char32_t cp = 0;
    int extra = 0;
    if (c < 0x80) {
      cp = c;
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      bad("unexpected lead byte");
    }
    if (i + extra >= text.size()) bad("truncated sequence");
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = text[i + k];
      if ((cc & 0xC0) != 0x80) bad("bad continuation byte");
      cp = (cp << 6) | (cc & 0x3F);
    }
    static const char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra]) bad("overlong encoding");
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad("not a scalar value");
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

inline void AppendUtf8(std::string *out, char32_t cp) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) AppendUtf8(&out, cp);
  return out;
}

// ---------------------------------------------------------------------------
// Spans

// A span [start, end> over a document; positions are 1-based and the span
// selects symbols start .. end-1.
struct Span {
  uint32_t start = 1;
  uint32_t end = 1;

  uint32_t length() const { return end - start; }
  auto operator<=>(const Span &) const = default;
  bool operator==(const Span &) const = default;
};

// Renders a span as "i..j".
inline std::string FormatSpan(const Span &s) {
  return std::to_string(s.start) + ".." + std::to_string(s.end);
}

// ---------------------------------------------------------------------------
// Documents

class Document {
 public:
  Document() = default;
  explicit Document(std::u32string symbols) : symbols_(std::move(symbols)) {}

  static Document FromUtf8(std::string_view text) {
    return Document(DecodeUtf8(text));
  }

  size_t length() const { return symbols_.size(); }
  const std::u32string &symbols() const { return symbols_; }

  // Symbol at 1-based position i.
  Symbol at(size_t i) const {
    if (i < 1 || i > symbols_.size()) {
      throw std::out_of_range("document position " + std::to_string(i) +
                              " out of range");
    }
    return symbols_[i - 1];
  }

  bool IsValidSpan(const Span &s) const {
    return s.start >= 1 && s.start <= s.end && s.end <= symbols_.size() + 1;
  }

  void CheckSpan(const Span &s) const {
    if (!IsValidSpan(s)) {
      throw std::out_of_range("span " + FormatSpan(s) +
                              " out of range for document of length " +
                              std::to_string(symbols_.size()));
    }
  }

  std::u32string_view Substring(const Span &s) const {
    CheckSpan(s);
    return std::u32string_view(symbols_).substr(s.start - 1, s.length());
  }

  std::string ToUtf8() const { return EncodeUtf8(symbols_); }

  // Number of spans of a document of length l: (l+1)(l+2)/2.
  size_t SpanCount() const {
    size_t l = symbols_.size();
    return (l + 1) * (l + 2) / 2;
  }

  bool operator==(const Document &) const = default;

 private:
  std::u32string symbols_;
};

// All spans of the document in (start, end) order.
inline std::vector<Span> AllSpans(const Document &d) {
  std::vector<Span> out;
  out.reserve(d.SpanCount());
  uint32_t n = static_cast<uint32_t>(d.length());
  for (uint32_t i = 1; i <= n + 1; ++i) {
    for (uint32_t j = i; j <= n + 1; ++j) out.push_back({i, j});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Span tuples and relations

// A total map from variable names to spans. Entries are kept sorted by name.
class SpanTuple {
 public:
  using Entry = std::pair<std::string, Span>;

  SpanTuple() = default;
  SpanTuple(std::initializer_list<Entry> entries) {
    for (const auto &e : entries) Set(e.first, e.second);
  }

  void Set(const std::string &var, const Span &span) {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), var,
        [](const Entry &e, const std::string &v) { return e.first < v; });
    if (it != entries_.end() && it->first == var) {
      it->second = span;
    } else {
      entries_.insert(it, {var, span});
    }
  }

  const Span *Find(const std::string &var) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), var,
        [](const Entry &e, const std::string &v) { return e.first < v; });
    if (it == entries_.end() || it->first != var) return nullptr;
    return &it->second;
  }

  const Span &Get(const std::string &var) const {
    const Span *s = Find(var);
    if (s == nullptr) throw std::out_of_range("no variable " + var);
    return *s;
  }

  bool Has(const std::string &var) const { return Find(var) != nullptr; }

  const std::vector<Entry> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<std::string> Variables() const {
    std::vector<std::string> out;
    for (const auto &e : entries_) out.push_back(e.first);
    return out;
  }

  // Restriction to the given variables.
  SpanTuple Project(const std::vector<std::string> &vars) const {
    SpanTuple out;
    for (const auto &v : vars) out.Set(v, Get(v));
    return out;
  }

  auto operator<=>(const SpanTuple &) const = default;
  bool operator==(const SpanTuple &) const = default;

 private:
  std::vector<Entry> entries_;
};

struct SpanTupleHash {
  size_t operator()(const SpanTuple &t) const {
    size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto &[name, span] : t.entries()) {
      h ^= std::hash<std::string>()(name) + 0x9e3779b9 + (h << 6) + (h >> 2);
      h ^= (static_cast<size_t>(span.start) << 32 | span.end) + 0x9e3779b9 +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

// JSON line: {"x": [i, j], "y": [i, j]}
inline std::string TupleToJson(const SpanTuple &t) {
  std::string out = "{";
  bool first = true;
  for (const auto &[name, span] : t.entries()) {
    if (!first) out += ", ";
    first = false;
    out += "\"";
    for (char c : name) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out += "\": [" + std::to_string(span.start) + ", " +
           std::to_string(span.end) + "]";
  }
  out += "}";
  return out;
}

// TSV line with one "i..j" column per variable, in name order.
inline std::string TupleToTsv(const SpanTuple &t) {
  std::string out;
  bool first = true;
  for (const auto &e : t.entries()) {
    if (!first) out += "\t";
    first = false;
    out += FormatSpan(e.second);
  }
  return out;
}

inline std::string TupleToString(const SpanTuple &t) {
  std::string out = "(";
  bool first = true;
  for (const auto &[name, span] : t.entries()) {
    if (!first) out += ", ";
    first = false;
    out += name + "=" + FormatSpan(span);
  }
  return out + ")";
}

// A set of span tuples over a fixed variable set.
struct SpanRelation {
  std::vector<std::string> variables;  // sorted
  std::set<SpanTuple> tuples;

  SpanRelation() = default;
  explicit SpanRelation(std::vector<std::string> vars)
      : variables(std::move(vars)) {
    std::sort(variables.begin(), variables.end());
    variables.erase(std::unique(variables.begin(), variables.end()),
                    variables.end());
  }

  void Insert(const SpanTuple &t) {
    if (t.Variables() != variables) {
      throw ValidationError("tuple " + TupleToString(t) +
                            " does not match relation variables");
    }
    tuples.insert(t);
  }

  size_t size() const { return tuples.size(); }
  bool empty() const { return tuples.empty(); }
  bool operator==(const SpanRelation &) const = default;
};

// ---------------------------------------------------------------------------
// Ref-words

// One letter of a ref-word: a terminal, or an open/close marker of a
// variable.
struct RefSymbol {
  enum Kind : uint8_t { kTerminal, kOpen, kClose };
  Kind kind = kTerminal;
  Symbol symbol = 0;
  std::string var;

  static RefSymbol Terminal(Symbol s) { return {kTerminal, s, {}}; }
  static RefSymbol Open(std::string v) { return {kOpen, 0, std::move(v)}; }
  static RefSymbol Close(std::string v) { return {kClose, 0, std::move(v)}; }

  bool IsTerminal() const { return kind == kTerminal; }
  auto operator<=>(const RefSymbol &) const = default;
  bool operator==(const RefSymbol &) const = default;
};

using RefWord = std::vector<RefSymbol>;

// Parses a ref-word written with "⊢x" and "⊣x" markers, where the variable
// name is the maximal run of ASCII letters, digits and underscores.
inline RefWord ParseRefWord(std::string_view text) {
  std::u32string s = DecodeUtf8(text);
  RefWord out;
  auto is_ident = [](char32_t c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  };
  for (size_t i = 0; i < s.size();) {
    if (s[i] == U'⊢' || s[i] == U'⊣') {
      bool open = s[i] == U'⊢';
      size_t j = i + 1;
      while (j < s.size() && is_ident(s[j])) ++j;
      if (j == i + 1) throw ValidationError("marker without variable name");
      std::string name = EncodeUtf8(s.substr(i + 1, j - i - 1));
      out.push_back(open ? RefSymbol::Open(name) : RefSymbol::Close(name));
      i = j;
    } else {
      out.push_back(RefSymbol::Terminal(s[i]));
      ++i;
    }
  }
  return out;
}

inline std::string RefWordToString(const RefWord &r) {
  std::string out;
  for (const auto &x : r) {
    switch (x.kind) {
      case RefSymbol::kTerminal:
        AppendUtf8(&out, x.symbol);
        break;
      case RefSymbol::kOpen:
        out += "⊢" + x.var;
        break;
      case RefSymbol::kClose:
        out += "⊣" + x.var;
        break;
    }
  }
  return out;
}

// Terminal projection of a ref-word.
inline std::u32string Clean(const RefWord &r) {
  std::u32string out;
  for (const auto &x : r) {
    if (x.IsTerminal()) out.push_back(x.symbol);
  }
  return out;
}

// True if every variable in vars is opened exactly once and closed exactly
// once, opened before closed, and no other variable occurs.
inline bool IsValidRefWord(const RefWord &r,
                           const std::vector<std::string> &vars) {
  std::vector<int> state(vars.size(), 0);
  for (const auto &x : r) {
    if (x.IsTerminal()) continue;
    auto it = std::find(vars.begin(), vars.end(), x.var);
    if (it == vars.end()) return false;
    int &st = state[it - vars.begin()];
    if (x.kind == RefSymbol::kOpen) {
      if (st != 0) return false;
      st = 1;
    } else {
      if (st != 1) return false;
      st = 2;
    }
  }
  for (int st : state) {
    if (st != 2) return false;
  }
  return true;
}

// Variables mentioned by a ref-word, sorted.
inline std::vector<std::string> RefWordVariables(const RefWord &r) {
  std::set<std::string> s;
  for (const auto &x : r) {
    if (!x.IsTerminal()) s.insert(x.var);
  }
  return {s.begin(), s.end()};
}

// The tuple described by a valid ref-word.
inline SpanTuple RefWordToTuple(const RefWord &r) {
  std::vector<std::string> vars = RefWordVariables(r);
  if (!IsValidRefWord(r, vars)) {
    throw ValidationError("ref-word is not valid: " + RefWordToString(r));
  }
  SpanTuple t;
  std::vector<uint32_t> open_at(vars.size(), 0);
  uint32_t consumed = 0;
  for (const auto &x : r) {
    if (x.IsTerminal()) {
      ++consumed;
      continue;
    }
    size_t k = std::find(vars.begin(), vars.end(), x.var) - vars.begin();
    if (x.kind == RefSymbol::kOpen) {
      open_at[k] = consumed + 1;
    } else {
      t.Set(x.var, Span{open_at[k], consumed + 1});
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Variable configurations

// Per-variable state while scanning a ref-word: waiting, open or closed.
// The numeric order is the canonical order w < o < c.
enum class VarState : uint8_t { kWaiting = 0, kOpen = 1, kClosed = 2 };

inline char VarStateChar(VarState s) {
  switch (s) {
    case VarState::kWaiting:
      return 'w';
    case VarState::kOpen:
      return 'o';
    case VarState::kClosed:
      return 'c';
  }
  return '?';
}

// States indexed by the position of the variable in a sorted name list.
// Lexicographic comparison of two configurations is the canonical order.
using Configuration = std::vector<VarState>;

inline std::string ConfigurationToString(const Configuration &c) {
  std::string out = "(";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += ",";
    out.push_back(VarStateChar(c[i]));
  }
  return out + ")";
}

struct ConfigurationHash {
  size_t operator()(const Configuration &c) const {
    size_t h = 1469598103934665603ULL;
    for (VarState s : c) {
      h ^= static_cast<size_t>(s);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Sequence c_1 .. c_{l+1}: position p holds the state of each variable
// after the first p-1 symbols.
using ConfigSequence = std::vector<Configuration>;

inline VarState StateAt(const Span &s, uint32_t position) {
  if (position < s.start) return VarState::kWaiting;
  if (position < s.end) return VarState::kOpen;
  return VarState::kClosed;
}

inline ConfigSequence TupleToConfigSequence(
    const SpanTuple &t, const std::vector<std::string> &vars, size_t length) {
  ConfigSequence seq(length + 1, Configuration(vars.size()));
  for (size_t k = 0; k < vars.size(); ++k) {
    const Span &s = t.Get(vars[k]);
    if (s.start < 1 || s.start > s.end || s.end > length + 1) {
      throw std::out_of_range("span " + FormatSpan(s) + " out of range");
    }
    for (uint32_t p = 1; p <= length + 1; ++p) seq[p - 1][k] = StateAt(s, p);
  }
  return seq;
}

// Inverse of TupleToConfigSequence; the sequence must be monotone and end
// with every variable closed.
inline SpanTuple ConfigSequenceToTuple(const ConfigSequence &seq,
                                       const std::vector<std::string> &vars) {
  if (seq.empty()) throw ValidationError("empty configuration sequence");
  SpanTuple t;
  for (size_t k = 0; k < vars.size(); ++k) {
    uint32_t start = 0, end = 0;
    VarState prev = VarState::kWaiting;
    for (size_t p = 0; p < seq.size(); ++p) {
      if (seq[p].size() != vars.size()) {
        throw ValidationError("configuration arity mismatch");
      }
      VarState s = seq[p][k];
      if (s < prev) throw ValidationError("configuration sequence not monotone");
      if (s != VarState::kWaiting && start == 0) start = p + 1;
      if (s == VarState::kClosed && end == 0) end = p + 1;
      prev = s;
    }
    if (end == 0) {
      throw ValidationError("variable " + vars[k] + " never closed");
    }
    t.Set(vars[k], Span{start, end});
  }
  return t;
}

// Radix order on tuples over the same variables and document length: the
// order of their configuration sequences compared position by position.
inline bool RadixLess(const SpanTuple &a, const SpanTuple &b) {
  const auto &ea = a.entries();
  const auto &eb = b.entries();
  uint32_t last = 1;
  for (const auto &e : ea) last = std::max(last, e.second.end);
  for (const auto &e : eb) last = std::max(last, e.second.end);
  for (uint32_t p = 1; p <= last; ++p) {
    for (size_t k = 0; k < ea.size() && k < eb.size(); ++k) {
      VarState sa = StateAt(ea[k].second, p);
      VarState sb = StateAt(eb[k].second, p);
      if (sa != sb) return sa < sb;
    }
  }
  return false;
}

// Sorted, deduplicated copy of a list of names.
inline std::vector<std::string> SortedUnique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool IsIdentChar(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

}  // namespace spanex

#endif  // SPANEX_CORE_HPP_
