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

// Command line front end: eval, check, compile, analyze, bench, gen.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spanex/harness.hpp"
#include "spanex/spanex.hpp"

namespace {

using namespace spanex;

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitError = 2;

std::string ReadFile(const std::string &path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const std::string &path, const std::string &data) {
  if (path == "-") {
    std::fwrite(data.data(), 1, data.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << data;
}

Document ReadDocument(const std::string &path, bool keep_newline) {
  std::string text = ReadFile(path);
  if (!keep_newline && !text.empty() && text.back() == '\n') {
    text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
  }
  return Document::FromUtf8(text);
}

void Emit(const std::string &line) {
  std::fwrite(line.data(), 1, line.size(), stdout);
  std::fputc('\n', stdout);
  std::fflush(stdout);
}

struct EvalFlags {
  std::string query;
  std::string input;
  std::string format = "tsv";
  std::string strategy = "auto";
  size_t max_join = 0;
  size_t max_eq = 0;
  size_t limit = 0;
  bool keep_newline = false;
};

EvalOptions MakeOptions(CLI::App *cmd, const EvalFlags &f) {
  EvalOptions opt;
  opt.ApplyEnvironment();
  if (cmd->count("--max-join-compile")) opt.max_join_compile = f.max_join;
  if (cmd->count("--max-equality-compile")) opt.max_equality_compile = f.max_eq;
  if (f.strategy == "canonical") {
    opt.strategy = EvalOptions::kCanonical;
  } else if (f.strategy == "compiled") {
    opt.strategy = EvalOptions::kCompiled;
  } else {
    opt.strategy = EvalOptions::kAuto;
  }
  return opt;
}

void AddEvalFlags(CLI::App *cmd, EvalFlags *f) {
  cmd->add_option("--query", f->query, "query file (.spq)")->required();
  cmd->add_option("--input", f->input, "document file, - for stdin")->required();
  cmd->add_option("--strategy", f->strategy, "auto, canonical or compiled")
      ->check(CLI::IsMember({"auto", "canonical", "compiled"}));
  cmd->add_option("--max-join-compile", f->max_join,
                  "largest number of atoms compiled into one automaton");
  cmd->add_option("--max-equality-compile", f->max_eq,
                  "largest number of equalities compiled into one automaton");
  cmd->add_option("--limit", f->limit, "stop after this many tuples");
  cmd->add_flag("--keep-trailing-newline", f->keep_newline,
                "do not strip one trailing newline from the document");
}

int RunEval(CLI::App *cmd, const EvalFlags &f) {
  RegexUCQ q = ParseQuery(ReadFile(f.query));
  Document d = ReadDocument(f.input, f.keep_newline);
  auto stream = Eval(q, d, MakeOptions(cmd, f));
  if (q.IsBoolean()) {
    bool result = stream->Next().has_value();
    if (f.format == "count") {
      Emit(result ? "1" : "0");
    } else if (f.format == "json") {
      Emit(result ? "{\"result\": true}" : "{\"result\": false}");
    } else {
      Emit(result ? "true" : "false");
    }
    return result ? kExitOk : kExitEmpty;
  }
  size_t n = 0;
  while (f.limit == 0 || n < f.limit) {
    auto t = stream->Next();
    if (!t) break;
    ++n;
    if (f.format == "json") {
      Emit(TupleToJson(*t));
    } else if (f.format == "tsv") {
      Emit(TupleToTsv(*t));
    }
  }
  if (f.format == "count") Emit(std::to_string(n));
  return kExitOk;
}

Regex LoadFormula(const std::string &inline_text, const std::string &file) {
  if (!file.empty()) {
    std::string text = ReadFile(file);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
      text.pop_back();
    }
    return ParseRegex(text);
  }
  if (inline_text.empty()) throw Error("give --formula or --formula-file");
  return ParseRegex(inline_text);
}

int RunCheck(const std::string &formula, const std::string &file) {
  Regex r = LoadFormula(formula, file);
  FunctionalityReport rep = CheckFunctionalRegex(r);
  if (rep.functional) {
    std::cout << "functional: " << RegexToString(r) << "\n";
    return kExitOk;
  }
  std::cerr << "error: not functional: " << RegexToString(r) << "\n";
  for (const auto &v : rep.violations) {
    std::cerr << "  variable " << v.var << ": " << ViolationReasonName(v.reason);
    if (v.position > 0) std::cerr << " at position " << v.position;
    std::cerr << "\n";
  }
  return kExitError;
}

int RunCompile(const std::string &formula, const std::string &file,
               const std::string &dump, bool strict) {
  VSetAutomaton a = CompileRegex(LoadFormula(formula, file));
  if (strict) a = ExpandStrict(a);
  WriteFile(dump, DumpVsa(a));
  return kExitOk;
}

int RunAnalyze(const std::string &formula, const std::string &file,
               const std::string &key) {
  VSetAutomaton a = CompileRegex(LoadFormula(formula, file));
  KeyResult r = IsKeyAttribute(a, key);
  if (r.is_key) {
    std::cout << key << " is a key\n";
    return kExitOk;
  }
  std::cout << key << " is not a key\n";
  std::cout << "document: \"" << r.witness->document.ToUtf8() << "\"\n";
  std::cout << "tuple: " << TupleToJson(r.witness->first) << "\n";
  std::cout << "tuple: " << TupleToJson(r.witness->second) << "\n";
  return kExitOk;
}

int RunBenchCommand(CLI::App *cmd, const EvalFlags &f,
                    const std::string &report) {
  RegexUCQ q = ParseQuery(ReadFile(f.query));
  Document d = ReadDocument(f.input, f.keep_newline);
  BenchReport r = RunBench(q, d, MakeOptions(cmd, f), f.limit);
  std::ostringstream csv;
  r.WriteCsv(csv);
  WriteFile(report, csv.str());
  std::cerr << "tuples " << r.tuples() << ", preprocess " << r.preprocess_ns
            << " ns, max delay " << r.max_delay() << " ns, median delay "
            << r.median_delay() << " ns\n";
  return kExitOk;
}

// "1 2 -3, -1 2 3": clauses separated by commas.
Cnf ParseCnf(const std::string &text) {
  Cnf f;
  std::stringstream all(text);
  std::string clause;
  while (std::getline(all, clause, ',')) {
    std::stringstream in(clause);
    std::vector<int> lits;
    int lit;
    while (in >> lit) lits.push_back(lit);
    if (lits.empty()) continue;
    if (lits.size() != 3) throw ValidationError("clause needs three literals: " + clause);
    for (int l : lits) f.num_vars = std::max(f.num_vars, std::abs(l));
    f.clauses.push_back({lits[0], lits[1], lits[2]});
  }
  return f;
}

// "5: 1-2 2-3 3-1": node count, then edges.
Graph ParseGraph(const std::string &text) {
  Graph g;
  size_t colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("graph needs 'n: u-v ...'");
  g.num_nodes = std::stoi(text.substr(0, colon));
  std::stringstream in(text.substr(colon + 1));
  std::string e;
  while (in >> e) {
    size_t dash = e.find('-');
    if (dash == std::string::npos) throw ValidationError("bad edge " + e);
    int u = std::stoi(e.substr(0, dash)), v = std::stoi(e.substr(dash + 1));
    if (u < 1 || v < 1 || u > g.num_nodes || v > g.num_nodes) {
      throw ValidationError("edge endpoint out of range: " + e);
    }
    g.AddEdge(u, v);
  }
  return g;
}

struct GenFlags {
  std::string kind;
  std::string out;
  uint64_t seed = 1;
  std::string cnf;
  int vars = 5;
  int clauses = 10;
  std::string graph;
  int nodes = 6;
  double density = 0.5;
  int k = 3;
};

int RunGen(const GenFlags &f) {
  Rng rng(f.seed);
  GeneratedQuery g;
  std::string answer;
  if (f.kind == "3cnf") {
    Cnf cnf = f.cnf.empty() ? RandomCnf(rng, f.vars, f.clauses) : ParseCnf(f.cnf);
    g = Gen3CnfQuery(cnf);
    answer = BruteForceSat(cnf) ? "satisfiable" : "unsatisfiable";
  } else {
    Graph graph =
        f.graph.empty() ? RandomGraph(rng, f.nodes, f.density) : ParseGraph(f.graph);
    g = f.kind == "clique" ? GenCliqueQuery(graph, f.k)
                           : GenStreqCliqueQuery(graph, f.k);
    answer = BruteForceClique(graph, f.k) ? "has clique" : "no clique";
  }
  WriteFile(f.out + ".spq", QueryToString(g.query));
  WriteFile(f.out + ".txt", g.document.ToUtf8());
  std::cout << "wrote " << f.out << ".spq and " << f.out << ".txt (" << answer
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"spanex: document spanners with regex formulas"};
  app.require_subcommand(1);

  EvalFlags eval_flags;
  CLI::App *eval = app.add_subcommand("eval", "evaluate a query on a document");
  AddEvalFlags(eval, &eval_flags);
  eval->add_option("--format", eval_flags.format, "tsv, json or count")
      ->check(CLI::IsMember({"tsv", "json", "count"}));

  std::string formula, formula_file, dump = "-", key, report;
  bool strict = false;
  auto add_formula = [&](CLI::App *cmd) {
    cmd->add_option("--formula", formula, "formula text");
    cmd->add_option("--formula-file", formula_file, "file holding the formula");
  };
  CLI::App *check = app.add_subcommand("check", "check that a formula is functional");
  add_formula(check);
  CLI::App *compile = app.add_subcommand("compile", "compile a formula to an automaton");
  add_formula(compile);
  compile->add_option("--dump", dump, "output file, - for stdout");
  compile->add_flag("--strict", strict, "one variable operation per transition");
  CLI::App *analyze = app.add_subcommand("analyze", "test whether a variable is a key");
  add_formula(analyze);
  analyze->add_option("--key", key, "variable to test")->required();

  EvalFlags bench_flags;
  CLI::App *bench = app.add_subcommand("bench", "measure enumeration delay");
  AddEvalFlags(bench, &bench_flags);
  bench->add_option("--report", report, "CSV output file")->required();

  GenFlags gen_flags;
  CLI::App *gen = app.add_subcommand("gen", "generate reduction instances");
  gen->add_option("kind", gen_flags.kind, "3cnf, clique or streq-clique")
      ->required()
      ->check(CLI::IsMember({"3cnf", "clique", "streq-clique"}));
  gen->add_option("--out", gen_flags.out, "output prefix")->required();
  gen->add_option("--seed", gen_flags.seed, "random seed");
  gen->add_option("--cnf", gen_flags.cnf, "clauses, e.g. \"1 2 -3, -1 2 3\"");
  gen->add_option("--vars", gen_flags.vars, "random formula variables");
  gen->add_option("--clauses", gen_flags.clauses, "random formula clauses");
  gen->add_option("--graph", gen_flags.graph, "graph, e.g. \"4: 1-2 2-3\"");
  gen->add_option("--nodes", gen_flags.nodes, "random graph nodes");
  gen->add_option("--density", gen_flags.density, "random graph edge probability");
  gen->add_option("--k", gen_flags.k, "clique size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*eval) return RunEval(eval, eval_flags);
    if (*check) return RunCheck(formula, formula_file);
    if (*compile) return RunCompile(formula, formula_file, dump, strict);
    if (*analyze) return RunAnalyze(formula, formula_file, key);
    if (*bench) return RunBenchCommand(bench, bench_flags, report);
    if (*gen) return RunGen(gen_flags);
  } catch (const std::exception &e) {
    std::fflush(stdout);
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
