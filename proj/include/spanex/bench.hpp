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

// Delay measurement for query evaluation.
//
// CSV layout, one row per event:
//   event,index,elapsed_ns,delay_ns
//   preprocess,0,<t>,<t>
//   tuple,<i>,<t>,<time since previous tuple or end of preprocessing>
//   max_delay,,,<ns>        (only when at least one tuple was produced)
//   median_delay,,,<ns>

#ifndef SPANEX_BENCH_HPP_
#define SPANEX_BENCH_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "spanex/query.hpp"

namespace spanex {

struct BenchReport {
  uint64_t preprocess_ns = 0;
  std::vector<uint64_t> elapsed_ns;  // per tuple, since the start
  std::vector<uint64_t> delay_ns;    // per tuple

  size_t tuples() const { return delay_ns.size(); }
  uint64_t max_delay() const {
    return delay_ns.empty() ? 0 : *std::max_element(delay_ns.begin(), delay_ns.end());
  }
  uint64_t median_delay() const {
    if (delay_ns.empty()) return 0;
    std::vector<uint64_t> v = delay_ns;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  }

  void WriteCsv(std::ostream &out) const {
    out << "event,index,elapsed_ns,delay_ns\n";
    out << "preprocess,0," << preprocess_ns << "," << preprocess_ns << "\n";
    for (size_t i = 0; i < delay_ns.size(); ++i) {
      out << "tuple," << i + 1 << "," << elapsed_ns[i] << "," << delay_ns[i]
          << "\n";
    }
    if (!delay_ns.empty()) {
      out << "max_delay,,," << max_delay() << "\n";
      out << "median_delay,,," << median_delay() << "\n";
    }
  }
};

// Times preprocessing and every tuple of the query. Tuples are pulled and
// discarded; limit 0 means no limit.
inline BenchReport RunBench(const RegexUCQ &q, const Document &d,
                            const EvalOptions &opt, size_t limit = 0) {
  using Clock = std::chrono::steady_clock;
  auto ns = [](Clock::duration x) {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(x).count());
  };
  BenchReport r;
  // A deque grows in small blocks, so no reallocation lands in a delay.
  std::deque<Clock::time_point> stamps;
  Clock::time_point t0 = Clock::now();
  std::unique_ptr<TupleStream> s = Eval(q, d, opt);
  Clock::time_point t1 = Clock::now();
  r.preprocess_ns = ns(t1 - t0);
  while (s->Next()) {
    stamps.push_back(Clock::now());
    if (limit > 0 && stamps.size() >= limit) break;
  }
  Clock::time_point prev = t1;
  for (const auto &t : stamps) {
    r.elapsed_ns.push_back(ns(t - t0));
    r.delay_ns.push_back(ns(t - prev));
    prev = t;
  }
  return r;
}

}  // namespace spanex

#endif  // SPANEX_BENCH_HPP_
