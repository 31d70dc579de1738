// This file is part of robustmdp, a C++ library for solving plain and
// robust Markov decision processes.
//
// MIT License
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
// copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.

#pragma once

#include "robustmdp/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace robustmdp {

/// One benchmarked operator setting: a rectangularity plus a norm index.
/// id is the CSV label ("nonrobust", "sa:1", "s:inf", "s:10", ...).
struct BenchSetting {
    Rectangularity rect = Rectangularity::NonRobust;
    NormIndex p = NormIndex::two();
    std::string id = "nonrobust";

    static BenchSetting parse(const std::string& text);
};

/**
 * Benchmark plan: for every (S, A) size and every setting, run `iters`
 * sweeps of the corresponding optimal operator and record the
 * median-of-`repeats` wall time per sweep, normalized by the non-robust
 * row of the same size. Radii are one uniform scalar applied to every
 * alpha and beta entry. Timing excludes instance generation and I/O.
 */
struct BenchSpec {
    std::vector<std::pair<long, long>> sizes; // (S, A)
    std::vector<BenchSetting> settings;
    long repeats = 5;
    prec_t gamma = 0.9;
    prec_t radii = 0.1;
    long iters = 100;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// One CSV row of the benchmark output.
struct BenchRow {
    std::string setting;
    long num_states = 0;
    long num_actions = 0;
    prec_t ms_per_iter = 0.0;
    prec_t relative_cost = 0.0;  // 1 for the non-robust row by definition
    prec_t residual_ratio = 0.0; // fitted over the last 20 iterations
};

/**
 * Parses a benchmark plan from TOML text. Only the flat subset needed
 * here is understood: `key = value` lines with integer, float, string
 * and (nested) array values, plus # comments. Unknown keys are rejected.
 * Throws std::invalid_argument on malformed input.
 */
BenchSpec parse_bench_toml(const std::string& text);

/// Runs the plan. Settings are timed sequentially to keep timings clean.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// Renders rows as CSV with header setting,S,A,ms_per_iter,relative_cost,residual_ratio.
std::string bench_csv(const std::vector<BenchRow>& rows);

} // namespace robustmdp
