// Copyright 2026 The qstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSTREAM_BENCH_H
#define QSTREAM_BENCH_H

#include <cstdint>
#include <string>
#include <vector>

#include "qstream/graph_compiler.h"

namespace qstream {

struct Timing {
    double mean = 0;
    double stdev = 0;
};

/// Mean and sample standard deviation.
Timing summarize(const std::vector<double> &samples);

struct BenchRow {
    uint32_t bits = 0;
    uint32_t stride = 0;
    uint32_t repeats = 0;
    /// Building the lowered circuit: whole adder vs the strided blocks.
    Timing full_dec;
    Timing strided_dec;
    /// Compiling: one monolithic chunk vs the strided plan.
    Timing full_graph;
    Timing strided_graph;
    uint64_t full_vertices = 0;
    uint64_t strided_refs = 0;
    uint64_t strided_unique = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;

    std::string csv() const;
    std::string markdown() const;
};

struct BenchOptions {
    CompileOptions compile;
    /// Skip the full path above this width (0 = never skip).
    uint32_t full_max_bits = 0;
    /// Repeats for the full path; 0 means the same as the strided path.
    uint32_t full_repeats = 0;
};

/// Single-threaded. Every (size, stride) pair with stride <= size gets a row.
BenchReport bench_table1(const std::vector<uint32_t> &strides, const std::vector<uint32_t> &sizes, uint32_t repeats,
                         const BenchOptions &opts = {});

}  // namespace qstream

#endif
