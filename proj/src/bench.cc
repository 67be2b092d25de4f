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

#include "qstream/bench.h"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qstream/chunk_cache.h"
#include "qstream/errors.h"
#include "qstream/generators.h"

namespace qstream {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

Timing summarize(const std::vector<double> &samples) {
    Timing t;
    if (samples.empty()) {
        return t;
    }
    double s = 0;
    for (double x : samples) {
        s += x;
    }
    t.mean = s / (double)samples.size();
    if (samples.size() > 1) {
        double v = 0;
        for (double x : samples) {
            v += (x - t.mean) * (x - t.mean);
        }
        t.stdev = std::sqrt(v / (double)(samples.size() - 1));
    }
    return t;
}

BenchReport bench_table1(const std::vector<uint32_t> &strides, const std::vector<uint32_t> &sizes, uint32_t repeats,
                         const BenchOptions &opts) {
    BenchReport report;
    if (repeats == 0) {
        return report;
    }
    for (uint32_t bits : sizes) {
        for (uint32_t stride : strides) {
            if (stride == 0 || stride > bits) {
                continue;
            }
            StriderConfig cfg{bits, stride, bits % stride};
            cfg.validate();
            BenchRow row;
            row.bits = bits;
            row.stride = stride;
            row.repeats = repeats;

            std::vector<double> sd, sg;
            for (uint32_t r = 0; r < repeats; r++) {
                auto t0 = std::chrono::steady_clock::now();
                std::vector<std::vector<Gate>> blocks{adder_block(BlockKind::MAJ, stride),
                                                      adder_block(BlockKind::UMA, stride)};
                if (cfg.beta) {
                    blocks.push_back(adder_block(BlockKind::MAJ, cfg.beta));
                    blocks.push_back(adder_block(BlockKind::UMA, cfg.beta));
                }
                sd.push_back(seconds_since(t0));

                ChunkCache cache;
                t0 = std::chrono::steady_clock::now();
                AdderPlan plan = strided_plan(cfg, cache, opts.compile);
                sg.push_back(seconds_since(t0));
                row.strided_refs = plan.refs.size();
                row.strided_unique = plan.unique_chunks.size();
            }
            row.strided_dec = summarize(sd);
            row.strided_graph = summarize(sg);

            if (!opts.full_max_bits || bits <= opts.full_max_bits) {
                uint32_t fr = opts.full_repeats ? opts.full_repeats : repeats;
                std::vector<double> fd, fg;
                for (uint32_t r = 0; r < fr; r++) {
                    auto t0 = std::chrono::steady_clock::now();
                    Subcircuit sub = lower_toffoli(cuccaro_adder(bits)).as_subcircuit();
                    fd.push_back(seconds_since(t0));
                    t0 = std::chrono::steady_clock::now();
                    GraphChunk c = compile_chunk(sub, opts.compile);
                    fg.push_back(seconds_since(t0));
                    row.full_vertices = c.n_vertices;
                }
                row.full_dec = summarize(fd);
                row.full_graph = summarize(fg);
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

std::string BenchReport::csv() const {
    std::string out =
        "bits,stride,repeats,full_dec_mean_s,full_dec_std_s,strided_dec_mean_s,strided_dec_std_s,"
        "full_graph_mean_s,full_graph_std_s,strided_graph_mean_s,strided_graph_std_s,full_vertices,strided_refs,"
        "strided_unique\n";
    for (const auto &r : rows) {
        out += std::to_string(r.bits) + "," + std::to_string(r.stride) + "," + std::to_string(r.repeats) + "," +
               fmt(r.full_dec.mean) + "," + fmt(r.full_dec.stdev) + "," + fmt(r.strided_dec.mean) + "," +
               fmt(r.strided_dec.stdev) + "," + fmt(r.full_graph.mean) + "," + fmt(r.full_graph.stdev) + "," +
               fmt(r.strided_graph.mean) + "," + fmt(r.strided_graph.stdev) + "," + std::to_string(r.full_vertices) +
               "," + std::to_string(r.strided_refs) + "," + std::to_string(r.strided_unique) + "\n";
    }
    return out;
}

std::string BenchReport::markdown() const {
    auto pm = [](const Timing &t) {
        return fmt(t.mean) + " ± " + fmt(t.stdev);
    };
    std::string out =
        "| Bits | Stride | Full Dec. (s) | Strided Dec. (s) | Full Gr. (s) | Strided Gr. (s) |\n"
        "|---:|---:|---:|---:|---:|---:|\n";
    for (const auto &r : rows) {
        out += "| " + std::to_string(r.bits) + " | " + std::to_string(r.stride) + " | " + pm(r.full_dec) + " | " +
               pm(r.strided_dec) + " | " + pm(r.full_graph) + " | " + pm(r.strided_graph) + " |\n";
    }
    return out;
}

}  // namespace qstream
