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

// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
// Usage: qstream_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qstream/bench.h"
#include "qstream/chunk_cache.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/generators.h"
#include "qstream/graph_compiler.h"
#include "qstream/partitioner.h"
#include "qstream/pipeline.h"
#include "qstream/verifier.h"
#include "qstream/wire_format.h"
#include "test_util.h"

using namespace qstream;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

// Chunks produced by criterion 1, reused by criterion 2.
std::vector<GraphChunk> g_chain_chunks;

// Partition a small random circuit, compile every partition and run the
// chain through the oracle.
Outcome criterion_1() {
    DecompositionTable table;
    std::mt19937_64 rng(20260101);
    testutil::RandomCircuitSpec spec;  // n <= 4, <= 6 non-Cliffords, <= 25 gates
    double worst = 1;
    size_t failures = 0, links = 0;
    for (int rep = 0; rep < 200; rep++) {
        CircuitDag dag = testutil::random_circuit(rng, spec, table);
        ResourceBounds b;
        b.max_t_count = 1 + (uint32_t)(rng() % 3);
        b.max_qubits = 2 + (uint32_t)(rng() % 3);
        b.max_gates = 3 + (uint32_t)(rng() % 8);
        b.window_size = 4 + (uint32_t)(rng() % 27);
        auto parts = partition_stream(build_edge_list(dag), dag, b, &table);
        std::vector<GraphChunk> chunks;
        std::vector<std::vector<uint32_t>> maps;
        chunks.reserve(parts.size());
        for (const auto &p : parts) {
            auto ex = extract_subcircuit(dag, p.node_ids);
            chunks.push_back(compile_chunk(ex.sub, {.table = &table}));
            maps.push_back(ex.qubit_map);
        }
        std::vector<ChainLink> chain;
        for (size_t i = 0; i < chunks.size(); i++) {
            chain.push_back({&chunks[i], maps[i]});
        }
        links += chain.size();
        double f = process_fidelity(dag, chain, &table);
        worst = std::min(worst, f);
        failures += f < 1 - 1e-9;
        for (auto &c : chunks) {
            g_chain_chunks.push_back(std::move(c));
        }
    }
    return {failures == 0, "200 circuits, " + std::to_string(links) + " chunks, min process fidelity " +
                               fmt("%.12f", worst) + ", failures " + std::to_string(failures)};
}

Outcome criterion_2() {
    DecompositionTable table;
    std::mt19937_64 rng(777);
    testutil::RandomCircuitSpec spec;
    spec.max_qubits = 6;
    spec.max_gates = 40;
    spec.max_nonclifford = 10;
    std::vector<GraphChunk> chunks = g_chain_chunks;
    std::vector<uint64_t> expected_k(chunks.size(), UINT64_MAX);
    for (int rep = 0; rep < 500; rep++) {
        Subcircuit sub = testutil::random_circuit(rng, spec, table).as_subcircuit();
        uint64_t k = 0;
        for (const auto &g : sub.gates) {
            k += !is_clifford(g.kind.tag) && !(g.kind.tag == GateTag::Rz && table.is_clifford_key(*g.kind.rz_key));
        }
        chunks.push_back(compile_chunk(sub, {.table = &table}));
        expected_k.push_back(k);
    }
    size_t violations = 0;
    std::string first;
    for (size_t i = 0; i < chunks.size(); i++) {
        const GraphChunk &c = chunks[i];
        std::string why;
        if (c.n_vertices > 2ull * c.n_inputs + c.k_nonclifford) {
            why = "n_vertices " + std::to_string(c.n_vertices) + " > 2n+k";
        } else if (c.tape.size() != c.k_nonclifford) {
            why = "tape " + std::to_string(c.tape.size()) + " != k";
        } else if (c.num_nonidentity_locals() > (size_t)c.n_inputs + c.k_nonclifford) {
            why = "locals " + std::to_string(c.num_nonidentity_locals()) + " > n+k";
        } else if (!check_chunk_bound(c).ok()) {
            why = "check_chunk_bound";
        } else if (expected_k[i] != UINT64_MAX && c.k_nonclifford != expected_k[i]) {
            why = "k " + std::to_string(c.k_nonclifford) + " != non-Clifford count " + std::to_string(expected_k[i]);
        }
        if (!why.empty()) {
            violations++;
            if (first.empty()) {
                first = "; first: chunk " + std::to_string(i) + " (n " + std::to_string(c.n_inputs) + ", k " +
                        std::to_string(c.k_nonclifford) + ") " + why;
            }
        }
    }
    return {violations == 0 && !g_chain_chunks.empty(),
            std::to_string(chunks.size()) + " chunks (" + std::to_string(g_chain_chunks.size()) +
                " from criterion 1), violations " + std::to_string(violations) + first};
}

Outcome criterion_3() {
    std::mt19937_64 rng(4242);
    size_t bad = 0;
    std::string first;
    uint64_t total_gates = 0;
    for (int rep = 0; rep < 100; rep++) {
        uint32_t gates = (uint32_t)std::lround(std::pow(10.0, 3 + 2 * std::uniform_real_distribution<double>()(rng)));
        uint32_t qubits = 3 + (uint32_t)(rng() % 200);
        auto dag = testutil::random_dag(rng, gates, qubits, rep % 2 == 0);
        ResourceBounds b;
        b.max_t_count = 7 + (uint32_t)(rng() % 60);
        b.max_qubits = 3 + (uint32_t)(rng() % 30);
        b.max_gates = 1 + (uint32_t)(rng() % 500);
        b.window_size = 1 + (uint32_t)(rng() % 20000);
        auto parts = partition_stream(build_edge_list(dag), dag, b);
        std::string err = testutil::check_partitions(dag, parts, b);
        if (!err.empty()) {
            bad++;
            if (first.empty()) {
                first = err;
            }
        }
        total_gates += gates;
    }
    // Scaling: partitioning time on 2e5 vs 4e5 gates, same generator.
    auto time_partition = [](uint32_t gates) {
        std::mt19937_64 r(99);
        auto dag = testutil::random_dag(r, gates, 64, true);
        auto el = build_edge_list(dag);
        ResourceBounds b{32, 12, 128, 4096};
        std::vector<double> t;
        for (int i = 0; i < 5; i++) {
            auto t0 = Clock::now();
            auto parts = partition_stream(el, dag, b);
            t.push_back(since(t0));
        }
        return median(t);
    };
    double t2 = time_partition(200000), t4 = time_partition(400000);
    double ratio = t4 / t2;
    std::string detail = "100 DAGs (" + std::to_string(total_gates) + " gates), invalid " + std::to_string(bad) +
                         (first.empty() ? "" : " [" + first + "]") + "; t(4e5)/t(2e5) = " + fmt("%.2f", ratio) +
                         " (" + fmt("%.3f", t4) + " s / " + fmt("%.3f", t2) + " s)";
    return {bad == 0 && ratio <= 2.5, detail};
}

Outcome criterion_4() {
    BenchOptions small;
    small.full_repeats = 5;
    BenchOptions large;
    large.full_repeats = 1;
    auto r128 = bench_table1({64}, {128}, 5, small).rows.at(0);
    auto r2048 = bench_table1({64}, {2048}, 5, large).rows.at(0);
    auto strided = [](const BenchRow &r) {
        return r.strided_dec.mean + r.strided_graph.mean;
    };
    auto full = [](const BenchRow &r) {
        return r.full_dec.mean + r.full_graph.mean;
    };
    double flat = strided(r2048) / strided(r128);
    double growth = full(r2048) / full(r128);
    double speedup = full(r2048) / strided(r2048);
    std::string detail = "strided 128: " + fmt("%.4f", strided(r128)) + " s, 2048: " + fmt("%.4f", strided(r2048)) +
                         " s (ratio " + fmt("%.2f", flat) + "); full 128: " + fmt("%.3f", full(r128)) +
                         " s, 2048: " + fmt("%.2f", full(r2048)) + " s (ratio " + fmt("%.0f", growth) +
                         "); speedup at 2048: " + fmt("%.0f", speedup) + "x";
    return {flat <= 1.5 && growth >= 8 && speedup >= 100, detail};
}

Outcome criterion_5() {
    size_t configs = 0, bad = 0;
    size_t max_unique = 0;
    std::vector<StriderConfig> cfgs{{2048, 64, 0}, {2048 + 32, 64, 32}};
    for (uint32_t alpha : {2u, 4u, 8u, 16u, 32u, 64u}) {
        for (uint32_t beta : {0u, alpha / 2}) {
            for (uint32_t k : {1u, 2u, 3u, 7u}) {
                cfgs.push_back({beta + alpha * k, alpha, beta});
            }
        }
    }
    for (const auto &cfg : cfgs) {
        ChunkCache cache;
        AdderPlan plan = strided_plan(cfg, cache);
        configs++;
        max_unique = std::max(max_unique, plan.unique_chunks.size());
        std::set<CacheKey> keys(plan.unique_keys.begin(), plan.unique_keys.end());
        bad += plan.unique_chunks.size() > 4 || plan.cache_misses != plan.unique_chunks.size() ||
               keys.size() != plan.unique_chunks.size();
    }
    return {bad == 0, std::to_string(configs) + " configs, max unique chunks " + std::to_string(max_unique) +
                          ", violations " + std::to_string(bad)};
}

Outcome criterion_6() {
    std::string err;
    for (uint32_t bits = 1; bits <= 4 && err.empty(); bits++) {
        err = testutil::check_adder_exhaustive(cuccaro_adder(bits), bits);
    }
    if (err.empty()) {
        err = testutil::check_adder_exhaustive(lower_toffoli(cuccaro_adder(4)), 4);
    }
    return {err.empty(), err.empty() ? "bits 1..4 exhaustive (256 pairs at 4 bits), Toffoli and lowered forms" : err};
}

Outcome criterion_7() {
    size_t golden_ok = 0;
    for (const auto &[name, c] : testutil::golden_chunks()) {
        golden_ok += to_hex(as_bytes(encode_chunk(c))) == testutil::golden_hex(name);
    }
    std::mt19937_64 rng(7);
    size_t round_ok = 0;
    for (int i = 0; i < 1000; i++) {
        GraphChunk c = testutil::random_chunk(rng, 8, 8);
        std::string b = encode_chunk(c);
        round_ok += decode_chunk(b) == c && encode_chunk(decode_chunk(b)) == b;
    }
    // Every single-byte substitution anywhere in a FULL_CHUNK frame.
    GraphChunk c = testutil::random_chunk(rng, 3, 3);
    StreamFrame f{FrameType::FULL_CHUNK, 5,
                  encode_cache_ref({sha256(std::string_view("golden")), testutil::iota(c.n_inputs)}) + encode_chunk(c)};
    std::string good;
    append_frame(good, f);
    size_t tried = 0, missed = 0;
    for (size_t i = 0; i < good.size(); i++) {
        for (int d = 1; d < 256; d++) {
            std::string m = good;
            m[i] = (char)(m[i] ^ d);
            tried++;
            size_t pos = 0;
            try {
                parse_frame(m, pos);
                missed++;
            } catch (const Error &) {
            }
        }
    }
    return {golden_ok == 3 && round_ok == 1000 && missed == 0,
            "golden " + std::to_string(golden_ok) + "/3, round trips " + std::to_string(round_ok) +
                "/1000, corruptions detected " + std::to_string(tried - missed) + "/" + std::to_string(tried)};
}

Outcome criterion_8() {
    std::mt19937_64 rng(8080);
    DecompositionTable table;
    size_t runs = 0, bad = 0;
    for (int rep = 0; rep < 50; rep++) {
        auto dag = lower_toffoli(testutil::random_dag(rng, 200 + (uint32_t)(rng() % 800), 3 + (uint32_t)(rng() % 6), true));
        ResourceBounds b{7 + (uint32_t)(rng() % 10), 3 + (uint32_t)(rng() % 3), 8 + (uint32_t)(rng() % 30),
                         16 + (uint32_t)(rng() % 200)};
        auto parts = partition_stream(build_edge_list(dag), dag, b, &table);
        bool parts_ok = testutil::check_partitions(dag, parts, b, &table).empty();
        for (uint32_t w : {1u, 2u, 4u, 8u}) {
            PipelineConfig cfg;
            cfg.bounds = b;
            cfg.workers = w;
            cfg.queue_capacity = 1 + (uint32_t)(rng() % 8);
            cfg.compile.table = &table;
            std::string stream;
            cfg.stream_out = &stream;
            auto m = run_pipeline(dag, cfg);
            std::vector<uint64_t> want(parts.size());
            std::iota(want.begin(), want.end(), 0);
            auto frames = read_all_frames(stream);
            size_t chunk_frames = 0;
            for (const auto &fr : frames) {
                chunk_frames += fr.type == FrameType::FULL_CHUNK || fr.type == FrameType::CACHE_REF;
            }
            bool ok = parts_ok && m.delivered == want && chunk_frames == parts.size() && !frames.empty() &&
                      frames.back().type == FrameType::END && m.queue_high_watermark <= cfg.queue_capacity;
            bad += !ok;
            runs++;
        }
    }
    // Stalled consumer: the frame queue fills and stays bounded.
    PipelineConfig slow;
    slow.bounds = synthetic_bounds(6, 6);
    slow.queue_capacity = 4;
    slow.workers = 2;
    slow.consumer_rate = 2000;
    auto sm = run_pipeline(synthetic_repetitive(100, 6, 4, 6, 1), slow);
    bool bp = sm.queue_high_watermark <= 4 && sm.delivered.size() == 100;

    // Warm run with repeated keys. 40 distinct blocks so the cold run has
    // compile work worth timing; medians of 3 replays.
    PipelineConfig rc;
    rc.bounds = synthetic_bounds(24, 8);
    auto rdag = synthetic_repetitive(300, 24, 40, 8, 3);
    std::vector<double> cold_s, warm_s;
    uint64_t warm_misses = 0;
    for (int rep = 0; rep < 3; rep++) {
        auto rr = replay_speedup(rdag, rc);
        cold_s.push_back(rr.cold_s);
        warm_s.push_back(rr.warm_s);
        warm_misses += rr.warm.cache_misses;
    }
    std::sort(cold_s.begin(), cold_s.end());
    std::sort(warm_s.begin(), warm_s.end());
    bool warm = warm_s[1] <= cold_s[1] && warm_misses == 0;
    return {bad == 0 && bp && warm,
            std::to_string(runs) + " runs, order/exactly-once failures " + std::to_string(bad) +
                "; stalled consumer high watermark " + std::to_string(sm.queue_high_watermark) +
                "/4; replay median cold " + fmt("%.4f", cold_s[1]) + " s, warm " + fmt("%.4f", warm_s[1]) +
                " s, warm misses " + std::to_string(warm_misses)};
}

Outcome criterion_9() {
    std::vector<uint32_t> sizes{25000, 50000, 100000, 200000, 400000};
    std::vector<double> rates;
    bool four = true;
    for (uint32_t n : sizes) {
        std::mt19937_64 rng(n);
        auto dag = testutil::random_dag(rng, n, 64, false);
        PipelineConfig cfg;
        cfg.bounds = {16, 6, 24, 8192};
        cfg.queue_capacity = 256;
        std::vector<double> r;
        for (int i = 0; i < 3; i++) {
            auto m = run_pipeline(dag, cfg);
            auto st = m.stages();
            four &= st.size() == 4 && st[0].stage == "insertion" && st[1].stage == "partitioning" &&
                    st[2].stage == "extraction" && st[3].stage == "compile";
            std::string csv = stage_report_csv(m);
            four &= std::count(csv.begin(), csv.end(), '\n') == 5;
            r.push_back(st[1].gates_per_second);
        }
        rates.push_back(median(r));
    }
    auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
    double spread = *hi / *lo;
    std::string detail = "partition gates/s over 25k..400k gates:";
    for (double r : rates) {
        detail += " " + fmt("%.3g", r);
    }
    detail += " (max/min " + fmt("%.2f", spread) + "); four stage rows " + (four ? "yes" : "no");
    return {spread <= 2 && four, detail};
}

}  // namespace

int main(int argc, char **argv) {
    std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"semantic compilation correctness", criterion_1},
        {"chunk size bounds", criterion_2},
        {"partitioner validity and scaling", criterion_3},
        {"strided vs full table shape", criterion_4},
        {"at most four graph states", criterion_5},
        {"adder functional correctness", criterion_6},
        {"wire format exactness", criterion_7},
        {"pipeline protocol", criterion_8},
        {"partition throughput flatness", criterion_9},
    };
    std::set<int> only;
    for (int i = 1; i < argc; i++) {
        only.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); i++) {
        int id = (int)i + 1;
        if (!only.empty() && !only.count(id) && !(id == 1 && only.count(2))) {
            continue;
        }
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!only.empty() && !only.count(id)) {
            continue;
        }
        std::printf("criterion %d %s: %s (%s) [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
