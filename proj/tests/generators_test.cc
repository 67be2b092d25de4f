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

#include <gtest/gtest.h>

#include "qstream/bench.h"
#include "qstream/chunk_cache.h"
#include "qstream/errors.h"
#include "qstream/generators.h"
#include "qstream/pipeline.h"
#include "qstream/verifier.h"
#include "test_util.h"

using namespace qstream;

TEST(generators, adder_counts) {
    auto one = cuccaro_adder(1);
    EXPECT_EQ(one.num_qubits(), 4u);
    EXPECT_EQ(one.count(GateTag::Toffoli), 2u);
    EXPECT_EQ(lower_toffoli(one).t_count(), 14u);
    for (uint32_t bits : {4u, 17u, 64u}) {
        auto dag = cuccaro_adder(bits);
        EXPECT_EQ(dag.count(GateTag::Toffoli), 2 * bits);
        EXPECT_EQ(lower_toffoli(dag).t_count(), 14ull * bits);
        EXPECT_EQ(lower_toffoli(dag).t_count(), 7 * dag.count(GateTag::Toffoli));
    }
    EXPECT_THROW(cuccaro_adder(0), ConfigError);
}

TEST(generators, adder_exhaustive) {
    for (uint32_t bits = 1; bits <= 5; bits++) {
        EXPECT_EQ(testutil::check_adder_exhaustive(cuccaro_adder(bits), bits), "") << bits;
    }
    EXPECT_EQ(testutil::check_adder_exhaustive(lower_toffoli(cuccaro_adder(3)), 3), "");
}

TEST(generators, strider_config_validation) {
    EXPECT_NO_THROW((StriderConfig{2048, 64, 0}.validate()));
    EXPECT_NO_THROW((StriderConfig{100, 32, 4}.validate()));
    EXPECT_THROW((StriderConfig{100, 32, 0}.validate()), ConfigError);
    EXPECT_THROW((StriderConfig{64, 128, 0}.validate()), ConfigError);
    EXPECT_THROW((StriderConfig{64, 16, 16}.validate()), ConfigError);
    EXPECT_THROW((StriderConfig{0, 1, 0}.validate()), ConfigError);
}

TEST(generators, strided_plan_2048_64) {
    ChunkCache cache;
    auto plan = strided_plan({2048, 64, 0}, cache);
    EXPECT_EQ(plan.unique_chunks.size(), 2u);
    EXPECT_EQ(plan.refs.size(), 64u);
    EXPECT_EQ(plan.cache_misses, 2u);
    EXPECT_EQ(plan.cache_hits, 62u);
    EXPECT_EQ(cache.size(), 2u);
    EXPECT_EQ(cache.stats().hits, 62u);
    for (const auto &c : plan.unique_chunks) {
        EXPECT_EQ(c.n_inputs, 129u);
        EXPECT_EQ(c.k_nonclifford, 448u);
        EXPECT_TRUE(check_chunk_bound(c).ok());
    }
    // Second plan against the warm cache compiles nothing.
    auto warm = strided_plan({2048, 64, 0}, cache);
    EXPECT_EQ(warm.cache_misses, 0u);
    EXPECT_EQ(warm.cache_hits, 64u);
}

TEST(generators, strided_plan_single_block) {
    ChunkCache cache;
    auto plan = strided_plan({128, 128, 0}, cache);
    EXPECT_EQ(plan.unique_chunks.size(), 2u);
    EXPECT_EQ(plan.refs.size(), 2u);
}

TEST(generators, four_graph_states) {
    for (uint32_t alpha : {2u, 4u, 8u, 16u}) {
        for (uint32_t beta : {0u, alpha / 2}) {
            for (uint32_t k : {1u, 3u, 5u}) {
                StriderConfig cfg{beta + alpha * k, alpha, beta};
                ChunkCache cache;
                auto plan = strided_plan(cfg, cache);
                EXPECT_LE(plan.unique_chunks.size(), 4u);
                EXPECT_EQ(plan.cache_misses, plan.unique_chunks.size());
                EXPECT_EQ(plan.refs.size(), 2 * k + (beta > 0 ? 2 : 0));
                EXPECT_EQ(plan_gates(plan), lower_toffoli(cuccaro_adder(cfg.bits)).as_subcircuit().gates);
            }
        }
    }
}

TEST(generators, plan_replay_adds) {
    // Execute the plan chunk by chunk through the post-selected oracle.
    for (StriderConfig cfg : {StriderConfig{2, 1, 0}, StriderConfig{3, 2, 1}}) {
        ChunkCache cache;
        auto plan = strided_plan(cfg, cache);
        GraphChunk carry = compile_chunk(Subcircuit{2, {Gate(GateTag::CX, {0, 1})}});
        std::vector<ChainLink> chain;
        for (size_t i = 0; i <= plan.refs.size(); i++) {
            if (i == plan.carry_after) {
                chain.push_back({&carry, {plan.carry.qubits[0], plan.carry.qubits[1]}});
            }
            if (i < plan.refs.size()) {
                chain.push_back({&plan.unique_chunks[plan.refs[i].chunk], plan.refs[i].qubits});
            }
        }
        uint32_t bits = cfg.bits, nq = 2 * bits + 2;
        for (uint64_t a = 0; a < (1ull << bits); a++) {
            for (uint64_t b = 0; b < (1ull << bits); b++) {
                uint64_t in = 0;
                for (uint32_t i = 0; i < bits; i++) {
                    in |= ((b >> i) & 1) << (1 + 2 * i);
                    in |= ((a >> i) & 1) << (2 + 2 * i);
                }
                StateVector out = execute_chain(chain, StateVector::basis(nq, in));
                uint64_t want = in;
                for (uint32_t i = 0; i < bits; i++) {
                    want &= ~(1ull << (1 + 2 * i));
                    want |= (((a + b) >> i) & 1) << (1 + 2 * i);
                }
                want |= (((a + b) >> bits) & 1) << (2 * bits + 1);
                EXPECT_NEAR(std::abs(out.amplitudes()[want]), 1, 1e-9) << a << "+" << b;
            }
        }
    }
}

TEST(generators, adder_partitions_match_block_count) {
    auto dag = cuccaro_adder(2048);
    ResourceBounds b{448, 131, 1u << 20, 1u << 16};
    auto parts = partition_stream(build_edge_list(dag), dag, b);
    EXPECT_EQ(parts.size(), 64u);
    EXPECT_EQ(testutil::check_partitions(dag, parts, b), "");
}

TEST(generators, synthetic_repetitive) {
    auto a = synthetic_repetitive(20, 12, 3, 6, 5);
    auto b = synthetic_repetitive(20, 12, 3, 6, 5);
    EXPECT_EQ(emit_qasm(a), emit_qasm(b));
    EXPECT_NE(emit_qasm(a), emit_qasm(synthetic_repetitive(20, 12, 3, 6, 6)));
    EXPECT_EQ(a.size(), 240u);
    EXPECT_THROW(synthetic_repetitive(2, 4, 3, 6, 1), ConfigError);

    PipelineConfig cfg;
    cfg.bounds = synthetic_bounds(12, 6);
    auto one = run_pipeline(synthetic_repetitive(100, 12, 1, 6, 9), cfg);
    EXPECT_EQ(one.partition_count, 100u);
    EXPECT_EQ(one.cache_hits, 99u);
    auto all = run_pipeline(synthetic_repetitive(40, 12, 40, 6, 9), cfg);
    EXPECT_EQ(all.cache_hits, 0u);
    auto some = run_pipeline(synthetic_repetitive(60, 12, 7, 6, 2), cfg);
    EXPECT_GE(some.cache_hits, 53u);
}

TEST(bench, table1_small) {
    auto report = bench_table1({4}, {8, 16}, 2);
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_EQ(report.rows[1].strided_refs, 8u);
    EXPECT_EQ(report.rows[1].strided_unique, 2u);
    EXPECT_GT(report.rows[1].full_vertices, 0u);
    std::string csv = report.csv();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(report.markdown().find("|"), std::string::npos);

    auto empty = bench_table1({4}, {8}, 0);
    EXPECT_TRUE(empty.rows.empty());
    std::string empty_csv = empty.csv();
    EXPECT_EQ(std::count(empty_csv.begin(), empty_csv.end(), '\n'), 1);
    auto s = summarize({1, 2, 3});
    EXPECT_DOUBLE_EQ(s.mean, 2);
    EXPECT_DOUBLE_EQ(s.stdev, 1);
}
