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

#include <random>

#include "qstream/errors.h"
#include "qstream/partitioner.h"
#include "test_util.h"

using namespace qstream;

namespace {

CircuitDag four_gate() {
    CircuitDag dag(2);
    dag.append(GateTag::H, {0});
    dag.append(GateTag::T, {0});
    dag.append(GateTag::CX, {0, 1});
    dag.append(GateTag::T, {1});
    return dag;
}

std::vector<Partition> run(const CircuitDag &dag, const ResourceBounds &b) {
    return partition_stream(build_edge_list(dag), dag, b);
}

}  // namespace

TEST(partitioner, union_examples) {
    CircuitDag dag(1);
    dag.append(GateTag::T, {0});
    dag.append(GateTag::T, {0});
    std::vector<uint32_t> q{0};
    {
        UnionFind uf(2, 1);
        uf.make_set(0, 1, q);
        uf.make_set(1, 1, q);
        EXPECT_TRUE(uf.unite(0, 1, {2, 3, 10, 10}));
        EXPECT_EQ(uf.find(0), uf.find(1));
        EXPECT_EQ(uf.agg(uf.find(0)).t_count, 2u);
        EXPECT_EQ(uf.agg(uf.find(0)).gate_count, 2u);
    }
    {
        UnionFind uf(2, 1);
        uf.make_set(0, 1, q);
        uf.make_set(1, 1, q);
        EXPECT_FALSE(uf.unite(0, 1, {1, 3, 10, 10}));
        EXPECT_NE(uf.find(0), uf.find(1));
        EXPECT_EQ(uf.agg(uf.find(0)).t_count, 1u);
        EXPECT_EQ(uf.agg(uf.find(1)).t_count, 1u);
    }
}

TEST(partitioner, union_find_aggregates) {
    std::mt19937_64 rng(6);
    uint32_t n = 300, nq = 130;
    UnionFind uf(n, nq);
    std::vector<std::vector<uint32_t>> qs(n);
    std::vector<uint32_t> tw(n);
    for (uint32_t i = 0; i < n; i++) {
        qs[i] = {(uint32_t)(rng() % nq)};
        tw[i] = (uint32_t)(rng() % 2);
        uf.make_set(i, tw[i], qs[i]);
    }
    ResourceBounds big{1000, 1000, 1000, 1000};
    for (int i = 0; i < 400; i++) {
        uf.unite((uint32_t)(rng() % n), (uint32_t)(rng() % n), big);
    }
    std::vector<uint32_t> t(n, 0), g(n, 0);
    std::vector<QubitSet> sets(n, QubitSet(nq));
    for (uint32_t i = 0; i < n; i++) {
        uint32_t r = uf.find(i);
        EXPECT_EQ(uf.find(r), r);
        t[r] += tw[i];
        g[r]++;
        sets[r].insert(qs[i][0]);
    }
    for (uint32_t i = 0; i < n; i++) {
        if (uf.find(i) == i) {
            EXPECT_EQ(uf.agg(i).t_count, t[i]);
            EXPECT_EQ(uf.agg(i).gate_count, g[i]);
            EXPECT_EQ(uf.agg(i).qubits.to_vector(), sets[i].to_vector());
        }
    }
}

TEST(partitioner, four_gate_hand_trace) {
    CircuitDag dag = four_gate();
    for (uint32_t w : {4u, 5u, 100u}) {
        auto parts = run(dag, {1, 3, 100, w});
        ASSERT_EQ(parts.size(), 2u);
        EXPECT_EQ(parts[0].node_ids, (std::vector<uint32_t>{0, 1, 2}));
        EXPECT_EQ(parts[1].node_ids, (std::vector<uint32_t>{3}));
        EXPECT_EQ(parts[0].t_count, 1u);
        EXPECT_EQ(parts[0].qubit_set, (std::vector<uint32_t>{0, 1}));
        ASSERT_EQ(parts[0].boundary_out.size(), 1u);
        EXPECT_EQ(parts[0].boundary_out[0], (BoundaryEdge{1, 2, 3}));
        EXPECT_EQ(parts[1].boundary_in, parts[0].boundary_out);
        EXPECT_EQ(parts[0].id, 0u);
        EXPECT_EQ(parts[1].id, 1u);
    }
}

TEST(partitioner, empty_and_singletons) {
    CircuitDag empty(3);
    EXPECT_TRUE(run(empty, {1, 3, 1, 8}).empty());

    std::mt19937_64 rng(1);
    auto dag = testutil::random_dag(rng, 500, 6, true);
    auto parts = run(dag, {100, 6, 100, 1});
    ASSERT_EQ(parts.size(), dag.size());
    for (size_t i = 0; i < parts.size(); i++) {
        EXPECT_EQ(parts[i].node_ids, std::vector<uint32_t>{(uint32_t)i});
    }
}

TEST(partitioner, lone_gate_violation_names_gate) {
    CircuitDag dag(3);
    dag.append(GateTag::H, {0});
    dag.append(GateTag::Toffoli, {0, 1, 2});
    try {
        run(dag, {7, 2, 10, 10});
        FAIL();
    } catch (const ConfigError &e) {
        std::string m = e.what();
        EXPECT_NE(m.find("gate 1"), std::string::npos) << m;
        EXPECT_NE(m.find("Toffoli"), std::string::npos) << m;
    }
    EXPECT_THROW(run(dag, {6, 3, 10, 10}), ConfigError);
    EXPECT_THROW(run(dag, {0, 3, 10, 10}), ConfigError);
}

TEST(partitioner, random_property_sweep) {
    std::mt19937_64 rng(314);
    for (int rep = 0; rep < 60; rep++) {
        uint32_t qubits = 3 + (uint32_t)(rng() % 40);
        uint32_t gates = 100 + (uint32_t)(rng() % 3000);
        auto dag = testutil::random_dag(rng, gates, qubits, rep % 2 == 0);
        ResourceBounds b;
        b.max_t_count = 7 + (uint32_t)(rng() % 30);
        b.max_qubits = 3 + (uint32_t)(rng() % 10);
        b.max_gates = 1 + (uint32_t)(rng() % 80);
        b.window_size = 1 + (uint32_t)(rng() % 2000);
        auto el = build_edge_list(dag);
        auto parts = partition_stream(el, dag, b);
        EXPECT_EQ(testutil::check_partitions(dag, parts, b), "") << "rep " << rep;
        EXPECT_EQ(parts, partition_stream(el, dag, b));
    }
}

TEST(partitioner, resident_state_stays_within_window) {
    std::mt19937_64 rng(8);
    auto dag = testutil::random_dag(rng, 1000000, 64, false);
    ResourceBounds b{16, 8, 64, 4096};
    EdgeList el = build_edge_list(dag);
    Partitioner p(dag, el, b);
    uint64_t count = 0, covered = 0;
    p.run([&](Partition &&part) {
        count++;
        covered += part.node_ids.size();
    });
    EXPECT_EQ(covered, dag.size());
    EXPECT_LE(p.stats().peak_resident_nodes, 2ull * b.window_size);
    EXPECT_EQ(peak_memory_nodes({1, 3, 1, 1024}), 1024u);
    EXPECT_GT(count, 0u);
}

TEST(qubit_set, operations) {
    QubitSet a(130), b(130);
    a.insert(0);
    a.insert(129);
    b.insert(129);
    b.insert(64);
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a.union_size(b), 3u);
    a.merge(b);
    EXPECT_EQ(a.to_vector(), (std::vector<uint32_t>{0, 64, 129}));
    EXPECT_TRUE(a.contains(64));
    EXPECT_FALSE(a.contains(1));
}
