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

#include <map>
#include <numbers>
#include <random>

#include "qstream/circuit.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/verifier.h"
#include "test_util.h"

using namespace qstream;

namespace {

// Wire edges rebuilt by walking each qubit's gate list in program order,
// without looking at prev/next links.
std::vector<std::pair<uint32_t, uint32_t>> wire_edges_by_walk(const CircuitDag &dag) {
    std::map<uint32_t, uint32_t> last;
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t id = 0; id < dag.size(); id++) {
        std::vector<uint32_t> srcs;
        for (auto q : dag.node(id).qubits()) {
            auto it = last.find(q);
            if (it != last.end()) {
                srcs.push_back(it->second);
            }
            last[q] = id;
        }
        // two wires from the same gate give one edge
        std::sort(srcs.begin(), srcs.end());
        srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
        for (auto s : srcs) {
            out.push_back({s, id});
        }
    }
    return out;
}

}  // namespace

TEST(circuit, parse_two_nodes) {
    DecompositionTable table;
    auto dag = parse_qasm("qubit[2] q; h q[0]; cx q[0],q[1];", &table);
    ASSERT_EQ(dag.size(), 2u);
    EXPECT_EQ(dag.node(0).kind().tag, GateTag::H);
    EXPECT_EQ(dag.node(1).kind().tag, GateTag::CX);
    auto el = build_edge_list(dag);
    ASSERT_EQ(el.edges.size(), 1u);
    EXPECT_EQ(el.edges[0], std::make_pair(0u, 1u));
}

TEST(circuit, parse_rz_pi_over_4_is_builtin) {
    DecompositionTable table;
    auto dag = parse_qasm("qubit[1] q; rz(0.7853981633974483) q[0];", &table);
    ASSERT_EQ(dag.size(), 1u);
    EXPECT_EQ(dag.node(0).kind().tag, GateTag::Rz);
    EXPECT_EQ(dag.node(0).kind().rz_key, 1u);
    EXPECT_EQ(table.lookup_sequence(1).sequence, std::vector<SeqLetter>{SeqLetter::T});
}

TEST(circuit, parse_errors) {
    try {
        parse_qasm("qubit[1] q; badgate q[0];");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("badgate"), std::string::npos);
        EXPECT_EQ(e.line, 1u);
    }
    EXPECT_THROW(parse_qasm("qubit[2] q;\nh q[2];"), ParseError);
    EXPECT_THROW(parse_qasm("qubit[2] q;\ncx q[0] q[1];"), ParseError);
    EXPECT_THROW(parse_qasm("h q[0];"), ParseError);
    try {
        parse_qasm("qubit[2] q;\nh q[0];\n  cx q[0], q[7];");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line, 3u);
    }
}

TEST(circuit, parse_accepts_header_comments_and_qreg) {
    auto dag = parse_qasm(
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n// comment\nqreg r[3];\n/* block */ ccx r[0], r[1], r[2];\n"
        "swap r[0], r[2];\n");
    EXPECT_EQ(dag.num_qubits(), 3u);
    ASSERT_EQ(dag.size(), 2u);
    EXPECT_EQ(dag.node(0).kind().tag, GateTag::Toffoli);
}

TEST(circuit, emit_empty_is_header_only) {
    CircuitDag dag(1);
    std::string text = emit_qasm(dag);
    EXPECT_EQ(text.find(';', text.find("qubit[1] q;") + 11), std::string::npos);
    auto back = parse_qasm(text);
    EXPECT_EQ(back.num_qubits(), 1u);
    EXPECT_TRUE(back.empty());
}

TEST(circuit, emit_parse_round_trip_random) {
    DecompositionTable table;
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; rep++) {
        auto dag = testutil::random_dag(rng, 1000, 9, true);
        dag.append(GateKind::rz(table.intern_angle(0.3 + rep)), {2});
        auto back = parse_qasm(emit_qasm(dag, &table), &table);
        EXPECT_TRUE(isomorphic(dag, back));
        EXPECT_EQ(build_edge_list(dag).edges, build_edge_list(back).edges);
    }
}

TEST(circuit, edge_list_hand_trace) {
    CircuitDag single(1);
    single.append(GateTag::H, {0});
    EXPECT_TRUE(build_edge_list(single).edges.empty());

    CircuitDag dag(2);
    dag.append(GateTag::H, {0});
    dag.append(GateTag::T, {0});
    dag.append(GateTag::CX, {0, 1});
    dag.append(GateTag::T, {1});
    std::vector<std::pair<uint32_t, uint32_t>> want{{0, 1}, {1, 2}, {2, 3}};
    EXPECT_EQ(build_edge_list(dag).edges, want);
}

TEST(circuit, edge_list_matches_wire_walk) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; rep++) {
        CircuitDag dag(3);
        for (int i = 0; i < 200; i++) {
            uint32_t a = rng() % 3, b = (a + 1 + rng() % 2) % 3;
            switch (rng() % 4) {
                case 0:
                case 1:
                    dag.append(GateTag::SWAP, {a, b});
                    break;
                case 2:
                    dag.append(GateTag::CX, {a, b});
                    break;
                default:
                    dag.append(GateTag::T, {a});
            }
        }
        dag.validate();
        auto el = build_edge_list(dag).edges;
        auto want = wire_edges_by_walk(dag);
        EXPECT_EQ(el, want);
        EXPECT_EQ(el.size(), dag.num_wire_edges());
        for (size_t i = 1; i < el.size(); i++) {
            EXPECT_LE(el[i - 1].second, el[i].second);
        }
    }
}

TEST(circuit, lower_toffoli_single) {
    CircuitDag dag(3);
    dag.append(GateTag::Toffoli, {0, 1, 2});
    auto low = lower_toffoli(dag);
    EXPECT_EQ(low.size(), 15u);
    EXPECT_EQ(low.count(GateTag::Toffoli), 0u);
    EXPECT_EQ(low.t_count(), 7u);
    EXPECT_GE(process_fidelity(dag, low), 1 - 1e-12);
}

TEST(circuit, lower_toffoli_identity_without_toffolis) {
    std::mt19937_64 rng(3);
    auto dag = testutil::random_dag(rng, 100, 4, false);
    auto low = lower_toffoli(dag);
    EXPECT_TRUE(isomorphic(dag, low));
}

TEST(circuit, lower_toffoli_preserves_action) {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; rep++) {
        auto dag = testutil::random_dag(rng, 30, 3 + rep % 4, true);
        dag.append(GateTag::Toffoli, {0, 2, 1});
        auto low = lower_toffoli(dag);
        EXPECT_EQ(low.t_count(), dag.t_count());
        EXPECT_EQ(low.count(GateTag::Toffoli), 0u);
        EXPECT_GE(process_fidelity(dag, low), 1 - 1e-12);
    }
}

TEST(circuit, extract_relabels_by_first_use) {
    CircuitDag dag(8);
    dag.append(GateTag::CX, {3, 7});
    dag.append(GateTag::H, {0});
    dag.append(GateTag::T, {7});
    auto ex = extract_subcircuit(dag, {0, 2});
    EXPECT_EQ(ex.sub.num_qubits, 2u);
    EXPECT_EQ(ex.qubit_map, (std::vector<uint32_t>{3, 7}));
    EXPECT_EQ(ex.sub.gates[0], Gate(GateTag::CX, {0, 1}));
    EXPECT_EQ(ex.sub.gates[1], Gate(GateTag::T, {1}));
}
