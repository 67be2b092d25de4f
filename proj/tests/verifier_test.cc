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

#include <cmath>
#include <numbers>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/graph_compiler.h"
#include "qstream/verifier.h"

using namespace qstream;

namespace {

Subcircuit one_gate(GateTag tag) {
    return {1, {Gate(tag, {0})}};
}

StateVector plus() {
    return StateVector::from_amplitudes({M_SQRT1_2, M_SQRT1_2});
}

}  // namespace

TEST(verifier, h_on_zero) {
    StateVector s(1);
    s.apply_gate(Gate(GateTag::H, {0}));
    EXPECT_NEAR(s.amplitudes()[0].real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(s.amplitudes()[1].real(), M_SQRT1_2, 1e-15);
}

TEST(verifier, cx_on_10) {
    // Qubit 0 is the low bit: |q0=1, q1=0> is index 1.
    StateVector s = StateVector::basis(2, 1);
    s.apply_gate(Gate(GateTag::CX, {0, 1}));
    EXPECT_NEAR(std::abs(s.amplitudes()[3]), 1, 1e-15);
}

TEST(verifier, size_limits) {
    EXPECT_THROW(StateVector(15), ConfigError);
    EXPECT_THROW(StateVector::from_amplitudes({1, 0, 0}), ConfigError);
    CircuitDag dag(1);
    dag.append(Gate(GateTag::Measure, {0}));
    EXPECT_THROW(simulate_circuit(dag, StateVector(1)), ConfigError);
}

TEST(verifier, t_chunk_on_plus) {
    auto c = compile_chunk(one_gate(GateTag::T));
    auto out = execute_chunk_postselected(c, plus());
    auto want = StateVector::from_amplitudes({M_SQRT1_2, std::polar(M_SQRT1_2, std::numbers::pi / 4)});
    EXPECT_NEAR(fidelity(out, want), 1, 1e-12);
    EXPECT_NEAR(out.norm(), 1, 1e-12);
}

TEST(verifier, identity_chunk_keeps_input) {
    auto c = GraphChunk::identity(2);
    StateVector in = StateVector::from_amplitudes({0.5, {0, 0.5}, -0.5, {0.1, std::sqrt(0.24)}});
    auto out = execute_chunk_postselected(c, in);
    EXPECT_NEAR(fidelity(out, in), 1, 1e-12);
}

TEST(verifier, clifford_chunk_matches_simulation) {
    Subcircuit sub{2, {Gate(GateTag::H, {0}), Gate(GateTag::CX, {0, 1}), Gate(GateTag::S, {1})}};
    auto c = compile_chunk(sub);
    for (uint64_t b = 0; b < 4; b++) {
        auto in = StateVector::basis(2, b);
        EXPECT_NEAR(fidelity(execute_chunk_postselected(c, in), simulate_circuit(sub, in)), 1, 1e-12);
    }
}

TEST(verifier, process_equal_reflexive_and_symmetric) {
    CircuitDag a(2), b(2);
    a.append(GateTag::H, {0});
    a.append(GateTag::T, {1});
    b.append(GateTag::T, {1});
    b.append(GateTag::H, {0});
    EXPECT_NEAR(process_fidelity(a, a), 1, 1e-12);
    EXPECT_NEAR(process_fidelity(a, b), process_fidelity(b, a), 1e-12);
    CircuitDag c(2);
    c.append(GateTag::H, {1});
    EXPECT_NEAR(process_fidelity(a, c), process_fidelity(c, a), 1e-12);
    EXPECT_LT(process_fidelity(a, c), 0.9);

    GraphChunk ca = compile_chunk(a.as_subcircuit());
    EXPECT_TRUE(process_equal(a, {{&ca, {0, 1}}}, 1e-12));
}

TEST(verifier, t_t_chain_equals_s) {
    auto t = compile_chunk(one_gate(GateTag::T));
    CircuitDag s(1);
    s.append(GateTag::S, {0});
    EXPECT_TRUE(process_equal(s, {{&t, {0}}, {&t, {0}}}, 1e-9));
    EXPECT_FALSE(process_equal(s, {{&t, {0}}}, 1e-3));
}

TEST(verifier, adjacency_mutation_detected) {
    Subcircuit sub{2,
                   {Gate(GateTag::H, {0}), Gate(GateTag::T, {0}), Gate(GateTag::CX, {0, 1}), Gate(GateTag::T, {1}),
                    Gate(GateTag::H, {1})}};
    auto c = compile_chunk(sub);
    CircuitDag dag = CircuitDag::from_subcircuit(sub);
    ASSERT_TRUE(process_equal(dag, {{&c, {0, 1}}}, 1e-9));
    size_t flips = 0, caught = 0;
    for (uint32_t a = 0; a < c.n_vertices; a++) {
        for (uint32_t b = a + 1; b < c.n_vertices; b++) {
            GraphChunk m = c;
            m.adjacency.flip(a, b);
            m.adjacency.flip(b, a);
            flips++;
            try {
                caught += !process_equal(dag, {{&m, {0, 1}}}, 1e-9);
            } catch (const InvariantError &) {
                caught++;  // zero-probability branch also exposes the mutation
            }
        }
    }
    EXPECT_GT(flips, 0u);
    EXPECT_EQ(caught, flips);
}

TEST(verifier, chunk_operator_matches_unitary) {
    DecompositionTable table;
    uint32_t k = table.intern_angle(0.4);
    Subcircuit sub{2, {Gate(GateTag::H, {1}), Gate(GateKind::rz(k), {1}), Gate(GateTag::CZ, {0, 1})}};
    auto op = chunk_operator(compile_chunk(sub, {.table = &table}), &table);
    auto u = circuit_unitary(sub, &table);
    ASSERT_EQ(op.size(), u.size());
    Amplitude overlap = 0;
    for (size_t i = 0; i < u.size(); i++) {
        overlap += std::conj(u[i]) * op[i];
    }
    EXPECT_NEAR(std::abs(overlap) / 4, 1, 1e-10);
}
