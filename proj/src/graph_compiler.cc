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

#include "qstream/graph_compiler.h"

#include <algorithm>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/tableau.h"

namespace qstream {

namespace {

struct Step {
    bool teleport = false;
    GateTag tag = GateTag::I;
    uint32_t key = 0;
    Gate gate;
};

// Clifford gates that can act on a wire still sitting on its input vertex.
bool stays_on_input(GateTag t) {
    switch (t) {
        case GateTag::I:
        case GateTag::X:
        case GateTag::Y:
        case GateTag::Z:
        case GateTag::S:
        case GateTag::Sdg:
        case GateTag::CZ:
            return true;
        default:
            return false;
    }
}

std::vector<Step> classify(const Subcircuit &sub, uint32_t n, const DecompositionTable &table, bool strict) {
    std::vector<Step> steps;
    steps.reserve(sub.gates.size());
    for (const auto &g : sub.gates) {
        for (auto q : g.targets()) {
            if (q >= n) {
                throw ConfigError("gate qubit " + std::to_string(q) + " out of range for a " + std::to_string(n) +
                                  "-qubit chunk");
            }
        }
        Step s;
        s.gate = g;
        s.tag = g.kind.tag;
        switch (g.kind.tag) {
            case GateTag::Toffoli:
                throw ConfigError("unlowered Toffoli; run lower_toffoli before compiling");
            case GateTag::Measure:
                throw ConfigError("measurements cannot be compiled into a chunk");
            case GateTag::T:
                s.teleport = true;
                s.key = 1;
                break;
            case GateTag::Tdg:
                s.teleport = true;
                s.key = 7;
                break;
            case GateTag::Rz: {
                uint32_t key = *g.kind.rz_key;
                if (!table.contains(key)) {
                    throw ConfigError("unknown decomposition key " + std::to_string(key));
                }
                if (table.is_clifford_key(key)) {
                    static const GateTag even[4] = {GateTag::I, GateTag::S, GateTag::Z, GateTag::Sdg};
                    s.tag = even[key / 2];
                } else {
                    if (strict && table.is_pending(key)) {
                        throw ConfigError("Rz key " + std::to_string(key) + " is pending a decomposition sequence");
                    }
                    s.teleport = true;
                    s.key = key;
                }
                break;
            }
            default:
                break;
        }
        steps.push_back(s);
    }
    return steps;
}

// Copies `count` bits starting at bit `offset` of `src` into `dst` from bit 0.
void copy_bits(const uint64_t *src, size_t offset, size_t count, uint64_t *dst) {
    size_t w0 = offset >> 6, sh = offset & 63;
    size_t words = (count + 63) / 64;
    for (size_t w = 0; w < words; w++) {
        uint64_t lo = src[w0 + w] >> sh;
        uint64_t hi = 0;
        if (sh && (w0 + w + 1) * 64 < offset + count + 64) {
            hi = src[w0 + w + 1] << (64 - sh);
        }
        dst[w] = lo | hi;
    }
    if (count & 63) {
        dst[words - 1] &= (uint64_t{1} << (count & 63)) - 1;
    }
}

}  // namespace

uint32_t count_teleported(const Subcircuit &sub, const DecompositionTable *table) {
    const DecompositionTable &t = table ? *table : DecompositionTable::global();
    uint32_t k = 0;
    for (const auto &s : classify(sub, sub.num_qubits, t, false)) {
        k += s.teleport;
    }
    return k;
}

GraphChunk compile_chunk(const Subcircuit &sub, uint32_t n, const CompileOptions &opts) {
    const DecompositionTable &table = opts.table ? *opts.table : DecompositionTable::global();
    if (n == 0) {
        throw ConfigError("compile_chunk needs n >= 1");
    }
    std::vector<Step> steps = classify(sub, n, table, opts.strict);

    // Pre-scan for the vertex count.
    uint32_t t = 0, k = 0;
    {
        std::vector<uint8_t> pristine(n, 1);
        for (const auto &s : steps) {
            if (s.teleport) {
                k++;
                pristine[s.gate.qubits[0]] = 0;
            } else if (s.tag == GateTag::SWAP) {
                std::swap(pristine[s.gate.qubits[0]], pristine[s.gate.qubits[1]]);
            } else if (!stays_on_input(s.tag)) {
                for (auto q : s.gate.targets()) {
                    t += pristine[q];
                    pristine[q] = 0;
                }
            }
        }
    }
    const uint32_t V = n + t + k;
    const size_t N = (size_t)n + V;
    // Columns 0..n-1 are reference qubits, each Bell-paired with an input
    // vertex; column n+v is chunk vertex v. The reference halves carry the
    // process, so the reduced graph describes a channel rather than a state.
    auto col = [n](uint32_t v) {
        return (size_t)n + v;
    };

    Tableau tab = Tableau::new_plus_state(N);
    std::vector<uint32_t> wire(n);
    std::vector<uint8_t> pristine(n, 1);
    std::vector<TapeEntry> tape;
    tape.reserve(k);
    uint32_t next = n;
    {
        TransposedTableau tt(tab);
        for (uint32_t q = 0; q < n; q++) {
            tt.cz(q, col(q));
            tt.h(q);
            wire[q] = q;
        }
        auto move_to_fresh = [&](uint32_t q) {
            uint32_t v = wire[q], w = next++;
            tt.cz(col(v), col(w));
            tt.h(col(w));
            wire[q] = w;
            pristine[q] = 0;
            return v;
        };
        for (const auto &s : steps) {
            if (s.teleport) {
                uint32_t v = move_to_fresh(s.gate.qubits[0]);
                tape.push_back({v, s.key});
                continue;
            }
            if (s.tag == GateTag::SWAP) {
                uint32_t a = s.gate.qubits[0], b = s.gate.qubits[1];
                std::swap(wire[a], wire[b]);
                std::swap(pristine[a], pristine[b]);
                continue;
            }
            if (!stays_on_input(s.tag)) {
                for (auto q : s.gate.targets()) {
                    if (pristine[q]) {
                        move_to_fresh(q);
                    }
                }
            }
            uint32_t cols[3];
            for (size_t j = 0; j < s.gate.num_qubits; j++) {
                cols[j] = (uint32_t)col(wire[s.gate.qubits[j]]);
            }
            tt.apply_gate(GateKind(s.tag), std::span<const uint32_t>(cols, s.gate.num_qubits));
        }
        for (uint32_t q = 0; q < n; q++) {
            tt.h(q);
        }
    }
    if (next != V) {
        throw InvariantError("vertex allocation disagrees with the pre-scan");
    }

    ReducePolicy policy;
    policy.no_hadamard.assign(N, 0);
    policy.frozen.assign(N, 0);
    for (size_t c = 0; c < 2 * (size_t)n; c++) {
        policy.no_hadamard[c] = 1;
    }
    for (size_t c = 0; c < n; c++) {
        policy.frozen[c] = 1;
    }
    std::vector<LocalClifford> locals;
    tab.reduce(policy, locals);

    // A reference row must read +X_r Z_a. A stray sign there is moved off by
    // X on a, which also flips the rows of a's other neighbours; Z on each of
    // those flips them back.
    auto record = [&](size_t c, GateTag g) {
        locals[c] = LocalClifford::from_gate(g).after(locals[c]);
    };
    for (uint32_t q = 0; q < n; q++) {
        if (!tab.sign(q)) {
            continue;
        }
        size_t a = col(q);
        tab.x(a);
        record(a, GateTag::X);
        for (size_t u = n; u < N; u++) {
            if (u != a && tab.zs.get(a, u)) {
                tab.z(u);
                record(u, GateTag::Z);
            }
        }
    }

    for (size_t r = 0; r < N; r++) {
        if (tab.sign(r)) {
            throw InvariantError("phase survived chunk reduction");
        }
        if (tab.xs.row_popcount(r) != 1 || !tab.xs.get(r, r)) {
            throw InvariantError("x block is not the identity after reduction");
        }
    }
    for (uint32_t q = 0; q < n; q++) {
        if (tab.zs.row_popcount(q) != 1 || !tab.zs.get(q, col(q))) {
            throw InvariantError("reference qubit is not a leaf on its input vertex");
        }
    }
    if (N <= 4096) {
        for (size_t a = 0; a < N; a++) {
            for (size_t b = a + 1; b < N; b++) {
                if (tab.zs.get(a, b) != tab.zs.get(b, a)) {
                    throw InvariantError("reduced adjacency is not symmetric");
                }
            }
        }
    }

    GraphChunk c;
    c.n_inputs = n;
    c.k_nonclifford = k;
    c.n_vertices = V;
    c.adjacency = BitMatrix(V, V);
    for (uint32_t v = 0; v < V; v++) {
        copy_bits(tab.zs.row(col(v)), n, V, c.adjacency.row(v));
    }
    c.locals.assign(locals.begin() + n, locals.end());
    c.tape = std::move(tape);
    for (uint32_t q = 0; q < n; q++) {
        c.input_map.push_back(q);
    }
    c.output_map = wire;

    if (opts.minimize_locals) {
        minimize_locals(c, opts.minimize);
    } else {
        canonicalize_measured_locals(c);
    }
    return c;
}

StitchPlan stitch(const GraphChunk &a, const GraphChunk &b, uint64_t a_id, uint64_t b_id) {
    if (a.n_inputs != b.n_inputs) {
        throw ConfigError("stitch arity mismatch: producer has " + std::to_string(a.n_inputs) +
                          " outputs, consumer has " + std::to_string(b.n_inputs) + " inputs");
    }
    StitchPlan p;
    p.producer_chunk = a_id;
    p.consumer_chunk = b_id;
    for (uint32_t q = 0; q < a.n_inputs; q++) {
        p.wire_map.push_back({a.output_map[q], b.input_map[q]});
    }
    return p;
}

size_t chain_vertex_count(const std::vector<const GraphChunk *> &chain) {
    size_t v = 0;
    for (const auto *c : chain) {
        v += c->n_vertices;
    }
    return v;
}

ResourceBounds bounds_for_cache(uint32_t max_n, uint32_t max_k) {
    if (max_n < 1 || max_k < 1) {
        throw ConfigError("bounds_for_cache needs max_n, max_k >= 1");
    }
    ResourceBounds b;
    b.max_qubits = max_n;
    b.max_t_count = max_k;
    uint64_t g = (uint64_t)max_n * max_k;
    b.max_gates = (uint32_t)std::min<uint64_t>(g, 1u << 30);
    b.window_size = 1u << 16;
    return b;
}

}  // namespace qstream
