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

#ifndef QSTREAM_GRAPH_COMPILER_H
#define QSTREAM_GRAPH_COMPILER_H

#include <cstdint>
#include <utility>
#include <vector>

#include "qstream/circuit.h"
#include "qstream/graph_chunk.h"
#include "qstream/local_minimize.h"
#include "qstream/partitioner.h"

namespace qstream {

class DecompositionTable;

struct CompileOptions {
    /// Table used to classify Rz keys. Defaults to the global table.
    const DecompositionTable *table = nullptr;
    /// Reject Rz gates whose key has no sequence yet.
    bool strict = false;
    /// Run the local-complementation pass that lowers the local count.
    bool minimize_locals = true;
    MinimizeOptions minimize;
};

/// Compiles a Clifford + T/Rz gate list over `n` logical qubits.
///
/// Vertex layout: vertices 0..n-1 are the inputs. A wire stays on its input
/// vertex while it only sees gates that commute with CZ up to Paulis
/// (I, X, Y, Z, S, Sdg, CZ). The first other Clifford teleports it onto a
/// fresh vertex. Each non-Clifford rotation on the vertex v currently
/// holding a wire allocates a fresh w, applies CZ(v, w) and H(w), and
/// records (v, key) on the tape.
GraphChunk compile_chunk(const Subcircuit &sub, uint32_t n, const CompileOptions &opts = {});
inline GraphChunk compile_chunk(const Subcircuit &sub, const CompileOptions &opts = {}) {
    return compile_chunk(sub, sub.num_qubits, opts);
}

/// Number of teleported rotations the compiler will allocate for `sub`.
uint32_t count_teleported(const Subcircuit &sub, const DecompositionTable *table = nullptr);

struct StitchPlan {
    uint64_t producer_chunk = 0;
    uint64_t consumer_chunk = 0;
    /// (producer output vertex, consumer input vertex) per logical qubit.
    std::vector<std::pair<uint32_t, uint32_t>> wire_map;

    /// Consumer input vertices that receive teleported producer outputs.
    size_t added_vertices() const {
        return wire_map.size();
    }
};

StitchPlan stitch(const GraphChunk &a, const GraphChunk &b, uint64_t a_id = 0, uint64_t b_id = 1);

/// Total vertices of a stitched chain: every chunk keeps its own vertices,
/// so each consumer contributes its n input vertices on top of the producer.
size_t chain_vertex_count(const std::vector<const GraphChunk *> &chain);

/// Partitioner bounds whose partitions always compile within
/// chunk_size_bound(max_n, max_k).
ResourceBounds bounds_for_cache(uint32_t max_n, uint32_t max_k);

}  // namespace qstream

#endif
