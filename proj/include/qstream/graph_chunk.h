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

#ifndef QSTREAM_GRAPH_CHUNK_H
#define QSTREAM_GRAPH_CHUNK_H

#include <cstdint>
#include <vector>

#include "qstream/bit_matrix.h"
#include "qstream/local_clifford.h"

namespace qstream {

struct TapeEntry {
    uint32_t vertex = 0;
    uint32_t key = 0;
    bool operator==(const TapeEntry &other) const = default;
};

/// Compiled partition: graph, local Cliffords, measurement tape and the
/// logical-qubit maps.
///
/// Execution semantics (post-selected): input vertices hold the incoming
/// logical state, every other vertex starts in |+>. Apply CZ on each edge,
/// then locals[v]^dag on each vertex. Each tape vertex is projected onto
/// <m_theta| with |m_theta> = (|0> + e^{-i theta}|1>)/sqrt2. Vertices that
/// are neither tape nor output are projected onto <+|. The survivors, read
/// in output_map order, carry the result.
struct GraphChunk {
    uint32_t n_inputs = 0;
    uint32_t k_nonclifford = 0;
    uint32_t n_vertices = 0;
    BitMatrix adjacency;
    std::vector<LocalClifford> locals;
    std::vector<TapeEntry> tape;
    std::vector<uint32_t> input_map;
    std::vector<uint32_t> output_map;

    size_t num_edges() const;
    size_t num_nonidentity_locals() const;
    std::vector<uint32_t> neighbors(uint32_t v) const;
    bool is_output(uint32_t v) const;
    bool is_input(uint32_t v) const;
    bool is_tape(uint32_t v) const;
    /// Neither tape nor output: projected onto <+|.
    bool is_x_measured(uint32_t v) const;

    /// Throws InvariantError when a structural invariant fails.
    void validate() const;

    bool operator==(const GraphChunk &other) const;

    /// n identity wires: input_map == output_map, no edges.
    static GraphChunk identity(uint32_t n);
};

struct ChunkBound {
    uint64_t max_vertices = 0;
    uint64_t max_edge_pairs = 0;
    uint64_t max_locals = 0;
    uint64_t max_keys = 0;
    bool operator==(const ChunkBound &other) const = default;
};

/// (2n+k, (2n+k)^2, n+k, n+k).
ChunkBound chunk_size_bound(uint64_t n, uint64_t k);

struct BoundReport {
    bool vertices_ok = true;
    bool edges_ok = true;
    bool locals_ok = true;
    bool keys_ok = true;
    bool tape_ok = true;
    bool ok() const {
        return vertices_ok && edges_ok && locals_ok && keys_ok && tape_ok;
    }
};
BoundReport check_chunk_bound(const GraphChunk &c);

}  // namespace qstream

#endif
