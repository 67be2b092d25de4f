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

#include "qstream/graph_chunk.h"

#include <algorithm>
#include <bit>

#include "qstream/errors.h"

namespace qstream {

size_t GraphChunk::num_edges() const {
    size_t e = 0;
    for (uint32_t v = 0; v < n_vertices; v++) {
        e += adjacency.row_popcount(v);
    }
    return e / 2;
}

size_t GraphChunk::num_nonidentity_locals() const {
    size_t c = 0;
    for (const auto &l : locals) {
        c += !l.is_identity();
    }
    return c;
}

std::vector<uint32_t> GraphChunk::neighbors(uint32_t v) const {
    std::vector<uint32_t> out;
    const uint64_t *r = adjacency.row(v);
    for (size_t w = 0; w < adjacency.words_per_row(); w++) {
        uint64_t bits = r[w];
        while (bits) {
            out.push_back((uint32_t)(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

bool GraphChunk::is_output(uint32_t v) const {
    return std::find(output_map.begin(), output_map.end(), v) != output_map.end();
}

bool GraphChunk::is_input(uint32_t v) const {
    return std::find(input_map.begin(), input_map.end(), v) != input_map.end();
}

bool GraphChunk::is_tape(uint32_t v) const {
    for (const auto &t : tape) {
        if (t.vertex == v) {
            return true;
        }
    }
    return false;
}

bool GraphChunk::is_x_measured(uint32_t v) const {
    return !is_tape(v) && !is_output(v);
}

void GraphChunk::validate() const {
    auto fail = [](const std::string &m) {
        throw InvariantError("chunk: " + m);
    };
    if (n_inputs == 0) {
        fail("n_inputs must be positive");
    }
    if ((uint64_t)n_vertices > 2ull * n_inputs + k_nonclifford) {
        fail("n_vertices exceeds 2n+k");
    }
    if (tape.size() != k_nonclifford) {
        fail("tape length differs from k");
    }
    if (locals.size() != n_vertices || adjacency.rows() != n_vertices || adjacency.cols() != n_vertices) {
        fail("per-vertex arrays have the wrong size");
    }
    if (input_map.size() != n_inputs || output_map.size() != n_inputs) {
        fail("input/output maps must have n entries");
    }
    std::vector<uint8_t> seen_in(n_vertices, 0), seen_out(n_vertices, 0), seen_tape(n_vertices, 0);
    for (auto v : input_map) {
        if (v >= n_vertices || seen_in[v]++) {
            fail("input_map entries must be distinct vertices");
        }
    }
    for (auto v : output_map) {
        if (v >= n_vertices || seen_out[v]++) {
            fail("output_map entries must be distinct vertices");
        }
    }
    for (const auto &t : tape) {
        if (t.vertex >= n_vertices || seen_tape[t.vertex]++) {
            fail("tape vertices must be distinct");
        }
        if (seen_out[t.vertex]) {
            fail("tape vertex appears in output_map");
        }
    }
    for (uint32_t a = 0; a < n_vertices; a++) {
        if (adjacency.get(a, a)) {
            fail("adjacency has a self loop");
        }
        if (locals[a].code() >= LocalClifford::ORDER) {
            fail("local Clifford code out of range");
        }
        for (uint32_t b = a + 1; b < n_vertices; b++) {
            if (adjacency.get(a, b) != adjacency.get(b, a)) {
                fail("adjacency is not symmetric");
            }
        }
    }
}

bool GraphChunk::operator==(const GraphChunk &other) const {
    return n_inputs == other.n_inputs && k_nonclifford == other.k_nonclifford && n_vertices == other.n_vertices &&
           adjacency == other.adjacency && locals == other.locals && tape == other.tape &&
           input_map == other.input_map && output_map == other.output_map;
}

GraphChunk GraphChunk::identity(uint32_t n) {
    GraphChunk c;
    c.n_inputs = n;
    c.n_vertices = n;
    c.adjacency = BitMatrix(n, n);
    c.locals.assign(n, LocalClifford());
    for (uint32_t q = 0; q < n; q++) {
        c.input_map.push_back(q);
        c.output_map.push_back(q);
    }
    return c;
}

ChunkBound chunk_size_bound(uint64_t n, uint64_t k) {
    uint64_t v = 2 * n + k;
    return {v, v * v, n + k, n + k};
}

BoundReport check_chunk_bound(const GraphChunk &c) {
    ChunkBound b = chunk_size_bound(c.n_inputs, c.k_nonclifford);
    BoundReport r;
    r.vertices_ok = c.n_vertices <= b.max_vertices;
    r.edges_ok = (uint64_t)c.n_vertices * c.n_vertices <= b.max_edge_pairs;
    r.locals_ok = c.num_nonidentity_locals() <= b.max_locals;
    r.keys_ok = c.tape.size() <= b.max_keys;
    r.tape_ok = c.tape.size() == c.k_nonclifford;
    return r;
}

}  // namespace qstream
