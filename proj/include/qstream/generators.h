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

#ifndef QSTREAM_GENERATORS_H
#define QSTREAM_GENERATORS_H

#include <cstdint>
#include <optional>
#include <vector>

#include "qstream/chunk_cache.h"
#include "qstream/circuit.h"
#include "qstream/graph_chunk.h"
#include "qstream/graph_compiler.h"
#include "qstream/partitioner.h"

namespace qstream {

/// Register layout of the ripple-carry adder: c0, then (b_i, a_i) per bit,
/// then the carry-out z. The sum replaces b.
struct AdderLayout {
    uint32_t bits = 0;

    uint32_t num_qubits() const {
        return 2 * bits + 2;
    }
    uint32_t carry_in() const {
        return 0;
    }
    uint32_t b(uint32_t i) const {
        return 1 + 2 * i;
    }
    uint32_t a(uint32_t i) const {
        return 2 + 2 * i;
    }
    uint32_t carry_out() const {
        return 2 * bits + 1;
    }
};

void append_maj(CircuitDag &dag, uint32_t c, uint32_t b, uint32_t a);
void append_uma(CircuitDag &dag, uint32_t c, uint32_t b, uint32_t a);
std::vector<Gate> maj_gates(uint32_t c, uint32_t b, uint32_t a);
std::vector<Gate> uma_gates(uint32_t c, uint32_t b, uint32_t a);

CircuitDag cuccaro_adder(uint32_t bits);

struct StriderConfig {
    uint32_t bits = 0;
    uint32_t alpha = 1;
    uint32_t beta = 0;

    void validate() const;
    uint32_t k_blocks() const {
        return (bits - beta) / alpha;
    }
};

enum class BlockKind : uint8_t { MAJ, UMA };

/// Block of `width` MAJ or UMA gates over local qubits: 0 = carry in, then
/// (b_i, a_i) pairs. Toffolis lowered.
std::vector<Gate> adder_block(BlockKind kind, uint32_t width);

struct PlanRef {
    CacheKey key;
    /// Global qubit per chunk wire.
    std::vector<uint32_t> qubits;
    /// Index into AdderPlan::unique_chunks.
    uint32_t chunk = 0;
};

struct AdderPlan {
    StriderConfig cfg;
    std::vector<PlanRef> refs;
    std::vector<CacheKey> unique_keys;
    std::vector<GraphChunk> unique_chunks;
    /// The carry-out copy CX(a_{bits-1}, z). It is a single Clifford gate
    /// applied between the MAJ references and the UMA references, not a chunk.
    Gate carry;
    size_t carry_after = 0;
    uint64_t cache_hits = 0;
    uint64_t cache_misses = 0;
};

AdderPlan strided_plan(const StriderConfig &cfg, ChunkCache &cache, const CompileOptions &opts = {});

/// Gate list that the plan replays, for checking against cuccaro_adder.
std::vector<Gate> plan_gates(const AdderPlan &plan);

/// `blocks` copies of `distinct_blocks` random templates, each copy on a
/// fresh permutation of the register. Consecutive gates of a template share a
/// qubit, so a partitioner with max_gates = block_gates cuts at block edges.
CircuitDag synthetic_repetitive(uint32_t blocks, uint32_t block_gates, uint32_t distinct_blocks, uint32_t qubits,
                                uint64_t seed);
ResourceBounds synthetic_bounds(uint32_t block_gates, uint32_t qubits);

}  // namespace qstream

#endif
