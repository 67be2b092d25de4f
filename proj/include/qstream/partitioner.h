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

#ifndef QSTREAM_PARTITIONER_H
#define QSTREAM_PARTITIONER_H

#include <cstdint>
#include <functional>
#include <vector>

#include "qstream/circuit.h"

namespace qstream {

class DecompositionTable;

struct ResourceBounds {
    uint32_t max_t_count = 1;
    uint32_t max_qubits = 3;
    uint32_t max_gates = 1;
    /// Nodes per in-memory batch.
    uint32_t window_size = 1;

    /// Throws ConfigError unless every field is in range.
    void validate() const;
    bool operator==(const ResourceBounds &other) const = default;
};

/// Fixed-capacity qubit bitset.
class QubitSet {
   public:
    QubitSet() = default;
    explicit QubitSet(uint32_t capacity) : words_((capacity + 63) / 64, 0) {
    }
    void insert(uint32_t q) {
        words_[q >> 6] |= uint64_t{1} << (q & 63);
    }
    bool contains(uint32_t q) const {
        return (words_[q >> 6] >> (q & 63)) & 1;
    }
    void merge(const QubitSet &other);
    uint32_t size() const;
    uint32_t union_size(const QubitSet &other) const;
    std::vector<uint32_t> to_vector() const;
    bool empty() const {
        return words_.empty();
    }

   private:
    std::vector<uint64_t> words_;
};

struct Aggregate {
    uint32_t t_count = 0;
    uint32_t gate_count = 0;
    QubitSet qubits;
};

/// Union-find with per-root aggregates. unite() refuses merges that break
/// the bounds and leaves the state unchanged in that case.
class UnionFind {
   public:
    UnionFind() = default;
    UnionFind(uint32_t size, uint32_t num_qubits);

    /// Initializes element `i` as a singleton holding one gate.
    void make_set(uint32_t i, uint32_t t_weight, std::span<const uint32_t> qubits);
    uint32_t find(uint32_t i);
    bool unite(uint32_t a, uint32_t b, const ResourceBounds &bounds);
    /// Checks the bounds of merging a set of distinct roots.
    bool fits(const std::vector<uint32_t> &roots, const ResourceBounds &bounds) const;
    /// Merges distinct roots without checking; returns the new root.
    uint32_t merge_all(const std::vector<uint32_t> &roots);
    const Aggregate &agg(uint32_t root) const {
        return agg_[root];
    }
    uint32_t size() const {
        return (uint32_t)parent_.size();
    }

   private:
    uint32_t link(uint32_t a, uint32_t b);

    uint32_t num_qubits_ = 0;
    std::vector<uint32_t> parent_;
    std::vector<uint8_t> rank_;
    std::vector<Aggregate> agg_;
};

struct BoundaryEdge {
    uint32_t qubit = 0;
    uint32_t src = 0;
    uint32_t dst = 0;
    bool operator==(const BoundaryEdge &other) const = default;
};

struct Partition {
    uint64_t id = 0;
    std::vector<uint32_t> node_ids;
    uint32_t t_count = 0;
    uint32_t gate_count = 0;
    std::vector<uint32_t> qubit_set;
    /// Cut wire edges entering and leaving the partition.
    std::vector<BoundaryEdge> boundary_in;
    std::vector<BoundaryEdge> boundary_out;

    bool operator==(const Partition &other) const = default;
};

struct PartitionStats {
    uint64_t windows = 0;
    uint64_t peak_resident_nodes = 0;
    uint64_t merges = 0;
    uint64_t refusals = 0;
};

/// Windowed union-find partitioner.
///
/// Nodes are visited in topological order. A node first tries to join the
/// union of all its predecessors' live components at once, then each
/// predecessor edge in EdgeList order, and otherwise seeds a new component.
/// A merge is accepted when the combined aggregates fit the bounds and every
/// cut edge still runs from a component with a smaller minimum topo_index to
/// one with a larger minimum topo_index. The latter makes emission by
/// minimum topo_index a topological order of the quotient graph. When a
/// window closes all its components are emitted.
class Partitioner {
   public:
    Partitioner(const CircuitDag &dag, const EdgeList &edges, ResourceBounds bounds,
                const DecompositionTable *table = nullptr);
    // edges is held by reference
    Partitioner(const CircuitDag &, EdgeList &&, ResourceBounds, const DecompositionTable * = nullptr) = delete;

    void run(const std::function<void(Partition &&)> &sink);
    const PartitionStats &stats() const {
        return stats_;
    }

   private:
    void process_window(uint32_t begin, uint32_t end, const std::function<void(Partition &&)> &sink);
    bool order_ok(const std::vector<uint32_t> &roots, const std::vector<uint32_t> &extra_preds);
    uint32_t merge_roots(const std::vector<uint32_t> &roots, const std::vector<uint32_t> &extra_preds);

    const CircuitDag &dag_;
    const EdgeList &edges_;
    ResourceBounds bounds_;
    const DecompositionTable *table_;
    PartitionStats stats_;
    uint64_t next_id_ = 0;
    size_t edge_pos_ = 0;

    // Per-window state, indexed by node - window_begin.
    uint32_t begin_ = 0;
    UnionFind uf_;
    std::vector<uint32_t> seed_;                   // per root: min topo position
    std::vector<std::vector<uint32_t>> in_edges_;  // per root: sources of cut edges
};

std::vector<Partition> partition_stream(const EdgeList &edges, const CircuitDag &dag, const ResourceBounds &bounds,
                                        const DecompositionTable *table = nullptr);

/// Window size plus the carried frontier.
uint64_t peak_memory_nodes(const ResourceBounds &bounds, uint64_t frontier = 0);

}  // namespace qstream

#endif
