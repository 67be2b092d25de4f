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

#ifndef QSTREAM_CIRCUIT_H
#define QSTREAM_CIRCUIT_H

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstream/gates.h"

namespace qstream {

constexpr uint32_t NO_NODE = std::numeric_limits<uint32_t>::max();

struct GateNode {
    uint32_t id = 0;
    uint32_t topo_index = 0;
    Gate gate;
    /// Wire neighbours per operand (NO_NODE at the ends of a wire).
    std::array<uint32_t, 3> prev{NO_NODE, NO_NODE, NO_NODE};
    std::array<uint32_t, 3> next{NO_NODE, NO_NODE, NO_NODE};

    const GateKind &kind() const {
        return gate.kind;
    }
    std::span<const uint32_t> qubits() const {
        return gate.targets();
    }
};

/// A gate list over dense local qubit labels. Compilation, hashing and
/// simulation all work on this form.
struct Subcircuit {
    uint32_t num_qubits = 0;
    std::vector<Gate> gates;

    bool operator==(const Subcircuit &other) const = default;
};

/// Circuit DAG with per-qubit wire links. Node ids are dense and equal to
/// program order; topo_index is fixed at append time.
class CircuitDag {
   public:
    CircuitDag() = default;
    explicit CircuitDag(uint32_t num_qubits);

    uint32_t append(const Gate &gate);
    uint32_t append(GateKind kind, std::initializer_list<uint32_t> targets) {
        return append(Gate(kind, targets));
    }
    void reserve(size_t n) {
        nodes_.reserve(n);
    }

    uint32_t num_qubits() const {
        return num_qubits_;
    }
    size_t size() const {
        return nodes_.size();
    }
    bool empty() const {
        return nodes_.empty();
    }
    const std::vector<GateNode> &nodes() const {
        return nodes_;
    }
    const GateNode &node(uint32_t id) const {
        return nodes_[id];
    }
    /// First and last node on each qubit wire.
    uint32_t wire_head(uint32_t q) const {
        return head_[q];
    }
    uint32_t wire_tail(uint32_t q) const {
        return tail_[q];
    }

    size_t count(GateTag tag) const;
    uint64_t t_count(const class DecompositionTable *table = nullptr) const;
    size_t num_wire_edges() const;

    /// All gates in topological order, over all qubits.
    Subcircuit as_subcircuit() const;
    static CircuitDag from_subcircuit(const Subcircuit &sub);

    /// Panics with InvariantError if the wire links are inconsistent.
    void validate() const;

   private:
    uint32_t num_qubits_ = 0;
    std::vector<GateNode> nodes_;
    std::vector<uint32_t> head_;
    std::vector<uint32_t> tail_;
};

/// Same nodes, kinds, qubit lists and edge relation.
bool isomorphic(const CircuitDag &a, const CircuitDag &b);

/// Wire edges sorted by (topo_index(dst), topo_index(src)).
struct EdgeList {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
};
EdgeList build_edge_list(const CircuitDag &dag);

/// Replaces each Toffoli with the 15-gate, 7-T network.
CircuitDag lower_toffoli(const CircuitDag &dag);
std::vector<Gate> toffoli_network(uint32_t c1, uint32_t c2, uint32_t target);

/// Extracts the gates of `node_ids` (sorted by topo_index) and renames
/// qubits by first use. `qubit_map[local] = global`.
struct ExtractedSubcircuit {
    Subcircuit sub;
    std::vector<uint32_t> qubit_map;
};
ExtractedSubcircuit extract_subcircuit(const CircuitDag &dag, const std::vector<uint32_t> &node_ids);
/// Renames the qubits of a gate list by first use.
ExtractedSubcircuit relabel_by_first_use(const std::vector<Gate> &gates);

// OpenQASM subset.
class DecompositionTable;
CircuitDag parse_qasm(std::string_view text, DecompositionTable *table = nullptr);
std::string emit_qasm(const CircuitDag &dag, const DecompositionTable *table = nullptr);

}  // namespace qstream

#endif
