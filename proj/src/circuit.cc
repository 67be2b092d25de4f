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

#include "qstream/circuit.h"

#include <algorithm>
#include <unordered_map>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"

namespace qstream {

CircuitDag::CircuitDag(uint32_t num_qubits)
    : num_qubits_(num_qubits), head_(num_qubits, NO_NODE), tail_(num_qubits, NO_NODE) {
}

uint32_t CircuitDag::append(const Gate &gate) {
    GateNode node;
    node.id = (uint32_t)nodes_.size();
    node.topo_index = node.id;
    node.gate = gate;
    for (size_t k = 0; k < gate.num_qubits; k++) {
        uint32_t q = gate.qubits[k];
        if (q >= num_qubits_) {
            throw ConfigError(
                "qubit index " + std::to_string(q) + " out of range (" + std::to_string(num_qubits_) + " qubits)");
        }
    }
    for (size_t k = 0; k < gate.num_qubits; k++) {
        uint32_t q = gate.qubits[k];
        uint32_t p = tail_[q];
        node.prev[k] = p;
        if (p != NO_NODE) {
            GateNode &pn = nodes_[p];
            for (size_t j = 0; j < pn.gate.num_qubits; j++) {
                if (pn.gate.qubits[j] == q) {
                    pn.next[j] = node.id;
                }
            }
        } else {
            head_[q] = node.id;
        }
        tail_[q] = node.id;
    }
    nodes_.push_back(node);
    return node.id;
}

size_t CircuitDag::count(GateTag tag) const {
    size_t n = 0;
    for (const auto &node : nodes_) {
        n += node.gate.kind.tag == tag;
    }
    return n;
}

uint64_t CircuitDag::t_count(const DecompositionTable *table) const {
    uint64_t n = 0;
    for (const auto &node : nodes_) {
        n += t_weight(node.gate.kind, table);
    }
    return n;
}

size_t CircuitDag::num_wire_edges() const {
    // Distinct (src, dst) pairs; two gates sharing two wires form one edge.
    size_t n = 0;
    for (const auto &node : nodes_) {
        for (size_t k = 0; k < node.gate.num_qubits; k++) {
            bool dup = node.prev[k] == NO_NODE;
            for (size_t j = 0; j < k && !dup; j++) {
                dup = node.prev[j] == node.prev[k];
            }
            n += !dup;
        }
    }
    return n;
}

Subcircuit CircuitDag::as_subcircuit() const {
    Subcircuit s;
    s.num_qubits = num_qubits_;
    s.gates.reserve(nodes_.size());
    for (const auto &node : nodes_) {
        s.gates.push_back(node.gate);
    }
    return s;
}

CircuitDag CircuitDag::from_subcircuit(const Subcircuit &sub) {
    CircuitDag d(sub.num_qubits);
    d.reserve(sub.gates.size());
    for (const auto &g : sub.gates) {
        d.append(g);
    }
    return d;
}

void CircuitDag::validate() const {
    std::vector<uint32_t> last(num_qubits_, NO_NODE);
    for (const auto &node : nodes_) {
        if (node.id >= nodes_.size() || nodes_[node.id].id != node.id) {
            throw InvariantError("node ids are not dense");
        }
        for (size_t k = 0; k < node.gate.num_qubits; k++) {
            uint32_t q = node.gate.qubits[k];
            if (node.prev[k] != last[q]) {
                throw InvariantError("wire link mismatch at node " + std::to_string(node.id));
            }
            if (last[q] != NO_NODE && nodes_[last[q]].topo_index >= node.topo_index) {
                throw InvariantError("topo_index does not extend the wire order");
            }
            last[q] = node.id;
        }
    }
    for (uint32_t q = 0; q < num_qubits_; q++) {
        if (tail_[q] != last[q]) {
            throw InvariantError("wire tail mismatch on qubit " + std::to_string(q));
        }
    }
}

bool isomorphic(const CircuitDag &a, const CircuitDag &b) {
    if (a.num_qubits() != b.num_qubits() || a.size() != b.size()) {
        return false;
    }
    for (size_t k = 0; k < a.size(); k++) {
        const auto &x = a.node((uint32_t)k);
        const auto &y = b.node((uint32_t)k);
        if (!(x.gate == y.gate) || x.prev != y.prev || x.next != y.next) {
            return false;
        }
    }
    return true;
}

EdgeList build_edge_list(const CircuitDag &dag) {
    EdgeList out;
    out.edges.reserve(dag.num_wire_edges());
    // Node ids follow topo order, so walking nodes in id order and emitting
    // each node's sorted predecessors already yields the required order.
    std::vector<std::pair<uint32_t, uint32_t>> preds;
    for (const auto &node : dag.nodes()) {
        preds.clear();
        for (size_t k = 0; k < node.gate.num_qubits; k++) {
            if (node.prev[k] != NO_NODE) {
                preds.push_back({dag.node(node.prev[k]).topo_index, node.prev[k]});
            }
        }
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
        for (auto [t, p] : preds) {
            out.edges.push_back({p, node.id});
        }
    }
    return out;
}

std::vector<Gate> toffoli_network(uint32_t a, uint32_t b, uint32_t c) {
    return {
        Gate(GateTag::H, {c}),      Gate(GateTag::CX, {b, c}), Gate(GateTag::Tdg, {c}),
        Gate(GateTag::CX, {a, c}),  Gate(GateTag::T, {c}),     Gate(GateTag::CX, {b, c}),
        Gate(GateTag::Tdg, {c}),    Gate(GateTag::CX, {a, c}), Gate(GateTag::T, {b}),
        Gate(GateTag::T, {c}),      Gate(GateTag::H, {c}),     Gate(GateTag::CX, {a, b}),
        Gate(GateTag::T, {a}),      Gate(GateTag::Tdg, {b}),   Gate(GateTag::CX, {a, b}),
    };
}

CircuitDag lower_toffoli(const CircuitDag &dag) {
    CircuitDag out(dag.num_qubits());
    out.reserve(dag.size() + 14 * dag.count(GateTag::Toffoli));
    for (const auto &node : dag.nodes()) {
        if (node.gate.kind.tag == GateTag::Toffoli) {
            for (const auto &g : toffoli_network(node.gate.qubits[0], node.gate.qubits[1], node.gate.qubits[2])) {
                out.append(g);
            }
        } else {
            out.append(node.gate);
        }
    }
    return out;
}

ExtractedSubcircuit relabel_by_first_use(const std::vector<Gate> &gates) {
    ExtractedSubcircuit out;
    std::unordered_map<uint32_t, uint32_t> seen;
    out.sub.gates.reserve(gates.size());
    for (auto g : gates) {
        for (size_t k = 0; k < g.num_qubits; k++) {
            auto [it, fresh] = seen.try_emplace(g.qubits[k], (uint32_t)out.qubit_map.size());
            if (fresh) {
                out.qubit_map.push_back(g.qubits[k]);
            }
            g.qubits[k] = it->second;
        }
        out.sub.gates.push_back(g);
    }
    out.sub.num_qubits = (uint32_t)out.qubit_map.size();
    return out;
}

ExtractedSubcircuit extract_subcircuit(const CircuitDag &dag, const std::vector<uint32_t> &node_ids) {
    std::vector<uint32_t> ids = node_ids;
    std::sort(ids.begin(), ids.end(), [&](uint32_t a, uint32_t b) {
        return dag.node(a).topo_index < dag.node(b).topo_index;
    });
    std::vector<Gate> gates;
    gates.reserve(ids.size());
    for (uint32_t id : ids) {
        gates.push_back(dag.node(id).gate);
    }
    if (gates.size() < 64) {
        return relabel_by_first_use(gates);
    }
    // Large fragments: hash-free dense relabel.
    ExtractedSubcircuit out;
    std::vector<uint32_t> local(dag.num_qubits(), NO_NODE);
    out.sub.gates.reserve(gates.size());
    for (auto g : gates) {
        for (size_t k = 0; k < g.num_qubits; k++) {
            uint32_t &l = local[g.qubits[k]];
            if (l == NO_NODE) {
                l = (uint32_t)out.qubit_map.size();
                out.qubit_map.push_back(g.qubits[k]);
            }
            g.qubits[k] = l;
        }
        out.sub.gates.push_back(g);
    }
    out.sub.num_qubits = (uint32_t)out.qubit_map.size();
    return out;
}

}  // namespace qstream
