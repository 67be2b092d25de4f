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

#include "qstream/gates.h"

#include "qstream/decomp_table.h"
#include "qstream/errors.h"

namespace qstream {

namespace {

struct TagInfo {
    std::string_view qasm;
    std::string_view name;
    uint8_t arity;
    bool clifford;
};

constexpr std::array<TagInfo, NUM_GATE_TAGS> TAGS{{
    {"id", "I", 1, true},
    {"x", "X", 1, true},
    {"y", "Y", 1, true},
    {"z", "Z", 1, true},
    {"h", "H", 1, true},
    {"s", "S", 1, true},
    {"sdg", "Sdg", 1, true},
    {"t", "T", 1, false},
    {"tdg", "Tdg", 1, false},
    {"cx", "CX", 2, true},
    {"cz", "CZ", 2, true},
    {"swap", "SWAP", 2, true},
    {"ccx", "Toffoli", 3, false},
    {"rz", "Rz", 1, false},
    {"measure", "Measure", 1, false},
}};

}  // namespace

size_t arity(GateTag tag) {
    return TAGS[(size_t)tag].arity;
}

bool is_clifford(GateTag tag) {
    return TAGS[(size_t)tag].clifford;
}

std::string_view qasm_name(GateTag tag) {
    return TAGS[(size_t)tag].qasm;
}

std::string_view gate_name(GateTag tag) {
    return TAGS[(size_t)tag].name;
}

std::optional<GateTag> tag_from_qasm_name(std::string_view name) {
    for (size_t k = 0; k < NUM_GATE_TAGS; k++) {
        if (TAGS[k].qasm == name) {
            return (GateTag)k;
        }
    }
    if (name == "i") {
        return GateTag::I;
    }
    if (name == "cnot") {
        return GateTag::CX;
    }
    if (name == "toffoli") {
        return GateTag::Toffoli;
    }
    return std::nullopt;
}

uint32_t t_weight(const GateKind &kind, const DecompositionTable *table) {
    switch (kind.tag) {
        case GateTag::T:
        case GateTag::Tdg:
            return 1;
        case GateTag::Toffoli:
            return 7;
        case GateTag::Rz: {
            const DecompositionTable &t = table ? *table : DecompositionTable::global();
            return t.t_weight(kind.rz_key.value());
        }
        default:
            return 0;
    }
}

Gate::Gate(GateKind kind, std::initializer_list<uint32_t> targets)
    : Gate(kind, std::span<const uint32_t>(targets.begin(), targets.size())) {
}

Gate::Gate(GateKind kind, std::span<const uint32_t> targets) : kind(kind) {
    if (targets.size() != arity(kind.tag)) {
        throw ConfigError(
            std::string(gate_name(kind.tag)) + " takes " + std::to_string(arity(kind.tag)) + " qubit(s), got " +
            std::to_string(targets.size()));
    }
    if ((kind.tag == GateTag::Rz) != kind.rz_key.has_value()) {
        throw ConfigError("rz_key must be present exactly for Rz");
    }
    num_qubits = (uint8_t)targets.size();
    for (size_t k = 0; k < targets.size(); k++) {
        qubits[k] = targets[k];
        for (size_t j = 0; j < k; j++) {
            if (qubits[j] == qubits[k]) {
                throw ConfigError(std::string(gate_name(kind.tag)) + " repeats qubit " + std::to_string(qubits[k]));
            }
        }
    }
}

bool Gate::operator==(const Gate &other) const {
    if (kind != other.kind || num_qubits != other.num_qubits) {
        return false;
    }
    for (size_t k = 0; k < num_qubits; k++) {
        if (qubits[k] != other.qubits[k]) {
            return false;
        }
    }
    return true;
}

}  // namespace qstream
