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

#ifndef QSTREAM_GATES_H
#define QSTREAM_GATES_H

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>

namespace qstream {

class DecompositionTable;

enum class GateTag : uint8_t {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    CX,
    CZ,
    SWAP,
    Toffoli,
    Rz,
    Measure,
};
constexpr size_t NUM_GATE_TAGS = 15;

struct GateKind {
    GateTag tag = GateTag::I;
    /// Present iff tag == Rz.
    std::optional<uint32_t> rz_key;

    GateKind() = default;
    GateKind(GateTag tag) : tag(tag) {
    }
    static GateKind rz(uint32_t key) {
        GateKind k(GateTag::Rz);
        k.rz_key = key;
        return k;
    }
    bool operator==(const GateKind &other) const = default;
};

size_t arity(GateTag tag);
bool is_clifford(GateTag tag);
/// Lower-case OpenQASM name ("cx", "ccx", "sdg", ...).
std::string_view qasm_name(GateTag tag);
/// Short display name ("CX", "Toffoli", ...).
std::string_view gate_name(GateTag tag);
std::optional<GateTag> tag_from_qasm_name(std::string_view name);

/// T-count contribution. Rz needs the decomposition table; without one a
/// non-builtin Rz counts as a single teleported rotation.
uint32_t t_weight(const GateKind &kind, const DecompositionTable *table = nullptr);

/// A gate application with its operands.
struct Gate {
    GateKind kind;
    uint8_t num_qubits = 0;
    std::array<uint32_t, 3> qubits{0, 0, 0};

    Gate() = default;
    Gate(GateKind kind, std::initializer_list<uint32_t> targets);
    Gate(GateKind kind, std::span<const uint32_t> targets);

    std::span<const uint32_t> targets() const {
        return {qubits.data(), num_qubits};
    }
    bool operator==(const Gate &other) const;
};

}  // namespace qstream

#endif
