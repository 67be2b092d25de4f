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

#ifndef QSTREAM_VERIFIER_H
#define QSTREAM_VERIFIER_H

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qstream/circuit.h"
#include "qstream/graph_chunk.h"

namespace qstream {

class DecompositionTable;

using Amplitude = std::complex<double>;

/// Dense state; qubit q is bit q of the basis index.
class StateVector {
   public:
    static constexpr uint32_t MAX_QUBITS = 14;

    StateVector() = default;
    /// |0...0>.
    explicit StateVector(uint32_t num_qubits);
    static StateVector basis(uint32_t num_qubits, uint64_t index);
    static StateVector from_amplitudes(std::vector<Amplitude> amps);

    uint32_t num_qubits() const {
        return n_;
    }
    const std::vector<Amplitude> &amplitudes() const {
        return amps_;
    }
    std::vector<Amplitude> &amplitudes() {
        return amps_;
    }
    double norm() const;
    void normalize();

    void apply_1q(uint32_t q, const std::array<Amplitude, 4> &m);
    void apply_cx(uint32_t c, uint32_t t);
    void apply_cz(uint32_t a, uint32_t b);
    void apply_swap(uint32_t a, uint32_t b);
    void apply_ccx(uint32_t a, uint32_t b, uint32_t t);
    /// Dense 2^k x 2^k operator (row-major) on the listed qubits; qubits[j] is
    /// bit j of the operator's index.
    void apply_matrix(const std::vector<uint32_t> &qubits, const std::vector<Amplitude> &m);
    void apply_gate(const Gate &g, const DecompositionTable *table = nullptr);

    /// <psi| P |psi> for a Pauli string like "+XZI" (character j acts on qubit j).
    Amplitude pauli_expectation(const std::string &pauli) const;

   private:
    uint32_t n_ = 0;
    std::vector<Amplitude> amps_;
};

/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const StateVector &a, const StateVector &b);

StateVector simulate_circuit(const CircuitDag &dag, const StateVector &input, const DecompositionTable *table = nullptr);
StateVector simulate_circuit(const Subcircuit &sub, const StateVector &input,
                             const DecompositionTable *table = nullptr);

/// Runs the post-selected pattern on an n-qubit input. Vertices are brought in
/// and measured in id order, so only the live width is bounded.
StateVector execute_chunk_postselected(const GraphChunk &chunk, const StateVector &input,
                                       const DecompositionTable *table = nullptr);

/// Column x is the unnormalized image of |x>.
std::vector<Amplitude> chunk_operator(const GraphChunk &chunk, const DecompositionTable *table = nullptr);
std::vector<Amplitude> circuit_unitary(const Subcircuit &sub, const DecompositionTable *table = nullptr);

/// One chunk of a chain with the global qubit carried by each chunk wire.
struct ChainLink {
    const GraphChunk *chunk = nullptr;
    std::vector<uint32_t> qubits;
};

StateVector execute_chain(const std::vector<ChainLink> &chain, const StateVector &input,
                          const DecompositionTable *table = nullptr);

/// Choi-state fidelity between the circuit and the chain.
double process_fidelity(const CircuitDag &dag, const std::vector<ChainLink> &chain,
                        const DecompositionTable *table = nullptr);
bool process_equal(const CircuitDag &dag, const std::vector<ChainLink> &chain, double tol,
                   const DecompositionTable *table = nullptr);
/// Two circuits on the same register.
double process_fidelity(const CircuitDag &a, const CircuitDag &b, const DecompositionTable *table = nullptr);

}  // namespace qstream

#endif
