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

#include "qstream/verifier.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"

namespace qstream {

namespace {

constexpr double SQRT1_2 = 0.70710678118654752440;
constexpr uint32_t MAX_LIVE = 24;

std::array<Amplitude, 4> single_matrix(const GateKind &k, const DecompositionTable *table) {
    const Amplitude i(0, 1);
    switch (k.tag) {
        case GateTag::I:
            return {1, 0, 0, 1};
        case GateTag::X:
            return {0, 1, 1, 0};
        case GateTag::Y:
            return {0, -i, i, 0};
        case GateTag::Z:
            return {1, 0, 0, -1};
        case GateTag::H:
            return {SQRT1_2, SQRT1_2, SQRT1_2, -SQRT1_2};
        case GateTag::S:
            return {1, 0, 0, i};
        case GateTag::Sdg:
            return {1, 0, 0, -i};
        case GateTag::T:
            return {1, 0, 0, std::polar(1.0, M_PI / 4)};
        case GateTag::Tdg:
            return {1, 0, 0, std::polar(1.0, -M_PI / 4)};
        case GateTag::Rz: {
            const DecompositionTable &t = table ? *table : DecompositionTable::global();
            if (!t.contains(*k.rz_key)) {
                throw ConfigError("cannot resolve Rz key " + std::to_string(*k.rz_key));
            }
            return {1, 0, 0, std::polar(1.0, t.theta(*k.rz_key))};
        }
        default:
            throw ConfigError("not a single-qubit gate: " + std::string(gate_name(k.tag)));
    }
}

void check_size(uint32_t n) {
    if (n > StateVector::MAX_QUBITS) {
        throw ConfigError("dense simulation limited to " + std::to_string(StateVector::MAX_QUBITS) + " qubits, got " +
                          std::to_string(n));
    }
}

// Working register for pattern execution. Bit j of the index holds vertex
// axes[j].
struct Live {
    std::vector<Amplitude> amps{1.0};
    std::vector<uint32_t> axes;

    int bit_of(uint32_t v) const {
        for (size_t j = 0; j < axes.size(); j++) {
            if (axes[j] == v) {
                return (int)j;
            }
        }
        return -1;
    }
    void add_plus(uint32_t v) {
        if (axes.size() >= MAX_LIVE) {
            throw ConfigError("chunk too wide for the dense oracle");
        }
        size_t half = amps.size();
        amps.resize(half * 2);
        for (size_t i = 0; i < half; i++) {
            amps[i] *= SQRT1_2;
            amps[half + i] = amps[i];
        }
        axes.push_back(v);
    }
    void cz(int a, int b) {
        size_t m = (size_t{1} << a) | (size_t{1} << b);
        for (size_t i = 0; i < amps.size(); i++) {
            if ((i & m) == m) {
                amps[i] = -amps[i];
            }
        }
    }
    void apply_1q(int b, const std::array<Amplitude, 4> &m) {
        size_t bit = size_t{1} << b;
        for (size_t i = 0; i < amps.size(); i++) {
            if (i & bit) {
                continue;
            }
            Amplitude a0 = amps[i], a1 = amps[i | bit];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i | bit] = m[2] * a0 + m[3] * a1;
        }
    }
    // Contracts bit b with the bra (b0, b1) and drops the axis.
    void project(int b, Amplitude b0, Amplitude b1) {
        size_t bit = size_t{1} << b;
        size_t low = bit - 1;
        std::vector<Amplitude> out(amps.size() / 2);
        double before = 0, after = 0;
        for (size_t j = 0; j < out.size(); j++) {
            size_t i = ((j & ~low) << 1) | (j & low);
            out[j] = (b0 * amps[i] + b1 * amps[i | bit]) * std::sqrt(2.0);
        }
        for (auto &a : amps) {
            before += std::norm(a);
        }
        for (auto &a : out) {
            after += std::norm(a);
        }
        if (before > 0 && after < 1e-20 * before) {
            throw InvariantError("post-selected branch has zero probability");
        }
        amps = std::move(out);
        axes.erase(axes.begin() + b);
    }
};

std::array<Amplitude, 4> inverse_local(LocalClifford l) {
    const auto &m = l.inverse().matrix();
    return {m[0], m[1], m[2], m[3]};
}

}  // namespace

StateVector::StateVector(uint32_t num_qubits) : n_(num_qubits) {
    check_size(num_qubits);
    amps_.assign(size_t{1} << num_qubits, 0);
    amps_[0] = 1;
}

StateVector StateVector::basis(uint32_t num_qubits, uint64_t index) {
    StateVector s(num_qubits);
    s.amps_[0] = 0;
    s.amps_.at(index) = 1;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amps) {
    uint32_t n = 0;
    while ((size_t{1} << n) < amps.size()) {
        n++;
    }
    if ((size_t{1} << n) != amps.size()) {
        throw ConfigError("amplitude count is not a power of two");
    }
    check_size(n);
    StateVector s;
    s.n_ = n;
    s.amps_ = std::move(amps);
    return s;
}

double StateVector::norm() const {
    double s = 0;
    for (auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    double nrm = norm();
    if (nrm < 1e-150) {
        throw InvariantError("cannot normalize a zero state");
    }
    for (auto &a : amps_) {
        a /= nrm;
    }
}

void StateVector::apply_1q(uint32_t q, const std::array<Amplitude, 4> &m) {
    size_t bit = size_t{1} << q;
    for (size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            continue;
        }
        Amplitude a0 = amps_[i], a1 = amps_[i | bit];
        amps_[i] = m[0] * a0 + m[1] * a1;
        amps_[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_cx(uint32_t c, uint32_t t) {
    size_t cb = size_t{1} << c, tb = size_t{1} << t;
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & cb) && !(i & tb)) {
            std::swap(amps_[i], amps_[i | tb]);
        }
    }
}

void StateVector::apply_cz(uint32_t a, uint32_t b) {
    size_t m = (size_t{1} << a) | (size_t{1} << b);
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & m) == m) {
            amps_[i] = -amps_[i];
        }
    }
}

void StateVector::apply_swap(uint32_t a, uint32_t b) {
    size_t ab = size_t{1} << a, bb = size_t{1} << b;
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & ab) && !(i & bb)) {
            std::swap(amps_[i], amps_[(i & ~ab) | bb]);
        }
    }
}

void StateVector::apply_ccx(uint32_t a, uint32_t b, uint32_t t) {
    size_t m = (size_t{1} << a) | (size_t{1} << b), tb = size_t{1} << t;
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & m) == m && !(i & tb)) {
            std::swap(amps_[i], amps_[i | tb]);
        }
    }
}

void StateVector::apply_matrix(const std::vector<uint32_t> &qubits, const std::vector<Amplitude> &m) {
    size_t k = qubits.size();
    size_t dim = size_t{1} << k;
    if (m.size() != dim * dim) {
        throw ConfigError("operator size does not match its qubit list");
    }
    size_t mask = 0;
    for (auto q : qubits) {
        if (q >= n_) {
            throw ConfigError("operator qubit out of range");
        }
        mask |= size_t{1} << q;
    }
    std::vector<size_t> offs(dim, 0);
    for (size_t x = 0; x < dim; x++) {
        for (size_t j = 0; j < k; j++) {
            if ((x >> j) & 1) {
                offs[x] |= size_t{1} << qubits[j];
            }
        }
    }
    std::vector<Amplitude> in(dim), out(dim);
    for (size_t base = 0; base < amps_.size(); base++) {
        if (base & mask) {
            continue;
        }
        for (size_t x = 0; x < dim; x++) {
            in[x] = amps_[base | offs[x]];
        }
        for (size_t r = 0; r < dim; r++) {
            Amplitude s = 0;
            for (size_t c = 0; c < dim; c++) {
                s += m[r * dim + c] * in[c];
            }
            out[r] = s;
        }
        for (size_t x = 0; x < dim; x++) {
            amps_[base | offs[x]] = out[x];
        }
    }
}

void StateVector::apply_gate(const Gate &g, const DecompositionTable *table) {
    for (auto q : g.targets()) {
        if (q >= n_) {
            throw ConfigError("gate qubit out of range for the state");
        }
    }
    switch (g.kind.tag) {
        case GateTag::CX:
            apply_cx(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::CZ:
            apply_cz(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::SWAP:
            apply_swap(g.qubits[0], g.qubits[1]);
            return;
        case GateTag::Toffoli:
            apply_ccx(g.qubits[0], g.qubits[1], g.qubits[2]);
            return;
        case GateTag::Measure:
            throw ConfigError("the oracle simulates unitary circuits only");
        default:
            apply_1q(g.qubits[0], single_matrix(g.kind, table));
    }
}

Amplitude StateVector::pauli_expectation(const std::string &pauli) const {
    std::string p = pauli;
    double sign = 1;
    if (!p.empty() && (p[0] == '+' || p[0] == '-')) {
        sign = p[0] == '-' ? -1 : 1;
        p = p.substr(1);
    }
    if (p.size() != n_) {
        throw ConfigError("Pauli string length does not match the state");
    }
    StateVector t = *this;
    for (uint32_t q = 0; q < n_; q++) {
        switch (p[q]) {
            case 'X':
            case 'x':
                t.apply_1q(q, single_matrix(GateKind(GateTag::X), nullptr));
                break;
            case 'Y':
            case 'y':
                t.apply_1q(q, single_matrix(GateKind(GateTag::Y), nullptr));
                break;
            case 'Z':
            case 'z':
                t.apply_1q(q, single_matrix(GateKind(GateTag::Z), nullptr));
                break;
            case 'I':
            case '_':
                break;
            default:
                throw ConfigError(std::string("bad Pauli letter '") + p[q] + "'");
        }
    }
    Amplitude s = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        s += std::conj(amps_[i]) * t.amps_[i];
    }
    return s * sign;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ConfigError("fidelity of states with different sizes");
    }
    Amplitude s = 0;
    double na = 0, nb = 0;
    for (size_t i = 0; i < a.amplitudes().size(); i++) {
        s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
        na += std::norm(a.amplitudes()[i]);
        nb += std::norm(b.amplitudes()[i]);
    }
    if (na == 0 || nb == 0) {
        return 0;
    }
    return std::norm(s) / (na * nb);
}

StateVector simulate_circuit(const Subcircuit &sub, const StateVector &input, const DecompositionTable *table) {
    check_size(sub.num_qubits);
    if (input.num_qubits() != sub.num_qubits) {
        throw ConfigError("input state size does not match the circuit");
    }
    StateVector s = input;
    for (const auto &g : sub.gates) {
        s.apply_gate(g, table);
    }
    return s;
}

StateVector simulate_circuit(const CircuitDag &dag, const StateVector &input, const DecompositionTable *table) {
    check_size(dag.num_qubits());
    return simulate_circuit(dag.as_subcircuit(), input, table);
}

namespace {

// Pattern execution with the input register already in `live`.
std::vector<Amplitude> run_pattern(const GraphChunk &c, Live live, const DecompositionTable *table) {
    const DecompositionTable &t = table ? *table : DecompositionTable::global();
    uint32_t V = c.n_vertices;
    std::vector<uint32_t> last(V);
    std::vector<std::vector<uint32_t>> nbrs(V);
    for (uint32_t v = 0; v < V; v++) {
        nbrs[v] = c.neighbors(v);
        last[v] = v;
        for (auto u : nbrs[v]) {
            last[v] = std::max(last[v], u);
        }
    }
    std::vector<uint8_t> is_input(V, 0), is_output(V, 0), done(V, 0), added(V, 0);
    std::vector<int64_t> tape_key(V, -1);
    for (auto v : c.input_map) {
        is_input[v] = 1;
        added[v] = 1;
    }
    for (auto v : c.output_map) {
        is_output[v] = 1;
    }
    for (const auto &e : c.tape) {
        tape_key[e.vertex] = e.key;
    }
    for (uint32_t a = 0; a < V; a++) {
        if (!is_input[a]) {
            continue;
        }
        for (auto b : nbrs[a]) {
            if (b > a && is_input[b]) {
                live.cz(live.bit_of(a), live.bit_of(b));
            }
        }
    }
    for (uint32_t v = 0; v < V; v++) {
        if (!added[v]) {
            live.add_plus(v);
            added[v] = 1;
            for (auto u : nbrs[v]) {
                if (added[u]) {
                    live.cz(live.bit_of(u), live.bit_of(v));
                }
            }
        }
        // Measure everything whose neighbourhood is complete.
        for (size_t j = 0; j < live.axes.size();) {
            uint32_t u = live.axes[j];
            if (is_output[u] || last[u] > v || done[u]) {
                j++;
                continue;
            }
            live.apply_1q((int)j, inverse_local(c.locals[u]));
            if (tape_key[u] >= 0) {
                double th = t.theta((uint32_t)tape_key[u]);
                live.project((int)j, SQRT1_2, std::polar(SQRT1_2, th));
            } else {
                live.project((int)j, SQRT1_2, SQRT1_2);
            }
            done[u] = 1;
        }
    }
    for (uint32_t q = 0; q < c.n_inputs; q++) {
        uint32_t v = c.output_map[q];
        live.apply_1q(live.bit_of(v), inverse_local(c.locals[v]));
    }
    // Reorder into output_map order.
    uint32_t n = c.n_inputs;
    std::vector<int> bit(n);
    for (uint32_t q = 0; q < n; q++) {
        bit[q] = live.bit_of(c.output_map[q]);
    }
    std::vector<Amplitude> out(size_t{1} << n);
    for (size_t i = 0; i < live.amps.size(); i++) {
        size_t j = 0;
        for (uint32_t q = 0; q < n; q++) {
            if ((i >> bit[q]) & 1) {
                j |= size_t{1} << q;
            }
        }
        out[j] = live.amps[i];
    }
    return out;
}

Live load_input(const GraphChunk &c, const std::vector<Amplitude> &in) {
    Live live;
    live.amps = in;
    live.axes = c.input_map;
    return live;
}

}  // namespace

StateVector execute_chunk_postselected(const GraphChunk &chunk, const StateVector &input,
                                       const DecompositionTable *table) {
    if (input.num_qubits() != chunk.n_inputs) {
        throw ConfigError("input state size does not match the chunk arity");
    }
    auto out = run_pattern(chunk, load_input(chunk, input.amplitudes()), table);
    StateVector s = StateVector::from_amplitudes(std::move(out));
    s.normalize();
    return s;
}

std::vector<Amplitude> chunk_operator(const GraphChunk &chunk, const DecompositionTable *table) {
    uint32_t n = chunk.n_inputs;
    check_size(n);
    size_t dim = size_t{1} << n;
    std::vector<Amplitude> m(dim * dim);
    for (size_t x = 0; x < dim; x++) {
        std::vector<Amplitude> in(dim, 0);
        in[x] = 1;
        auto col = run_pattern(chunk, load_input(chunk, in), table);
        for (size_t r = 0; r < dim; r++) {
            m[r * dim + x] = col[r];
        }
    }
    return m;
}

std::vector<Amplitude> circuit_unitary(const Subcircuit &sub, const DecompositionTable *table) {
    uint32_t n = sub.num_qubits;
    check_size(n);
    size_t dim = size_t{1} << n;
    std::vector<Amplitude> m(dim * dim);
    for (size_t x = 0; x < dim; x++) {
        StateVector s = simulate_circuit(sub, StateVector::basis(n, x), table);
        for (size_t r = 0; r < dim; r++) {
            m[r * dim + x] = s.amplitudes()[r];
        }
    }
    return m;
}

StateVector execute_chain(const std::vector<ChainLink> &chain, const StateVector &input,
                          const DecompositionTable *table) {
    StateVector s = input;
    std::map<const GraphChunk *, std::vector<Amplitude>> ops;
    for (const auto &link : chain) {
        if (link.qubits.size() != link.chunk->n_inputs) {
            throw ConfigError("chain link qubit list does not match the chunk arity");
        }
        auto it = ops.find(link.chunk);
        if (it == ops.end()) {
            it = ops.emplace(link.chunk, chunk_operator(*link.chunk, table)).first;
        }
        s.apply_matrix(link.qubits, it->second);
        if (s.norm() < 1e-12) {
            throw InvariantError("post-selected branch has zero probability");
        }
        s.normalize();
    }
    return s;
}

namespace {

StateVector bell_register(uint32_t n) {
    if (2 * n > StateVector::MAX_QUBITS) {
        throw ConfigError("process comparison limited to 7 qubits");
    }
    StateVector s(2 * n);
    size_t dim = size_t{1} << n;
    double a = 1.0 / std::sqrt((double)dim);
    s.amplitudes()[0] = 0;
    for (size_t x = 0; x < dim; x++) {
        s.amplitudes()[x | (x << n)] = a;
    }
    return s;
}

StateVector push_circuit(const CircuitDag &dag, uint32_t n, const DecompositionTable *table) {
    StateVector s = bell_register(n);
    for (const auto &node : dag.nodes()) {
        s.apply_gate(node.gate, table);
    }
    return s;
}

}  // namespace

double process_fidelity(const CircuitDag &dag, const std::vector<ChainLink> &chain, const DecompositionTable *table) {
    uint32_t n = dag.num_qubits();
    StateVector a = push_circuit(dag, n, table);
    StateVector b = execute_chain(chain, bell_register(n), table);
    return fidelity(a, b);
}

bool process_equal(const CircuitDag &dag, const std::vector<ChainLink> &chain, double tol,
                   const DecompositionTable *table) {
    return process_fidelity(dag, chain, table) >= 1.0 - tol;
}

double process_fidelity(const CircuitDag &a, const CircuitDag &b, const DecompositionTable *table) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ConfigError("circuits act on different registers");
    }
    uint32_t n = a.num_qubits();
    return fidelity(push_circuit(a, n, table), push_circuit(b, n, table));
}

}  // namespace qstream
