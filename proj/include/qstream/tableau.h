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

#ifndef QSTREAM_TABLEAU_H
#define QSTREAM_TABLEAU_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qstream/bit_matrix.h"
#include "qstream/gates.h"
#include "qstream/local_clifford.h"

namespace qstream {

/// Graph state plus per-vertex local Cliffords. The described state is
/// (prod_v locals[v]^dag) |G(adjacency)>.
struct GraphForm {
    BitMatrix adjacency;
    std::vector<LocalClifford> locals;
};

/// Options for the graph reduction.
struct ReducePolicy {
    /// Columns that may not receive a Hadamard during pivoting.
    std::vector<uint8_t> no_hadamard;
    /// Columns that receive no local gates at all. Their phases are left for
    /// the caller to clear.
    std::vector<uint8_t> frozen;
};

/// Stabilizer tableau holding stabilizer rows only. Row i, column j of
/// (xs, zs) is the Pauli on qubit j of stabilizer i.
class Tableau {
   public:
    Tableau() = default;
    explicit Tableau(size_t n);

    static Tableau new_plus_state(size_t n);
    /// Rows such as "+XZ" or "-YI".
    static Tableau from_strings(const std::vector<std::string> &rows);

    size_t num_qubits() const {
        return n_;
    }
    bool sign(size_t row) const {
        return (signs_[row >> 6] >> (row & 63)) & 1;
    }
    void set_sign(size_t row, bool v);
    std::string row_string(size_t row) const;
    std::vector<std::string> to_strings() const;

    void apply_gate(GateKind kind, std::span<const uint32_t> targets);
    void apply_gate(GateKind kind, std::initializer_list<uint32_t> targets) {
        apply_gate(kind, std::span<const uint32_t>(targets.begin(), targets.size()));
    }
    void h(size_t q);
    void s(size_t q);
    void s_dag(size_t q);
    void x(size_t q);
    void y(size_t q);
    void z(size_t q);
    void cx(size_t c, size_t t);
    void cz(size_t a, size_t b);
    void swap(size_t a, size_t b);
    void apply_local(size_t q, LocalClifford c);

    /// row[target] <- row[src] * row[target]. Rows must commute.
    void row_mul(size_t target, size_t src);
    void swap_rows(size_t a, size_t b);

    bool rows_commute(size_t a, size_t b) const;
    bool all_rows_commute() const;
    size_t rank() const;

    /// Reduces in place to x = I, symmetric z with zero diagonal and zero
    /// phases, accumulating the applied gates into `locals`.
    void reduce(const ReducePolicy &policy, std::vector<LocalClifford> &locals);
    GraphForm to_graph() const;

    BitMatrix xs;
    BitMatrix zs;

   private:
    friend class TransposedTableau;
    size_t n_ = 0;
    std::vector<uint64_t> signs_;
};

/// Holds a tableau transposed so that qubit columns are contiguous words.
/// Gate updates then run word-parallel across all stabilizer rows.
class TransposedTableau {
   public:
    explicit TransposedTableau(Tableau &t);
    ~TransposedTableau();
    TransposedTableau(const TransposedTableau &) = delete;
    TransposedTableau &operator=(const TransposedTableau &) = delete;

    void h(size_t q);
    void s(size_t q);
    void s_dag(size_t q);
    void x(size_t q);
    void y(size_t q);
    void z(size_t q);
    void cx(size_t c, size_t t);
    void cz(size_t a, size_t b);
    void swap(size_t a, size_t b);
    void apply_gate(GateKind kind, std::span<const uint32_t> targets);

   private:
    Tableau &t_;
};

}  // namespace qstream

#endif
