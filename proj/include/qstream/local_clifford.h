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

#ifndef QSTREAM_LOCAL_CLIFFORD_H
#define QSTREAM_LOCAL_CLIFFORD_H

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "qstream/gates.h"

namespace qstream {

/// Signed Pauli: sign * i^(x*z) X^x Z^z, so (1,1) is Y.
struct SignedPauli {
    bool x = false;
    bool z = false;
    bool negative = false;
    bool operator==(const SignedPauli &other) const = default;
};

/// Element of the 24-element single-qubit Clifford group (modulo phase).
/// Codes are assigned in breadth-first order over the generators H then S,
/// so code 0 is the identity, 1 is H and 2 is S.
class LocalClifford {
   public:
    static constexpr size_t ORDER = 24;

    constexpr LocalClifford() = default;
    constexpr explicit LocalClifford(uint8_t code) : code_(code) {
    }
    static LocalClifford identity() {
        return LocalClifford(0);
    }
    /// I, X, Y, Z, H, S, Sdg. Other tags throw.
    static LocalClifford from_gate(GateTag tag);
    /// Composite of a gate sequence applied left to right.
    static LocalClifford from_word(const std::vector<GateTag> &word);

    uint8_t code() const {
        return code_;
    }
    bool is_identity() const {
        return code_ == 0;
    }

    /// `then.after(first)`: apply `first`, then `then`.
    LocalClifford after(LocalClifford first) const;
    LocalClifford inverse() const;

    /// Fixed {H, S} word, in application order.
    const std::vector<GateTag> &word() const;
    /// Unitary with phase normalized so the first non-zero entry is real positive.
    /// Row-major: {m00, m01, m10, m11}.
    const std::array<std::complex<double>, 4> &matrix() const;

    /// Conjugation images C X C^dag and C Z C^dag.
    SignedPauli image_x() const;
    SignedPauli image_z() const;
    /// C|+> is proportional to |+>.
    bool fixes_plus() const;

    bool operator==(const LocalClifford &other) const = default;

   private:
    uint8_t code_ = 0;
};

}  // namespace qstream

#endif
