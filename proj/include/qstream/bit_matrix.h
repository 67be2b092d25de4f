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

#ifndef QSTREAM_BIT_MATRIX_H
#define QSTREAM_BIT_MATRIX_H

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qstream {

/// Dense bit matrix stored row-major as 64-bit words. Rows are padded to a
/// multiple of 64 so square matrices can be transposed in place.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    size_t words_per_row() const {
        return stride_;
    }

    uint64_t *row(size_t r) {
        return data_.data() + r * stride_;
    }
    const uint64_t *row(size_t r) const {
        return data_.data() + r * stride_;
    }

    bool get(size_t r, size_t c) const {
        return (row(r)[c >> 6] >> (c & 63)) & 1;
    }
    void set(size_t r, size_t c, bool v) {
        uint64_t m = uint64_t{1} << (c & 63);
        uint64_t &w = row(r)[c >> 6];
        w = v ? (w | m) : (w & ~m);
    }
    void flip(size_t r, size_t c) {
        row(r)[c >> 6] ^= uint64_t{1} << (c & 63);
    }

    void xor_row_into(size_t dst, size_t src);
    void swap_rows(size_t a, size_t b);
    size_t row_popcount(size_t r) const;
    bool row_is_zero(size_t r) const;

    /// In-place transpose. Requires rows() == cols().
    void transpose_square();

    bool operator==(const BitMatrix &other) const;

    static BitMatrix identity(size_t n);

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t stride_ = 0;
    std::vector<uint64_t> data_;
};

/// Transposes a 64x64 bit block where bit j of word i is element (i, j).
void transpose_64x64(uint64_t *block, size_t stride);

}  // namespace qstream

#endif
