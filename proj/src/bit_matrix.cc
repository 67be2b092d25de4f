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

#include "qstream/bit_matrix.h"

#include <algorithm>
#include <bit>
#include <utility>

#include "qstream/errors.h"

namespace qstream {

BitMatrix::BitMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64) {
    data_.assign(stride_ * ((rows + 63) / 64) * 64, 0);
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t k = 0; k < n; k++) {
        m.set(k, k, true);
    }
    return m;
}

void BitMatrix::xor_row_into(size_t dst, size_t src) {
    uint64_t *d = row(dst);
    const uint64_t *s = row(src);
    for (size_t w = 0; w < stride_; w++) {
        d[w] ^= s[w];
    }
}

void BitMatrix::swap_rows(size_t a, size_t b) {
    if (a != b) {
        std::swap_ranges(row(a), row(a) + stride_, row(b));
    }
}

size_t BitMatrix::row_popcount(size_t r) const {
    size_t n = 0;
    const uint64_t *p = row(r);
    for (size_t w = 0; w < stride_; w++) {
        n += std::popcount(p[w]);
    }
    return n;
}

bool BitMatrix::row_is_zero(size_t r) const {
    const uint64_t *p = row(r);
    for (size_t w = 0; w < stride_; w++) {
        if (p[w]) {
            return false;
        }
    }
    return true;
}

void transpose_64x64(uint64_t *a, size_t stride) {
    uint64_t m = 0x00000000FFFFFFFFull;
    for (size_t j = 32; j != 0; j >>= 1, m ^= (m << j)) {
        for (size_t k = 0; k < 64; k = ((k | j) + 1) & ~j) {
            uint64_t &lo = a[k * stride];
            uint64_t &hi = a[(k | j) * stride];
            uint64_t t = ((lo >> j) ^ hi) & m;
            lo ^= t << j;
            hi ^= t;
        }
    }
}

void BitMatrix::transpose_square() {
    if (rows_ != cols_) {
        throw InvariantError("transpose_square needs a square matrix");
    }
    size_t nb = stride_;
    for (size_t bi = 0; bi < nb; bi++) {
        transpose_64x64(data_.data() + bi * 64 * stride_ + bi, stride_);
        for (size_t bj = bi + 1; bj < nb; bj++) {
            uint64_t *p = data_.data() + bi * 64 * stride_ + bj;
            uint64_t *q = data_.data() + bj * 64 * stride_ + bi;
            transpose_64x64(p, stride_);
            transpose_64x64(q, stride_);
            for (size_t k = 0; k < 64; k++) {
                std::swap(p[k * stride_], q[k * stride_]);
            }
        }
    }
}

bool BitMatrix::operator==(const BitMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        return false;
    }
    for (size_t r = 0; r < rows_; r++) {
        if (!std::equal(row(r), row(r) + stride_, other.row(r))) {
            return false;
        }
    }
    return true;
}

}  // namespace qstream
