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

#include "qstream/tableau.h"

#include <bit>
#include <utility>

#include "qstream/errors.h"

namespace qstream {

Tableau::Tableau(size_t n) : xs(n, n), zs(n, n), n_(n), signs_((n + 63) / 64 + 1, 0) {
}

Tableau Tableau::new_plus_state(size_t n) {
    if (n == 0) {
        throw ConfigError("tableau needs at least one qubit");
    }
    Tableau t(n);
    t.xs = BitMatrix::identity(n);
    return t;
}

Tableau Tableau::from_strings(const std::vector<std::string> &rows) {
    size_t n = rows.size();
    Tableau t(n);
    for (size_t r = 0; r < n; r++) {
        const std::string &s = rows[r];
        size_t off = 0;
        if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
            t.set_sign(r, s[0] == '-');
            off = 1;
        }
        if (s.size() - off != n) {
            throw ConfigError("stabilizer row '" + s + "' has the wrong length");
        }
        for (size_t q = 0; q < n; q++) {
            char c = s[off + q];
            bool x = c == 'X' || c == 'Y';
            bool z = c == 'Z' || c == 'Y';
            if (!x && !z && c != 'I' && c != '_') {
                throw ConfigError("bad Pauli character in '" + s + "'");
            }
            t.xs.set(r, q, x);
            t.zs.set(r, q, z);
        }
    }
    return t;
}

void Tableau::set_sign(size_t row, bool v) {
    uint64_t m = uint64_t{1} << (row & 63);
    signs_[row >> 6] = v ? (signs_[row >> 6] | m) : (signs_[row >> 6] & ~m);
}

std::string Tableau::row_string(size_t row) const {
    std::string s(1, sign(row) ? '-' : '+');
    for (size_t q = 0; q < n_; q++) {
        bool x = xs.get(row, q), z = zs.get(row, q);
        s.push_back(x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return s;
}

std::vector<std::string> Tableau::to_strings() const {
    std::vector<std::string> out;
    for (size_t r = 0; r < n_; r++) {
        out.push_back(row_string(r));
    }
    return out;
}

// Row-major gate updates touch one bit per row. Bulk compilation goes through
// TransposedTableau instead.

void Tableau::h(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        bool x = xs.get(r, q), z = zs.get(r, q);
        if (x && z) {
            set_sign(r, !sign(r));
        }
        xs.set(r, q, z);
        zs.set(r, q, x);
    }
}

void Tableau::s(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        bool x = xs.get(r, q), z = zs.get(r, q);
        if (x && z) {
            set_sign(r, !sign(r));
        }
        zs.set(r, q, z ^ x);
    }
}

void Tableau::s_dag(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        bool x = xs.get(r, q), z = zs.get(r, q);
        if (x && !z) {
            set_sign(r, !sign(r));
        }
        zs.set(r, q, z ^ x);
    }
}

void Tableau::x(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        if (zs.get(r, q)) {
            set_sign(r, !sign(r));
        }
    }
}

void Tableau::y(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        if (xs.get(r, q) != zs.get(r, q)) {
            set_sign(r, !sign(r));
        }
    }
}

void Tableau::z(size_t q) {
    for (size_t r = 0; r < n_; r++) {
        if (xs.get(r, q)) {
            set_sign(r, !sign(r));
        }
    }
}

void Tableau::cx(size_t c, size_t t) {
    for (size_t r = 0; r < n_; r++) {
        bool xc = xs.get(r, c), zc = zs.get(r, c), xt = xs.get(r, t), zt = zs.get(r, t);
        if (xc && zt && !(xt ^ zc)) {
            set_sign(r, !sign(r));
        }
        xs.set(r, t, xt ^ xc);
        zs.set(r, c, zc ^ zt);
    }
}

void Tableau::cz(size_t a, size_t b) {
    for (size_t r = 0; r < n_; r++) {
        bool xa = xs.get(r, a), za = zs.get(r, a), xb = xs.get(r, b), zb = zs.get(r, b);
        if (xa && xb && (za ^ zb)) {
            set_sign(r, !sign(r));
        }
        zs.set(r, a, za ^ xb);
        zs.set(r, b, zb ^ xa);
    }
}

void Tableau::swap(size_t a, size_t b) {
    for (size_t r = 0; r < n_; r++) {
        bool xa = xs.get(r, a), za = zs.get(r, a);
        xs.set(r, a, xs.get(r, b));
        zs.set(r, a, zs.get(r, b));
        xs.set(r, b, xa);
        zs.set(r, b, za);
    }
}

void Tableau::apply_local(size_t q, LocalClifford c) {
    for (GateTag g : c.word()) {
        if (g == GateTag::H) {
            h(q);
        } else {
            s(q);
        }
    }
}

namespace {

template <typename T>
void dispatch_gate(T &t, GateKind kind, std::span<const uint32_t> q) {
    if (q.size() != arity(kind.tag)) {
        throw ConfigError("wrong number of targets for " + std::string(gate_name(kind.tag)));
    }
    switch (kind.tag) {
        case GateTag::I:
            return;
        case GateTag::X:
            return t.x(q[0]);
        case GateTag::Y:
            return t.y(q[0]);
        case GateTag::Z:
            return t.z(q[0]);
        case GateTag::H:
            return t.h(q[0]);
        case GateTag::S:
            return t.s(q[0]);
        case GateTag::Sdg:
            return t.s_dag(q[0]);
        case GateTag::CX:
            return t.cx(q[0], q[1]);
        case GateTag::CZ:
            return t.cz(q[0], q[1]);
        case GateTag::SWAP:
            return t.swap(q[0], q[1]);
        default:
            throw ConfigError(
                std::string(gate_name(kind.tag)) + " is not Clifford; non-Clifford gates are teleported by the compiler");
    }
}

}  // namespace

void Tableau::apply_gate(GateKind kind, std::span<const uint32_t> targets) {
    for (auto q : targets) {
        if (q >= n_) {
            throw ConfigError("target " + std::to_string(q) + " out of range");
        }
    }
    dispatch_gate(*this, kind, targets);
}

void Tableau::row_mul(size_t target, size_t src) {
    uint64_t *x2 = xs.row(target);
    uint64_t *z2 = zs.row(target);
    const uint64_t *x1 = xs.row(src);
    const uint64_t *z1 = zs.row(src);
    size_t words = xs.words_per_row();
    int64_t plus = 0, minus = 0;
    for (size_t w = 0; w < words; w++) {
        uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
        if ((a | b) & (c | d)) {
            uint64_t p = (a & b & ~c & d) | (a & ~b & c & d) | (~a & b & c & ~d);
            uint64_t m = (a & b & c & ~d) | (a & ~b & ~c & d) | (~a & b & c & d);
            plus += std::popcount(p);
            minus += std::popcount(m);
        }
        x2[w] = c ^ a;
        z2[w] = d ^ b;
    }
    int64_t e = 2 * (int64_t)sign(src) + 2 * (int64_t)sign(target) + plus - minus;
    e = ((e % 4) + 4) % 4;
    if (e & 1) {
        throw InvariantError("row product of anticommuting stabilizers");
    }
    set_sign(target, e == 2);
}

void Tableau::swap_rows(size_t a, size_t b) {
    if (a == b) {
        return;
    }
    xs.swap_rows(a, b);
    zs.swap_rows(a, b);
    bool sa = sign(a);
    set_sign(a, sign(b));
    set_sign(b, sa);
}

bool Tableau::rows_commute(size_t a, size_t b) const {
    const uint64_t *xa = xs.row(a), *za = zs.row(a), *xb = xs.row(b), *zb = zs.row(b);
    size_t par = 0;
    for (size_t w = 0; w < xs.words_per_row(); w++) {
        par += std::popcount((xa[w] & zb[w]) ^ (za[w] & xb[w]));
    }
    return par % 2 == 0;
}

bool Tableau::all_rows_commute() const {
    for (size_t a = 0; a < n_; a++) {
        for (size_t b = a + 1; b < n_; b++) {
            if (!rows_commute(a, b)) {
                return false;
            }
        }
    }
    return true;
}

size_t Tableau::rank() const {
    // Symplectic rows as 2n-bit vectors over GF(2).
    size_t words = xs.words_per_row();
    std::vector<std::vector<uint64_t>> rows(n_, std::vector<uint64_t>(2 * words));
    for (size_t r = 0; r < n_; r++) {
        std::copy(xs.row(r), xs.row(r) + words, rows[r].begin());
        std::copy(zs.row(r), zs.row(r) + words, rows[r].begin() + words);
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * words * 64 && rank < n_; col++) {
        size_t w = col >> 6;
        uint64_t m = uint64_t{1} << (col & 63);
        size_t p = rank;
        while (p < n_ && !(rows[p][w] & m)) {
            p++;
        }
        if (p == n_) {
            continue;
        }
        std::swap(rows[p], rows[rank]);
        for (size_t r = 0; r < n_; r++) {
            if (r != rank && (rows[r][w] & m)) {
                for (size_t k = 0; k < 2 * words; k++) {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        rank++;
    }
    return rank;
}

void Tableau::reduce(const ReducePolicy &policy, std::vector<LocalClifford> &locals) {
    locals.resize(n_);
    auto flag = [](const std::vector<uint8_t> &v, size_t c) {
        return c < v.size() && v[c];
    };
    auto record = [&](size_t c, GateTag g) {
        locals[c] = LocalClifford::from_gate(g).after(locals[c]);
    };

    // Gauss-Jordan elimination on the x block. Where no row has X on the
    // column, a Hadamard on that column swaps its Z bits in.
    for (size_t c = 0; c < n_; c++) {
        size_t p = c;
        while (p < n_ && !xs.get(p, c)) {
            p++;
        }
        if (p == n_) {
            if (flag(policy.no_hadamard, c) || flag(policy.frozen, c)) {
                throw InvariantError("no X pivot on column " + std::to_string(c) + " and Hadamard not allowed there");
            }
            h(c);
            record(c, GateTag::H);
            p = c;
            while (p < n_ && !xs.get(p, c)) {
                p++;
            }
            if (p == n_) {
                throw InvariantError("tableau is rank deficient at column " + std::to_string(c));
            }
        }
        swap_rows(p, c);
        for (size_t r = 0; r < n_; r++) {
            if (r != c && xs.get(r, c)) {
                row_mul(r, c);
            }
        }
    }

    for (size_t c = 0; c < n_; c++) {
        if (zs.get(c, c)) {
            if (flag(policy.frozen, c)) {
                throw InvariantError("diagonal entry on frozen column " + std::to_string(c));
            }
            s(c);
            record(c, GateTag::S);
        }
    }
    for (size_t c = 0; c < n_; c++) {
        // Only row c carries X on column c now, so Z there flips just that row.
        if (sign(c) && !flag(policy.frozen, c)) {
            z(c);
            record(c, GateTag::Z);
        }
    }
}

GraphForm Tableau::to_graph() const {
    if (rank() != n_ || !all_rows_commute()) {
        throw InvariantError("to_graph needs a full-rank stabilizer tableau");
    }
    Tableau t = *this;
    GraphForm g;
    t.reduce(ReducePolicy{}, g.locals);
    for (size_t r = 0; r < n_; r++) {
        if (t.sign(r)) {
            throw InvariantError("phase survived reduction");
        }
        for (size_t c = 0; c < n_; c++) {
            if (t.xs.get(r, c) != (r == c) || t.zs.get(r, c) != t.zs.get(c, r)) {
                throw InvariantError("reduction did not reach graph form");
            }
        }
    }
    g.adjacency = std::move(t.zs);
    return g;
}

TransposedTableau::TransposedTableau(Tableau &t) : t_(t) {
    t_.xs.transpose_square();
    t_.zs.transpose_square();
}

TransposedTableau::~TransposedTableau() {
    t_.xs.transpose_square();
    t_.zs.transpose_square();
}

// In transposed form xs.row(q) holds qubit q's X bits for every stabilizer.

void TransposedTableau::h(size_t q) {
    uint64_t *x = t_.xs.row(q), *z = t_.zs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= x[w] & z[w];
        std::swap(x[w], z[w]);
    }
}

void TransposedTableau::s(size_t q) {
    uint64_t *x = t_.xs.row(q), *z = t_.zs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= x[w] & z[w];
        z[w] ^= x[w];
    }
}

void TransposedTableau::s_dag(size_t q) {
    uint64_t *x = t_.xs.row(q), *z = t_.zs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= x[w] & ~z[w];
        z[w] ^= x[w];
    }
}

void TransposedTableau::x(size_t q) {
    uint64_t *z = t_.zs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= z[w];
    }
}

void TransposedTableau::y(size_t q) {
    uint64_t *x = t_.xs.row(q), *z = t_.zs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= x[w] ^ z[w];
    }
}

void TransposedTableau::z(size_t q) {
    uint64_t *x = t_.xs.row(q), *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= x[w];
    }
}

void TransposedTableau::cx(size_t c, size_t t) {
    uint64_t *xc = t_.xs.row(c), *zc = t_.zs.row(c), *xt = t_.xs.row(t), *zt = t_.zs.row(t);
    uint64_t *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= xc[w] & zt[w] & ~(xt[w] ^ zc[w]);
        xt[w] ^= xc[w];
        zc[w] ^= zt[w];
    }
}

void TransposedTableau::cz(size_t a, size_t b) {
    uint64_t *xa = t_.xs.row(a), *za = t_.zs.row(a), *xb = t_.xs.row(b), *zb = t_.zs.row(b);
    uint64_t *r = t_.signs_.data();
    for (size_t w = 0; w < t_.xs.words_per_row(); w++) {
        r[w] ^= xa[w] & xb[w] & (za[w] ^ zb[w]);
        za[w] ^= xb[w];
        zb[w] ^= xa[w];
    }
}

void TransposedTableau::swap(size_t a, size_t b) {
    t_.xs.swap_rows(a, b);
    t_.zs.swap_rows(a, b);
}

void TransposedTableau::apply_gate(GateKind kind, std::span<const uint32_t> targets) {
    for (auto q : targets) {
        if (q >= t_.n_) {
            throw ConfigError("target " + std::to_string(q) + " out of range");
        }
    }
    dispatch_gate(*this, kind, targets);
}

}  // namespace qstream
