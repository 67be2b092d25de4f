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

#include "qstream/local_clifford.h"

#include <cmath>

#include "qstream/errors.h"

namespace qstream {

namespace {

using Mat = std::array<std::complex<double>, 4>;

Mat matmul(const Mat &a, const Mat &b) {
    return {
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    };
}

Mat normalize(Mat m) {
    for (auto v : m) {
        if (std::abs(v) > 1e-9) {
            auto ph = std::conj(v) / std::abs(v);
            for (auto &e : m) {
                e *= ph;
            }
            break;
        }
    }
    return m;
}

bool same(const Mat &a, const Mat &b) {
    for (size_t k = 0; k < 4; k++) {
        if (std::abs(a[k] - b[k]) > 1e-9) {
            return false;
        }
    }
    return true;
}

Mat dagger(const Mat &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

const double R = 1 / std::sqrt(2.0);
const Mat MAT_I{1, 0, 0, 1};
const Mat MAT_H{R, R, R, -R};
const Mat MAT_S{1, 0, 0, std::complex<double>(0, 1)};
const Mat MAT_X{0, 1, 1, 0};
const Mat MAT_Z{1, 0, 0, -1};
const Mat MAT_Y{0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0};

SignedPauli decompose_pauli(const Mat &m) {
    const std::array<std::pair<Mat, SignedPauli>, 3> ps{{
        {MAT_X, {true, false, false}},
        {MAT_Z, {false, true, false}},
        {MAT_Y, {true, true, false}},
    }};
    for (const auto &[pm, sp] : ps) {
        if (same(m, pm)) {
            return sp;
        }
        Mat neg{-pm[0], -pm[1], -pm[2], -pm[3]};
        if (same(m, neg)) {
            return {sp.x, sp.z, true};
        }
    }
    throw InvariantError("conjugate is not a Pauli");
}

struct Group {
    std::vector<Mat> mats;
    std::vector<std::vector<GateTag>> words;
    std::array<std::array<uint8_t, 24>, 24> mul{};  // mul[a][b] = a * b (b first)
    std::array<uint8_t, 24> inv{};
    std::array<SignedPauli, 24> img_x{};
    std::array<SignedPauli, 24> img_z{};

    uint8_t find(const Mat &m) const {
        Mat n = normalize(m);
        for (size_t k = 0; k < mats.size(); k++) {
            if (same(mats[k], n)) {
                return (uint8_t)k;
            }
        }
        throw InvariantError("matrix is not a single-qubit Clifford");
    }

    Group() {
        mats.push_back(normalize(MAT_I));
        words.push_back({});
        for (size_t head = 0; head < mats.size(); head++) {
            for (auto [g, gm] : {std::pair{GateTag::H, MAT_H}, std::pair{GateTag::S, MAT_S}}) {
                Mat m = normalize(matmul(gm, mats[head]));
                bool seen = false;
                for (const auto &e : mats) {
                    seen |= same(e, m);
                }
                if (!seen) {
                    mats.push_back(m);
                    auto w = words[head];
                    w.push_back(g);
                    words.push_back(w);
                }
            }
        }
        if (mats.size() != 24) {
            throw InvariantError("single-qubit Clifford group did not close at 24 elements");
        }
        for (size_t a = 0; a < 24; a++) {
            for (size_t b = 0; b < 24; b++) {
                mul[a][b] = find(matmul(mats[a], mats[b]));
            }
            inv[a] = find(dagger(mats[a]));
            img_x[a] = decompose_pauli(matmul(matmul(mats[a], MAT_X), dagger(mats[a])));
            img_z[a] = decompose_pauli(matmul(matmul(mats[a], MAT_Z), dagger(mats[a])));
        }
    }
};

const Group &group() {
    static const Group g;
    return g;
}

}  // namespace

LocalClifford LocalClifford::from_gate(GateTag tag) {
    const Group &g = group();
    switch (tag) {
        case GateTag::I:
            return LocalClifford(0);
        case GateTag::H:
            return LocalClifford(g.find(MAT_H));
        case GateTag::S:
            return LocalClifford(g.find(MAT_S));
        case GateTag::Sdg:
            return LocalClifford(g.find(dagger(MAT_S)));
        case GateTag::X:
            return LocalClifford(g.find(MAT_X));
        case GateTag::Y:
            return LocalClifford(g.find(MAT_Y));
        case GateTag::Z:
            return LocalClifford(g.find(MAT_Z));
        default:
            throw ConfigError(std::string(gate_name(tag)) + " is not a single-qubit Clifford");
    }
}

LocalClifford LocalClifford::from_word(const std::vector<GateTag> &word) {
    LocalClifford c;
    for (auto t : word) {
        c = from_gate(t).after(c);
    }
    return c;
}

LocalClifford LocalClifford::after(LocalClifford first) const {
    return LocalClifford(group().mul[code_][first.code_]);
}

LocalClifford LocalClifford::inverse() const {
    return LocalClifford(group().inv[code_]);
}

const std::vector<GateTag> &LocalClifford::word() const {
    return group().words[code_];
}

const std::array<std::complex<double>, 4> &LocalClifford::matrix() const {
    return group().mats[code_];
}

SignedPauli LocalClifford::image_x() const {
    return group().img_x[code_];
}

SignedPauli LocalClifford::image_z() const {
    return group().img_z[code_];
}

bool LocalClifford::fixes_plus() const {
    SignedPauli p = image_x();
    return p.x && !p.z && !p.negative;
}

}  // namespace qstream
