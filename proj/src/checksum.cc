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

#include "qstream/checksum.h"

#include <openssl/sha.h>
#include <zlib.h>

namespace qstream {

uint32_t crc32_ieee(const uint8_t *data, size_t len) {
    uLong c = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in pieces.
    while (len > 0) {
        uInt piece = len > (1u << 30) ? (1u << 30) : (uInt)len;
        c = crc32(c, data, piece);
        data += piece;
        len -= piece;
    }
    return (uint32_t)c;
}

uint32_t crc32_ieee(std::span<const uint8_t> bytes) {
    return crc32_ieee(bytes.data(), bytes.size());
}

Sha256Digest sha256(std::span<const uint8_t> bytes) {
    Sha256Digest out{};
    SHA256(bytes.data(), bytes.size(), out.data());
    return out;
}

Sha256Digest sha256(std::string_view text) {
    return sha256(as_bytes(text));
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static const char *digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

}  // namespace qstream
