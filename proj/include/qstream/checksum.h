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

#ifndef QSTREAM_CHECKSUM_H
#define QSTREAM_CHECKSUM_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace qstream {

/// IEEE CRC-32 (the zlib polynomial).
uint32_t crc32_ieee(std::span<const uint8_t> bytes);
uint32_t crc32_ieee(const uint8_t *data, size_t len);

using Sha256Digest = std::array<uint8_t, 32>;
Sha256Digest sha256(std::span<const uint8_t> bytes);
Sha256Digest sha256(std::string_view text);

std::string to_hex(std::span<const uint8_t> bytes);

// Little-endian helpers shared by the wire format and the cache log.
inline void put_u16(std::string &out, uint16_t v) {
    out.push_back((char)(v & 0xFF));
    out.push_back((char)(v >> 8));
}
inline void put_u32(std::string &out, uint32_t v) {
    for (int k = 0; k < 4; k++) {
        out.push_back((char)((v >> (8 * k)) & 0xFF));
    }
}
inline void put_u64(std::string &out, uint64_t v) {
    for (int k = 0; k < 8; k++) {
        out.push_back((char)((v >> (8 * k)) & 0xFF));
    }
}
inline uint16_t get_u16(const uint8_t *p) {
    return (uint16_t)(p[0] | (p[1] << 8));
}
inline uint32_t get_u32(const uint8_t *p) {
    return (uint32_t)p[0] | ((uint32_t)p[1] << 8) | ((uint32_t)p[2] << 16) | ((uint32_t)p[3] << 24);
}
inline uint64_t get_u64(const uint8_t *p) {
    return (uint64_t)get_u32(p) | ((uint64_t)get_u32(p + 4) << 32);
}

inline std::span<const uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const uint8_t *>(s.data()), s.size()};
}

}  // namespace qstream

#endif
