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

#ifndef QSTREAM_WIRE_FORMAT_H
#define QSTREAM_WIRE_FORMAT_H

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qstream/checksum.h"
#include "qstream/decomp_table.h"
#include "qstream/graph_chunk.h"

namespace qstream {

constexpr char CHUNK_MAGIC[4] = {'Q', 'G', 'S', '1'};
constexpr uint8_t CHUNK_VERSION = 1;
constexpr size_t CHUNK_HEADER_BYTES = 22;

/// Exact encoded size of a chunk with these parameters.
uint64_t encoded_chunk_size(uint64_t n, uint64_t k, uint64_t v);

std::string encode_chunk(const GraphChunk &c);
/// Throws IntegrityError on any malformed input; never returns a partial chunk.
GraphChunk decode_chunk(std::string_view bytes);

enum class FrameType : uint8_t {
    END = 0x00,
    FULL_CHUNK = 0x01,
    CACHE_REF = 0x02,
    TABLE_PUT = 0x03,
};

/// type (1) + reserved (3) + seq (8) + length (4).
constexpr size_t FRAME_HEADER_BYTES = 16;
constexpr size_t FRAME_TRAILER_BYTES = 4;

struct StreamFrame {
    FrameType type = FrameType::END;
    uint64_t seq_no = 0;
    std::string payload;

    size_t wire_size() const {
        return FRAME_HEADER_BYTES + payload.size() + FRAME_TRAILER_BYTES;
    }
    bool operator==(const StreamFrame &other) const = default;
};

struct CacheRef {
    Sha256Digest key{};
    std::vector<uint32_t> qubits;
    bool operator==(const CacheRef &other) const = default;
};
std::string encode_cache_ref(const CacheRef &r);
CacheRef decode_cache_ref(std::string_view payload);

struct TablePut {
    uint32_t key = 0;
    std::vector<SeqLetter> sequence;
    bool operator==(const TablePut &other) const = default;
};
std::string encode_table_put(const TablePut &t);
TablePut decode_table_put(std::string_view payload);

/// Serializes one frame, appending to `out`.
void append_frame(std::string &out, const StreamFrame &f);
/// Parses one frame at `pos`, advancing it. Throws on CRC failure, unknown
/// type, or truncation.
StreamFrame parse_frame(std::string_view bytes, size_t &pos);

class FrameWriter {
   public:
    explicit FrameWriter(std::ostream &out) : out_(out) {
    }
    /// Rejects a seq_no that does not increase.
    void write(const StreamFrame &f);
    uint64_t bytes_written() const {
        return bytes_;
    }

   private:
    std::ostream &out_;
    std::optional<uint64_t> last_;
    uint64_t bytes_ = 0;
};

class FrameReader {
   public:
    explicit FrameReader(std::istream &in) : in_(in) {
    }
    /// nullopt at a clean end of input.
    std::optional<StreamFrame> read();

   private:
    std::istream &in_;
    std::optional<uint64_t> last_;
};

std::vector<StreamFrame> read_all_frames(std::string_view bytes);

struct CompressionReport {
    double ratio = 0;
    double gates_per_kb = 0;
};
CompressionReport compression_report(uint64_t qasm_bytes, uint64_t framed_bytes, uint64_t gate_count);

}  // namespace qstream

#endif
