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

#include "qstream/wire_format.h"

#include <cstring>

#include "qstream/errors.h"

namespace qstream {

namespace {

uint64_t triangle_bytes(uint64_t v) {
    return (v * (v ? v - 1 : 0) / 2 + 7) / 8;
}

void check_frame_type(uint8_t t) {
    if (t > 0x03) {
        throw IntegrityError("unknown frame type 0x" + to_hex(std::span<const uint8_t>(&t, 1)));
    }
}

}  // namespace

uint64_t encoded_chunk_size(uint64_t n, uint64_t k, uint64_t v) {
    return CHUNK_HEADER_BYTES + triangle_bytes(v) + v + 8 * n + 8 * k + 4;
}

std::string encode_chunk(const GraphChunk &c) {
    c.validate();
    const uint32_t V = c.n_vertices;
    std::string out;
    out.reserve(encoded_chunk_size(c.n_inputs, c.k_nonclifford, V));
    out.append(CHUNK_MAGIC, 4);
    out.push_back((char)CHUNK_VERSION);
    out.push_back(0);
    put_u32(out, c.n_inputs);
    put_u32(out, c.k_nonclifford);
    put_u32(out, V);
    put_u32(out, (uint32_t)c.tape.size());

    // Upper triangle, row-major, bit p of the section at byte p/8, bit p%8.
    size_t base = out.size();
    out.append(triangle_bytes(V), '\0');
    uint64_t p = 0;
    for (uint32_t i = 0; i < V; i++) {
        const uint64_t *row = c.adjacency.row(i);
        for (uint32_t j = i + 1; j < V; j++, p++) {
            if ((row[j >> 6] >> (j & 63)) & 1) {
                out[base + (p >> 3)] |= (char)(1u << (p & 7));
            }
        }
    }
    for (uint32_t v = 0; v < V; v++) {
        out.push_back((char)c.locals[v].code());
    }
    for (auto v : c.input_map) {
        put_u32(out, v);
    }
    for (auto v : c.output_map) {
        put_u32(out, v);
    }
    for (const auto &t : c.tape) {
        put_u32(out, t.vertex);
        put_u32(out, t.key);
    }
    put_u32(out, crc32_ieee(as_bytes(out)));
    return out;
}

GraphChunk decode_chunk(std::string_view bytes) {
    if (bytes.size() < CHUNK_HEADER_BYTES + 4) {
        throw IntegrityError("chunk truncated: " + std::to_string(bytes.size()) + " bytes");
    }
    const uint8_t *p = reinterpret_cast<const uint8_t *>(bytes.data());
    if (std::memcmp(p, CHUNK_MAGIC, 4) != 0) {
        throw IntegrityError("bad chunk magic");
    }
    if (p[4] != CHUNK_VERSION) {
        throw IntegrityError("unsupported chunk version " + std::to_string(p[4]));
    }
    if (p[5] != 0) {
        throw IntegrityError("unknown chunk flags");
    }
    uint32_t n = get_u32(p + 6), k = get_u32(p + 10), V = get_u32(p + 14), tape_len = get_u32(p + 18);
    uint64_t expect = encoded_chunk_size(n, k, V);
    if (bytes.size() != expect) {
        throw IntegrityError("chunk length " + std::to_string(bytes.size()) + " does not match header (" +
                             std::to_string(expect) + ")");
    }
    uint32_t stored = get_u32(p + expect - 4);
    if (crc32_ieee(p, expect - 4) != stored) {
        throw IntegrityError("chunk CRC mismatch");
    }
    if (tape_len != k || (uint64_t)V > 2 * (uint64_t)n + k || V < n) {
        throw IntegrityError("chunk header violates the size bound");
    }

    GraphChunk c;
    c.n_inputs = n;
    c.k_nonclifford = k;
    c.n_vertices = V;
    c.adjacency = BitMatrix(V, V);
    size_t off = CHUNK_HEADER_BYTES;
    uint64_t bit = 0;
    for (uint32_t i = 0; i < V; i++) {
        for (uint32_t j = i + 1; j < V; j++, bit++) {
            if ((p[off + (bit >> 3)] >> (bit & 7)) & 1) {
                c.adjacency.set(i, j, true);
                c.adjacency.set(j, i, true);
            }
        }
    }
    off += triangle_bytes(V);
    c.locals.reserve(V);
    for (uint32_t v = 0; v < V; v++) {
        if (p[off + v] >= LocalClifford::ORDER) {
            throw IntegrityError("local Clifford code out of range");
        }
        c.locals.push_back(LocalClifford(p[off + v]));
    }
    off += V;
    for (uint32_t q = 0; q < n; q++, off += 4) {
        c.input_map.push_back(get_u32(p + off));
    }
    for (uint32_t q = 0; q < n; q++, off += 4) {
        c.output_map.push_back(get_u32(p + off));
    }
    for (uint32_t t = 0; t < k; t++, off += 8) {
        c.tape.push_back({get_u32(p + off), get_u32(p + off + 4)});
    }
    try {
        c.validate();
    } catch (const InvariantError &e) {
        throw IntegrityError(std::string("decoded chunk is invalid: ") + e.what());
    }
    return c;
}

std::string encode_cache_ref(const CacheRef &r) {
    std::string out(reinterpret_cast<const char *>(r.key.data()), r.key.size());
    put_u32(out, (uint32_t)r.qubits.size());
    for (auto q : r.qubits) {
        put_u32(out, q);
    }
    return out;
}

CacheRef decode_cache_ref(std::string_view payload) {
    if (payload.size() < 36) {
        throw IntegrityError("CACHE_REF payload truncated");
    }
    const uint8_t *p = reinterpret_cast<const uint8_t *>(payload.data());
    CacheRef r;
    std::memcpy(r.key.data(), p, 32);
    uint32_t arity = get_u32(p + 32);
    if (payload.size() != 36 + 4 * (uint64_t)arity) {
        throw IntegrityError("CACHE_REF payload length does not match its arity");
    }
    for (uint32_t i = 0; i < arity; i++) {
        r.qubits.push_back(get_u32(p + 36 + 4 * i));
    }
    return r;
}

std::string encode_table_put(const TablePut &t) {
    if (t.sequence.size() > 0xFFFF) {
        throw ConfigError("decomposition sequence too long for TABLE_PUT");
    }
    std::string out;
    put_u32(out, t.key);
    put_u16(out, (uint16_t)t.sequence.size());
    // Two letters per byte, low nibble first.
    for (size_t i = 0; i < t.sequence.size(); i += 2) {
        uint8_t b = (uint8_t)t.sequence[i];
        if (i + 1 < t.sequence.size()) {
            b |= (uint8_t)((uint8_t)t.sequence[i + 1] << 4);
        }
        out.push_back((char)b);
    }
    return out;
}

TablePut decode_table_put(std::string_view payload) {
    if (payload.size() < 6) {
        throw IntegrityError("TABLE_PUT payload truncated");
    }
    const uint8_t *p = reinterpret_cast<const uint8_t *>(payload.data());
    TablePut t;
    t.key = get_u32(p);
    uint16_t len = get_u16(p + 4);
    if (payload.size() != 6 + (size_t)(len + 1) / 2) {
        throw IntegrityError("TABLE_PUT payload length does not match its sequence");
    }
    for (size_t i = 0; i < len; i++) {
        uint8_t nib = (p[6 + i / 2] >> (4 * (i & 1))) & 0xF;
        if (nib < 1 || nib > 7) {
            throw IntegrityError("bad sequence letter code " + std::to_string(nib));
        }
        t.sequence.push_back((SeqLetter)nib);
    }
    if (len & 1 && (p[6 + len / 2] >> 4) != 0) {
        throw IntegrityError("TABLE_PUT padding nibble is not zero");
    }
    return t;
}

void append_frame(std::string &out, const StreamFrame &f) {
    if (f.payload.size() > 0xFFFFFFFFull) {
        throw ConfigError("frame payload too large");
    }
    size_t start = out.size();
    out.push_back((char)f.type);
    out.append(3, '\0');
    put_u64(out, f.seq_no);
    put_u32(out, (uint32_t)f.payload.size());
    out.append(f.payload);
    put_u32(out, crc32_ieee(reinterpret_cast<const uint8_t *>(out.data()) + start, out.size() - start));
}

StreamFrame parse_frame(std::string_view bytes, size_t &pos) {
    if (bytes.size() - pos < FRAME_HEADER_BYTES + FRAME_TRAILER_BYTES) {
        throw IntegrityError("frame truncated");
    }
    const uint8_t *p = reinterpret_cast<const uint8_t *>(bytes.data()) + pos;
    check_frame_type(p[0]);
    if (p[1] || p[2] || p[3]) {
        throw IntegrityError("frame reserved bytes are not zero");
    }
    uint64_t seq = get_u64(p + 4);
    uint32_t len = get_u32(p + 12);
    if (bytes.size() - pos < FRAME_HEADER_BYTES + (uint64_t)len + FRAME_TRAILER_BYTES) {
        throw IntegrityError("frame payload truncated");
    }
    size_t body = FRAME_HEADER_BYTES + len;
    if (crc32_ieee(p, body) != get_u32(p + body)) {
        throw IntegrityError("frame CRC mismatch at seq " + std::to_string(seq));
    }
    StreamFrame f;
    f.type = (FrameType)p[0];
    f.seq_no = seq;
    f.payload.assign(reinterpret_cast<const char *>(p + FRAME_HEADER_BYTES), len);
    pos += body + FRAME_TRAILER_BYTES;
    return f;
}

void FrameWriter::write(const StreamFrame &f) {
    if (last_ && f.seq_no <= *last_) {
        throw IntegrityError("frame seq_no " + std::to_string(f.seq_no) + " does not follow " +
                             std::to_string(*last_));
    }
    std::string buf;
    append_frame(buf, f);
    out_.write(buf.data(), (std::streamsize)buf.size());
    if (!out_) {
        throw Error("frame write failed");
    }
    bytes_ += buf.size();
    last_ = f.seq_no;
}

std::optional<StreamFrame> FrameReader::read() {
    char head[FRAME_HEADER_BYTES];
    in_.read(head, FRAME_HEADER_BYTES);
    if (in_.gcount() == 0 && in_.eof()) {
        return std::nullopt;
    }
    if ((size_t)in_.gcount() != FRAME_HEADER_BYTES) {
        throw IntegrityError("frame header truncated");
    }
    check_frame_type((uint8_t)head[0]);
    uint32_t len = get_u32(reinterpret_cast<const uint8_t *>(head) + 12);
    std::string buf(head, FRAME_HEADER_BYTES);
    buf.resize(FRAME_HEADER_BYTES + (size_t)len + FRAME_TRAILER_BYTES);
    in_.read(buf.data() + FRAME_HEADER_BYTES, (std::streamsize)len + FRAME_TRAILER_BYTES);
    if ((size_t)in_.gcount() != (size_t)len + FRAME_TRAILER_BYTES) {
        throw IntegrityError("frame payload truncated");
    }
    size_t pos = 0;
    StreamFrame f = parse_frame(buf, pos);
    if (last_ && f.seq_no <= *last_) {
        throw IntegrityError("out-of-order frame: seq " + std::to_string(f.seq_no) + " after " +
                             std::to_string(*last_));
    }
    last_ = f.seq_no;
    return f;
}

std::vector<StreamFrame> read_all_frames(std::string_view bytes) {
    std::vector<StreamFrame> out;
    size_t pos = 0;
    while (pos < bytes.size()) {
        StreamFrame f = parse_frame(bytes, pos);
        if (!out.empty() && f.seq_no <= out.back().seq_no) {
            throw IntegrityError("out-of-order frame: seq " + std::to_string(f.seq_no) + " after " +
                                 std::to_string(out.back().seq_no));
        }
        out.push_back(std::move(f));
    }
    return out;
}

CompressionReport compression_report(uint64_t qasm_bytes, uint64_t framed_bytes, uint64_t gate_count) {
    if (qasm_bytes == 0 || framed_bytes == 0) {
        throw ConfigError("compression ratio is undefined for empty input");
    }
    CompressionReport r;
    r.ratio = (double)qasm_bytes / (double)framed_bytes;
    r.gates_per_kb = (double)gate_count / ((double)framed_bytes / 1024.0);
    return r;
}

}  // namespace qstream
