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

#include "qstream/chunk_cache.h"

#include <chrono>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/wire_format.h"

namespace qstream {

namespace fs = std::filesystem;

namespace {

constexpr uint8_t REC_PUT = 1;
constexpr uint8_t REC_DELETE = 2;
constexpr size_t REC_HEAD = 1 + 32 + 8 + 4;
constexpr char INDEX_MAGIC[4] = {'Q', 'C', 'I', '1'};

uint64_t now_seconds() {
    return (uint64_t)std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        return {};
    }
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_atomically(const fs::path &p, const std::string &bytes) {
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), (std::streamsize)bytes.size());
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, p);
}

}  // namespace

std::string canonical_encoding(const std::vector<Gate> &gates) {
    ExtractedSubcircuit ex = relabel_by_first_use(gates);
    std::string out = "QSK1";
    put_u32(out, ex.sub.num_qubits);
    put_u32(out, (uint32_t)ex.sub.gates.size());
    for (const auto &g : ex.sub.gates) {
        out.push_back((char)g.kind.tag);
        out.push_back((char)g.num_qubits);
        for (auto q : g.targets()) {
            put_u32(out, q);
        }
        if (g.kind.tag == GateTag::Rz) {
            put_u32(out, *g.kind.rz_key);
        }
    }
    return out;
}

CacheKey canonical_key(const std::vector<Gate> &gates) {
    return CacheKey{sha256(canonical_encoding(gates))};
}

ChunkCache::ChunkCache(CacheOptions opts, DecompositionTable *table)
    : opts_(opts), table_(table ? table : &DecompositionTable::global()) {
}

std::unique_ptr<ChunkCache> ChunkCache::open(const fs::path &dir, CacheOptions opts, DecompositionTable *table) {
    auto c = std::make_unique<ChunkCache>(opts, table);
    fs::create_directories(dir);
    c->dir_ = dir;
    std::lock_guard<std::mutex> lock(c->mu_);
    c->load_locked();
    return c;
}

ChunkCache::~ChunkCache() {
    if (persistent()) {
        try {
            std::lock_guard<std::mutex> lock(mu_);
            flush_locked();
        } catch (...) {
        }
    }
}

void ChunkCache::load_locked() {
    if (fs::exists(dir_ / "decomp.table")) {
        table_->load_table(dir_ / "decomp.table");
    }
    std::string log = read_file(dir_ / "entries.log");
    log_size_ = log.size();
    const uint8_t *p = reinterpret_cast<const uint8_t *>(log.data());
    size_t pos = 0;
    while (pos < log.size()) {
        if (log.size() - pos < REC_HEAD + 4) {
            throw IntegrityError("entries.log truncated at offset " + std::to_string(pos));
        }
        uint8_t type = p[pos];
        CacheKey key;
        std::memcpy(key.digest.data(), p + pos + 1, 32);
        uint64_t created = get_u64(p + pos + 33);
        uint32_t len = get_u32(p + pos + 41);
        if (log.size() - pos < REC_HEAD + (uint64_t)len + 4) {
            throw IntegrityError("entries.log record for key " + key.hex() + " is truncated");
        }
        size_t end = pos + REC_HEAD + len;
        if (crc32_ieee(p + pos, REC_HEAD + len) != get_u32(p + end)) {
            throw IntegrityError("CRC mismatch in cache entry " + key.hex());
        }
        if (type == REC_PUT) {
            Slot s;
            s.entry.key = key;
            s.entry.created_at = created;
            s.entry.chunk.assign(log.data() + pos + REC_HEAD, len);
            s.entry.qubit_arity = decode_chunk(s.entry.chunk).n_inputs;
            s.offset = pos;
            auto old = slots_.find(key);
            if (old != slots_.end()) {
                lru_.erase(old->second.lru);
                slots_.erase(old);
            }
            lru_.push_back(key);
            s.lru = std::prev(lru_.end());
            slots_.emplace(key, std::move(s));
        } else if (type == REC_DELETE) {
            auto old = slots_.find(key);
            if (old != slots_.end()) {
                lru_.erase(old->second.lru);
                slots_.erase(old);
            }
        } else {
            throw IntegrityError("unknown record type in entries.log");
        }
        pos = end + 4;
    }

    // Counters and per-entry hits live in the index.
    std::string idx = read_file(dir_ / "index.bin");
    if (idx.empty()) {
        stats_.entries = slots_.size();
        return;
    }
    const uint8_t *q = reinterpret_cast<const uint8_t *>(idx.data());
    if (idx.size() < 4 + 8 * 5 + 4 + 4 || std::memcmp(q, INDEX_MAGIC, 4) != 0 ||
        crc32_ieee(q, idx.size() - 4) != get_u32(q + idx.size() - 4)) {
        throw IntegrityError("index.bin is corrupt");
    }
    stats_.hits = get_u64(q + 4);
    stats_.misses = get_u64(q + 12);
    stats_.puts = get_u64(q + 20);
    stats_.evictions = get_u64(q + 28);
    uint32_t count = get_u32(q + 44);
    size_t off = 48;
    if (idx.size() != off + (size_t)count * (32 + 8 + 8) + 4) {
        throw IntegrityError("index.bin length mismatch");
    }
    for (uint32_t i = 0; i < count; i++, off += 48) {
        CacheKey key;
        std::memcpy(key.digest.data(), q + off, 32);
        auto it = slots_.find(key);
        if (it != slots_.end()) {
            it->second.entry.hits = get_u64(q + off + 40);
        }
    }
    stats_.entries = slots_.size();
}

void ChunkCache::append_record_locked(uint8_t type, const CacheKey &key, uint64_t created_at,
                                      const std::string &bytes) {
    std::string rec;
    rec.push_back((char)type);
    rec.append(reinterpret_cast<const char *>(key.digest.data()), 32);
    put_u64(rec, created_at);
    put_u32(rec, (uint32_t)bytes.size());
    rec.append(bytes);
    put_u32(rec, crc32_ieee(as_bytes(rec)));
    std::ofstream out(dir_ / "entries.log", std::ios::binary | std::ios::app);
    out.write(rec.data(), (std::streamsize)rec.size());
    out.flush();
    if (!out) {
        throw Error("cannot append to " + (dir_ / "entries.log").string());
    }
    log_size_ += rec.size();
}

std::optional<CacheEntry> ChunkCache::get(const CacheKey &key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = slots_.find(key);
    if (it == slots_.end()) {
        stats_.misses++;
        return std::nullopt;
    }
    stats_.hits++;
    Slot &s = it->second;
    s.entry.hits++;
    lru_.splice(lru_.end(), lru_, s.lru);
    return s.entry;
}

bool ChunkCache::contains(const CacheKey &key) const {
    std::lock_guard<std::mutex> lock(mu_);
    return slots_.count(key) != 0;
}

void ChunkCache::put(const CacheKey &key, const std::string &chunk_bytes) {
    uint32_t arity = decode_chunk(chunk_bytes).n_inputs;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = slots_.find(key);
    if (it != slots_.end()) {
        if (it->second.entry.chunk != chunk_bytes) {
            throw IntegrityError("conflicting chunk bytes for cache key " + key.hex());
        }
        return;
    }
    Slot s;
    s.entry.key = key;
    s.entry.chunk = chunk_bytes;
    s.entry.qubit_arity = arity;
    s.entry.created_at = now_seconds();
    s.offset = log_size_;
    if (persistent()) {
        append_record_locked(REC_PUT, key, s.entry.created_at, chunk_bytes);
    }
    lru_.push_back(key);
    s.lru = std::prev(lru_.end());
    slots_.emplace(key, std::move(s));
    stats_.puts++;
    evict_locked();
    stats_.entries = slots_.size();
}

void ChunkCache::evict_locked() {
    while (opts_.max_entries && slots_.size() > opts_.max_entries) {
        CacheKey victim = lru_.front();
        lru_.pop_front();
        slots_.erase(victim);
        stats_.evictions++;
        if (persistent()) {
            append_record_locked(REC_DELETE, victim, 0, {});
        }
    }
}

CacheStats ChunkCache::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    CacheStats s = stats_;
    s.entries = slots_.size();
    return s;
}

std::vector<CacheEntry> ChunkCache::entries() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<CacheEntry> out;
    for (const auto &k : lru_) {
        out.push_back(slots_.at(k).entry);
    }
    std::sort(out.begin(), out.end(), [](const CacheEntry &a, const CacheEntry &b) {
        return a.key < b.key;
    });
    return out;
}

size_t ChunkCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return slots_.size();
}

void ChunkCache::flush_locked() {
    if (!persistent()) {
        return;
    }
    std::string idx(INDEX_MAGIC, 4);
    put_u64(idx, stats_.hits);
    put_u64(idx, stats_.misses);
    put_u64(idx, stats_.puts);
    put_u64(idx, stats_.evictions);
    put_u64(idx, log_size_);
    std::vector<const Slot *> order;
    for (const auto &[k, s] : slots_) {
        order.push_back(&s);
    }
    std::sort(order.begin(), order.end(), [](const Slot *a, const Slot *b) {
        return a->entry.key < b->entry.key;
    });
    put_u32(idx, (uint32_t)order.size());
    for (const Slot *s : order) {
        idx.append(reinterpret_cast<const char *>(s->entry.key.digest.data()), 32);
        put_u64(idx, s->offset);
        put_u64(idx, s->entry.hits);
    }
    put_u32(idx, crc32_ieee(as_bytes(idx)));
    write_atomically(dir_ / "index.bin", idx);
    table_->save_table(dir_ / "decomp.table");
}

void ChunkCache::flush() {
    std::lock_guard<std::mutex> lock(mu_);
    flush_locked();
}

void ChunkCache::clear() {
    std::lock_guard<std::mutex> lock(mu_);
    slots_.clear();
    lru_.clear();
    stats_ = CacheStats{};
    log_size_ = 0;
    if (persistent()) {
        fs::remove(dir_ / "entries.log");
        fs::remove(dir_ / "index.bin");
    }
}

}  // namespace qstream
