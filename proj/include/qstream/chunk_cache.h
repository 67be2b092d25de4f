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

#ifndef QSTREAM_CHUNK_CACHE_H
#define QSTREAM_CHUNK_CACHE_H

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qstream/checksum.h"
#include "qstream/circuit.h"

namespace qstream {

class DecompositionTable;

struct CacheKey {
    Sha256Digest digest{};

    std::string hex() const {
        return to_hex(digest);
    }
    bool operator==(const CacheKey &other) const = default;
    auto operator<=>(const CacheKey &other) const = default;
};

struct CacheKeyHash {
    size_t operator()(const CacheKey &k) const {
        size_t h;
        std::memcpy(&h, k.digest.data(), sizeof(h));
        return h;
    }
};

/// Gates in the given order, qubits renamed by first use, Rz by key.
std::string canonical_encoding(const std::vector<Gate> &gates);
CacheKey canonical_key(const std::vector<Gate> &gates);
inline CacheKey canonical_key(const Subcircuit &sub) {
    return canonical_key(sub.gates);
}

struct CacheEntry {
    CacheKey key;
    std::string chunk;
    uint32_t qubit_arity = 0;
    uint64_t hits = 0;
    /// Seconds since the epoch.
    uint64_t created_at = 0;
};

struct CacheStats {
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t puts = 0;
    uint64_t evictions = 0;
    uint64_t entries = 0;
};

struct CacheOptions {
    /// 0 keeps everything; otherwise the least recently used entry goes first.
    size_t max_entries = 0;
};

class ChunkCache {
   public:
    /// In-memory cache.
    explicit ChunkCache(CacheOptions opts = {}, DecompositionTable *table = nullptr);
    /// Persistent cache in `dir` (created if missing). Loads decomp.table into
    /// the decomposition table.
    static std::unique_ptr<ChunkCache> open(const std::filesystem::path &dir, CacheOptions opts = {},
                                           DecompositionTable *table = nullptr);
    ~ChunkCache();
    ChunkCache(const ChunkCache &) = delete;
    ChunkCache &operator=(const ChunkCache &) = delete;

    std::optional<CacheEntry> get(const CacheKey &key);
    /// Idempotent for identical bytes; IntegrityError for different bytes
    /// under one key or bytes that do not decode.
    void put(const CacheKey &key, const std::string &chunk_bytes);
    /// No effect on counters.
    bool contains(const CacheKey &key) const;

    CacheStats stats() const;
    std::vector<CacheEntry> entries() const;
    size_t size() const;

    /// Writes the index and the decomposition table.
    void flush();
    void clear();

    bool persistent() const {
        return !dir_.empty();
    }
    const std::filesystem::path &dir() const {
        return dir_;
    }
    DecompositionTable &table() const {
        return *table_;
    }

   private:
    struct Slot {
        CacheEntry entry;
        uint64_t offset = 0;
        std::list<CacheKey>::iterator lru;
    };

    void load_locked();
    void append_record_locked(uint8_t type, const CacheKey &key, uint64_t created_at, const std::string &bytes);
    void evict_locked();
    void flush_locked();

    CacheOptions opts_;
    DecompositionTable *table_;
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::unordered_map<CacheKey, Slot, CacheKeyHash> slots_;
    std::list<CacheKey> lru_;
    CacheStats stats_;
    uint64_t log_size_ = 0;
};

}  // namespace qstream

#endif
