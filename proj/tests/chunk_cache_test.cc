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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "qstream/chunk_cache.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/graph_compiler.h"
#include "qstream/wire_format.h"
#include "test_util.h"

using namespace qstream;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
    fs::path d = fs::temp_directory_path() / ("qstream_cache_test_" + name);
    fs::remove_all(d);
    return d;
}

std::string chunk_bytes(uint32_t gates) {
    Subcircuit sub{2, {}};
    for (uint32_t i = 0; i < gates; i++) {
        sub.gates.push_back(Gate(i % 2 ? GateTag::T : GateTag::CX, i % 2 ? std::initializer_list<uint32_t>{1}
                                                                          : std::initializer_list<uint32_t>{0, 1}));
    }
    return encode_chunk(compile_chunk(sub));
}

CacheKey key_of(uint32_t i) {
    return CacheKey{sha256(std::string_view(std::to_string(i)))};
}

}  // namespace

TEST(chunk_cache, canonical_key_examples) {
    std::vector<Gate> a{Gate(GateTag::CX, {3, 7}), Gate(GateTag::T, {7})};
    std::vector<Gate> b{Gate(GateTag::CX, {0, 1}), Gate(GateTag::T, {1})};
    std::vector<Gate> c{Gate(GateTag::CX, {0, 1}), Gate(GateTag::Tdg, {1})};
    std::vector<Gate> d{Gate(GateTag::CX, {1, 0}), Gate(GateTag::T, {1})};
    EXPECT_EQ(canonical_key(a), canonical_key(b));
    EXPECT_NE(canonical_key(b), canonical_key(c));
    EXPECT_NE(canonical_key(b), canonical_key(d));
    std::vector<Gate> e{Gate(GateTag::T, {1}), Gate(GateTag::CX, {0, 1})};
    EXPECT_NE(canonical_key(b), canonical_key(e));
    EXPECT_EQ(canonical_key(std::vector<Gate>{}), canonical_key(std::vector<Gate>{}));
    std::string empty = canonical_encoding({});
    EXPECT_EQ(canonical_key(std::vector<Gate>{}).digest, sha256(empty));
    EXPECT_NE(canonical_key(std::vector<Gate>{Gate(GateKind::rz(9), {0})}),
              canonical_key(std::vector<Gate>{Gate(GateKind::rz(10), {0})}));
}

TEST(chunk_cache, key_label_invariance) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 200; rep++) {
        auto dag = testutil::random_dag(rng, 40, 6, true);
        std::vector<Gate> gates;
        for (const auto &n : dag.nodes()) {
            gates.push_back(n.gate);
        }
        std::vector<uint32_t> perm = testutil::iota(64);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Gate> moved;
        for (const auto &g : gates) {
            Gate h = g;
            for (size_t k = 0; k < h.num_qubits; k++) {
                h.qubits[k] = perm[h.qubits[k]];
            }
            moved.push_back(h);
        }
        EXPECT_EQ(canonical_key(gates), canonical_key(moved));
        // Changing one gate's kind changes the key.
        std::vector<Gate> changed = gates;
        for (auto &g : changed) {
            if (g.kind.tag == GateTag::T) {
                g.kind = GateTag::Tdg;
                EXPECT_NE(canonical_key(gates), canonical_key(changed));
                break;
            }
        }
    }
}

TEST(chunk_cache, get_put_and_counters) {
    ChunkCache cache;
    EXPECT_FALSE(cache.get(key_of(1)).has_value());
    std::string b = chunk_bytes(3);
    cache.put(key_of(1), b);
    auto e = cache.get(key_of(1));
    ASSERT_TRUE(e.has_value());
    EXPECT_EQ(e->chunk, b);
    EXPECT_EQ(e->qubit_arity, 2u);
    EXPECT_EQ(e->hits, 1u);
    cache.put(key_of(1), b);  // identical bytes: idempotent
    EXPECT_THROW(cache.put(key_of(1), chunk_bytes(5)), IntegrityError);
    EXPECT_THROW(cache.put(key_of(2), "garbage"), IntegrityError);
    auto s = cache.stats();
    EXPECT_EQ(s.hits, 1u);
    EXPECT_EQ(s.misses, 1u);
    EXPECT_EQ(s.puts, 1u);
    EXPECT_EQ(s.entries, 1u);
    EXPECT_TRUE(cache.contains(key_of(1)));
    EXPECT_EQ(cache.stats().hits + cache.stats().misses, 2u);
}

TEST(chunk_cache, hit_conservation) {
    ChunkCache cache;
    std::mt19937_64 rng(2);
    std::string b = chunk_bytes(2);
    uint64_t gets = 0;
    for (int i = 0; i < 500; i++) {
        uint32_t k = (uint32_t)(rng() % 40);
        if (rng() % 3 == 0) {
            cache.put(key_of(k), b);
        } else {
            cache.get(key_of(k));
            gets++;
        }
    }
    auto s = cache.stats();
    EXPECT_EQ(s.hits + s.misses, gets);
}

TEST(chunk_cache, persistence_round_trip) {
    fs::path dir = fresh_dir("persist");
    DecompositionTable table;
    uint32_t k = table.intern_angle(0.25);
    table.set_sequence(k, sequence_from_string("HTH"));
    std::vector<CacheEntry> before;
    CacheStats stats_before;
    {
        auto cache = ChunkCache::open(dir, {}, &table);
        for (uint32_t i = 0; i < 5; i++) {
            cache->put(key_of(i), chunk_bytes(i + 1));
        }
        cache->get(key_of(2));
        cache->get(key_of(2));
        cache->get(key_of(99));
        cache->flush();
        before = cache->entries();
        stats_before = cache->stats();
    }
    DecompositionTable other;
    auto again = ChunkCache::open(dir, {}, &other);
    auto after = again->entries();
    ASSERT_EQ(after.size(), before.size());
    for (size_t i = 0; i < after.size(); i++) {
        EXPECT_EQ(after[i].key, before[i].key);
        EXPECT_EQ(after[i].chunk, before[i].chunk);
        EXPECT_EQ(after[i].hits, before[i].hits);
        EXPECT_EQ(after[i].created_at, before[i].created_at);
        EXPECT_EQ(after[i].qubit_arity, before[i].qubit_arity);
    }
    auto s = again->stats();
    EXPECT_EQ(s.hits, stats_before.hits);
    EXPECT_EQ(s.misses, stats_before.misses);
    EXPECT_EQ(s.puts, stats_before.puts);
    EXPECT_EQ(other.lookup_sequence(k).sequence, sequence_from_string("HTH"));
    again.reset();
    fs::remove_all(dir);
}

TEST(chunk_cache, corrupt_entry_names_key) {
    fs::path dir = fresh_dir("corrupt");
    {
        DecompositionTable t;
        auto cache = ChunkCache::open(dir, {}, &t);
        cache->put(key_of(7), chunk_bytes(4));
    }
    std::string log = testutil::read_file((dir / "entries.log").string());
    log[60] ^= 0x40;
    std::ofstream(dir / "entries.log", std::ios::binary | std::ios::trunc) << log;
    DecompositionTable t;
    try {
        ChunkCache::open(dir, {}, &t);
        FAIL() << "corruption not detected";
    } catch (const IntegrityError &e) {
        EXPECT_NE(std::string(e.what()).find(key_of(7).hex()), std::string::npos) << e.what();
    }
    fs::remove_all(dir);
}

TEST(chunk_cache, lru_eviction) {
    ChunkCache cache(CacheOptions{2});
    std::string b = chunk_bytes(1);
    cache.put(key_of(1), b);
    cache.put(key_of(2), b);
    cache.get(key_of(1));
    cache.put(key_of(3), b);
    EXPECT_TRUE(cache.contains(key_of(1)));
    EXPECT_FALSE(cache.contains(key_of(2)));
    EXPECT_TRUE(cache.contains(key_of(3)));
    EXPECT_EQ(cache.stats().evictions, 1u);

    fs::path dir = fresh_dir("lru");
    {
        DecompositionTable t;
        auto c = ChunkCache::open(dir, CacheOptions{1}, &t);
        c->put(key_of(1), b);
        c->put(key_of(2), b);
    }
    DecompositionTable t;
    auto c = ChunkCache::open(dir, {}, &t);
    EXPECT_EQ(c->size(), 1u);
    EXPECT_TRUE(c->contains(key_of(2)));
    c.reset();
    fs::remove_all(dir);
}

TEST(chunk_cache, concurrent_puts_and_gets) {
    ChunkCache cache;
    std::vector<std::string> bytes;
    for (uint32_t i = 0; i < 8; i++) {
        bytes.push_back(chunk_bytes(i + 1));
    }
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; t++) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 400; i++) {
                uint32_t k = (uint32_t)((i + t) % 8);
                if (!cache.get(key_of(k))) {
                    cache.put(key_of(k), bytes[k]);
                }
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
    auto s = cache.stats();
    EXPECT_EQ(s.entries, 8u);
    EXPECT_EQ(s.puts, 8u);
    EXPECT_EQ(s.hits + s.misses, 1600u);
    for (uint32_t k = 0; k < 8; k++) {
        EXPECT_EQ(cache.get(key_of(k))->chunk, bytes[k]);
    }
}

TEST(chunk_cache, clear) {
    fs::path dir = fresh_dir("clear");
    DecompositionTable t;
    auto c = ChunkCache::open(dir, {}, &t);
    c->put(key_of(1), chunk_bytes(2));
    c->clear();
    EXPECT_EQ(c->size(), 0u);
    c.reset();
    DecompositionTable u;
    EXPECT_EQ(ChunkCache::open(dir, {}, &u)->size(), 0u);
    fs::remove_all(dir);
}
