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

#include "qstream/pipeline.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "qstream/channel.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/wire_format.h"

namespace qstream {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct WorkItem {
    uint64_t id = 0;
    ExtractedSubcircuit ex;
    CacheKey key;
    Clock::time_point emitted;
};

struct WorkResult {
    uint64_t id = 0;
    CacheKey key;
    std::vector<uint32_t> qubits;
    std::string chunk;
    std::vector<uint32_t> table_keys;
    Clock::time_point emitted;
};

struct WireFrame {
    std::string bytes;
    // Side channel for verification only; the consumer works from the bytes.
    int64_t partition = -1;
    Clock::time_point emitted;
};

// First exception wins; everything else shuts down.
class Failure {
   public:
    void set(std::exception_ptr e) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!e_) {
            e_ = e;
        }
        failed_ = true;
    }
    bool failed() const {
        return failed_;
    }
    void rethrow() {
        if (e_) {
            std::rethrow_exception(e_);
        }
    }

   private:
    std::mutex mu_;
    std::exception_ptr e_;
    std::atomic<bool> failed_{false};
};

std::string ref_header(const CacheKey &key, const std::vector<uint32_t> &qubits) {
    return encode_cache_ref(CacheRef{key.digest, qubits});
}

}  // namespace

void PipelineConfig::validate() const {
    bounds.validate();
    if (workers < 1 || queue_capacity < 1 || consumer_rate < 0) {
        throw ConfigError("pipeline needs workers >= 1, queue_capacity >= 1 and a non-negative rate");
    }
}

std::vector<StageTiming> StageMetrics::stages() const {
    auto rate = [&](double s) {
        return s > 0 ? (double)gates / s : 0.0;
    };
    return {{"insertion", insertion_s, rate(insertion_s)},
            {"partitioning", partition_s, rate(partition_s)},
            {"extraction", extraction_s, rate(extraction_s)},
            {"compile", compile_s, rate(compile_s)}};
}

StageMetrics run_pipeline(const CircuitDag &dag, const PipelineConfig &cfg) {
    cfg.validate();
    StageMetrics m;
    m.gates = dag.size();
    m.queue_capacity = cfg.queue_capacity;
    m.latency_histogram_us.assign(32, 0);

    std::unique_ptr<ChunkCache> owned;
    ChunkCache *cache = cfg.cache;
    if (!cache) {
        if (cfg.cache_dir.empty()) {
            owned = std::make_unique<ChunkCache>(CacheOptions{}, const_cast<DecompositionTable *>(cfg.compile.table));
        } else {
            owned = ChunkCache::open(cfg.cache_dir, CacheOptions{}, const_cast<DecompositionTable *>(cfg.compile.table));
        }
        cache = owned.get();
    }
    StreamSession local_session;
    StreamSession &session = cfg.session ? *cfg.session : local_session;
    const DecompositionTable &table = cache->table();

    BoundedChannel<WorkItem> work(cfg.queue_capacity);
    BoundedChannel<WorkResult> results(cfg.queue_capacity);
    BoundedChannel<WireFrame> frames(cfg.queue_capacity);
    Failure failure;
    auto shutdown = [&] {
        work.close();
        results.close();
        frames.close();
    };

    auto wall0 = Clock::now();
    std::mutex stat_mu;

    // Producer: edge list, partitioning, extraction.
    std::thread producer([&] {
        try {
            auto t0 = Clock::now();
            EdgeList edges = build_edge_list(dag);
            m.insertion_s = since(t0);
            double extract = 0, blocked = 0;
            Partitioner part(dag, edges, cfg.bounds, &table);
            t0 = Clock::now();
            part.run([&](Partition &&p) {
                auto e0 = Clock::now();
                WorkItem item;
                item.id = p.id;
                item.ex = extract_subcircuit(dag, p.node_ids);
                item.key = canonical_key(item.ex.sub);
                item.emitted = Clock::now();
                extract += since(e0);
                auto b0 = Clock::now();
                if (!work.push(std::move(item))) {
                    throw Error("pipeline aborted");
                }
                blocked += since(b0);
            });
            m.partition_s = std::max(0.0, since(t0) - extract - blocked);
            m.extraction_s = extract;
            work.close();
        } catch (...) {
            failure.set(std::current_exception());
            shutdown();
        }
    });

    // Workers: cache lookup, compile on miss. A per-key lock keeps two workers
    // from compiling the same key at once.
    std::mutex key_mu;
    std::unordered_map<CacheKey, std::shared_ptr<std::mutex>, CacheKeyHash> key_locks;
    std::vector<std::thread> workers;
    for (uint32_t w = 0; w < cfg.workers; w++) {
        workers.emplace_back([&] {
            try {
                while (auto item = work.pop()) {
                    if (failure.failed()) {
                        break;
                    }
                    std::shared_ptr<std::mutex> lk;
                    {
                        std::lock_guard<std::mutex> g(key_mu);
                        auto &slot = key_locks[item->key];
                        if (!slot) {
                            slot = std::make_shared<std::mutex>();
                        }
                        lk = slot;
                    }
                    WorkResult r;
                    r.id = item->id;
                    r.key = item->key;
                    r.qubits = item->ex.qubit_map;
                    r.emitted = item->emitted;
                    auto c0 = Clock::now();
                    bool hit;
                    {
                        std::lock_guard<std::mutex> g(*lk);
                        auto entry = cache->get(item->key);
                        hit = entry.has_value();
                        if (hit) {
                            r.chunk = std::move(entry->chunk);
                        } else {
                            GraphChunk c;
                            try {
                                c = compile_chunk(item->ex.sub, cfg.compile);
                            } catch (const std::exception &e) {
                                throw Error("partition " + std::to_string(item->id) + ": " + e.what());
                            }
                            r.chunk = encode_chunk(c);
                            cache->put(item->key, r.chunk);
                        }
                    }
                    for (const auto &t : decode_chunk(r.chunk).tape) {
                        if (t.key >= DecompositionTable::NUM_BUILTIN) {
                            r.table_keys.push_back(t.key);
                        }
                    }
                    {
                        std::lock_guard<std::mutex> g(stat_mu);
                        m.compile_s += since(c0);
                        (hit ? m.cache_hits : m.cache_misses)++;
                    }
                    if (!results.push(std::move(r))) {
                        break;
                    }
                }
            } catch (...) {
                failure.set(std::current_exception());
                shutdown();
            }
        });
    }

    // Sequencer: restores partition order and frames.
    std::thread sequencer([&] {
        try {
            std::map<uint64_t, WorkResult> pending;
            uint64_t next_id = 0, seq = 0;
            auto send = [&](FrameType type, std::string payload, int64_t partition, Clock::time_point emitted) {
                WireFrame f;
                append_frame(f.bytes, StreamFrame{type, seq++, std::move(payload)});
                f.partition = partition;
                f.emitted = emitted;
                if (cfg.stream_out) {
                    cfg.stream_out->append(f.bytes);
                }
                if (!frames.push(std::move(f))) {
                    throw Error("pipeline aborted");
                }
            };
            auto emit = [&](WorkResult &r) {
                if (session.sent_keys.count(r.key)) {
                    send(FrameType::CACHE_REF, ref_header(r.key, r.qubits), (int64_t)r.id, r.emitted);
                    return;
                }
                for (auto k : r.table_keys) {
                    auto e = table.find(k);
                    if (e && !e->pending() && session.sent_table_keys.insert(k).second) {
                        send(FrameType::TABLE_PUT, encode_table_put(TablePut{k, e->sequence}), -1, r.emitted);
                    }
                }
                send(FrameType::FULL_CHUNK, ref_header(r.key, r.qubits) + r.chunk, (int64_t)r.id, r.emitted);
                session.sent_keys.insert(r.key);
            };
            while (auto r = results.pop()) {
                pending.emplace(r->id, std::move(*r));
                while (!pending.empty() && pending.begin()->first == next_id) {
                    emit(pending.begin()->second);
                    pending.erase(pending.begin());
                    next_id++;
                }
            }
            if (failure.failed()) {
                return;
            }
            if (!pending.empty()) {
                throw Error("sequencer gap: partition " + std::to_string(next_id) + " never arrived");
            }
            send(FrameType::END, {}, -1, Clock::now());
            frames.close();
        } catch (...) {
            failure.set(std::current_exception());
            shutdown();
        }
    });

    // Consumer: validates and resolves frames against its mirror.
    std::thread consumer([&] {
        try {
            uint64_t expect = 0;
            bool ended = false;
            while (auto f = frames.pop()) {
                size_t pos = 0;
                StreamFrame fr = parse_frame(f->bytes, pos);
                if (fr.seq_no != expect) {
                    throw Error("consumer desync: expected seq " + std::to_string(expect) + ", got " +
                                std::to_string(fr.seq_no));
                }
                expect++;
                m.frames++;
                m.stream_bytes += f->bytes.size();
                uint64_t work_units = 0;
                switch (fr.type) {
                    case FrameType::END:
                        ended = true;
                        break;
                    case FrameType::TABLE_PUT:
                        session.mirror_table_keys.insert(decode_table_put(fr.payload).key);
                        m.table_put_frames++;
                        break;
                    case FrameType::FULL_CHUNK: {
                        if (fr.payload.size() < 36) {
                            throw IntegrityError("FULL_CHUNK payload truncated");
                        }
                        uint32_t arity = get_u32(reinterpret_cast<const uint8_t *>(fr.payload.data()) + 32);
                        size_t head = 36 + 4 * (size_t)arity;
                        if (fr.payload.size() < head) {
                            throw IntegrityError("FULL_CHUNK payload truncated");
                        }
                        CacheRef ref = decode_cache_ref(std::string_view(fr.payload).substr(0, head));
                        GraphChunk c = decode_chunk(std::string_view(fr.payload).substr(head));
                        if (c.n_inputs != arity) {
                            throw IntegrityError("FULL_CHUNK assignment does not match the chunk arity");
                        }
                        work_units = c.n_vertices;
                        session.mirror[CacheKey{ref.key}] = std::move(c);
                        m.full_chunk_frames++;
                        break;
                    }
                    case FrameType::CACHE_REF: {
                        CacheRef ref = decode_cache_ref(fr.payload);
                        auto it = session.mirror.find(CacheKey{ref.key});
                        if (it == session.mirror.end()) {
                            throw Error("consumer desync: CACHE_REF to unknown chunk " + to_hex(ref.key));
                        }
                        if (it->second.n_inputs != ref.qubits.size()) {
                            throw IntegrityError("CACHE_REF arity does not match the cached chunk");
                        }
                        work_units = it->second.n_vertices;
                        m.cache_ref_frames++;
                        break;
                    }
                }
                if (f->partition >= 0) {
                    m.delivered.push_back((uint64_t)f->partition);
                    double us = std::chrono::duration<double, std::micro>(Clock::now() - f->emitted).count();
                    size_t b = us < 1 ? 0 : std::min<size_t>(31, (size_t)std::floor(std::log2(us)));
                    m.latency_histogram_us[b]++;
                    if (cfg.consumer_rate > 0) {
                        std::this_thread::sleep_for(std::chrono::duration<double>((double)work_units / cfg.consumer_rate));
                    }
                }
                if (ended) {
                    break;
                }
            }
            if (!ended && !failure.failed()) {
                throw Error("stream ended without an END frame");
            }
        } catch (...) {
            failure.set(std::current_exception());
            shutdown();
        }
    });

    producer.join();
    for (auto &t : workers) {
        t.join();
    }
    results.close();
    sequencer.join();
    consumer.join();
    failure.rethrow();

    m.wall_s = since(wall0);
    m.partition_count = m.delivered.size();
    m.queue_high_watermark = frames.high_watermark();
    if (owned) {
        owned->flush();
    }
    return m;
}

ReplayResult replay_speedup(const CircuitDag &dag, const PipelineConfig &cfg) {
    PipelineConfig c = cfg;
    std::unique_ptr<ChunkCache> owned;
    if (!c.cache) {
        if (c.cache_dir.empty()) {
            owned = std::make_unique<ChunkCache>(CacheOptions{}, const_cast<DecompositionTable *>(c.compile.table));
        } else {
            owned = ChunkCache::open(c.cache_dir, CacheOptions{}, const_cast<DecompositionTable *>(c.compile.table));
        }
        c.cache = owned.get();
    }
    c.cache->clear();
    StreamSession session;
    if (!c.session) {
        c.session = &session;
    }
    ReplayResult r;
    r.cold = run_pipeline(dag, c);
    r.warm = run_pipeline(dag, c);
    r.cold_s = r.cold.wall_s;
    r.warm_s = r.warm.wall_s;
    r.ratio = r.warm_s > 0 ? r.cold_s / r.warm_s : 0;
    return r;
}

std::string stage_report_csv(const StageMetrics &m) {
    std::string out = "stage,seconds,gates_per_second\n";
    char buf[128];
    for (const auto &s : m.stages()) {
        std::snprintf(buf, sizeof(buf), "%s,%.3f,%.1f\n", s.stage.c_str(), s.seconds, s.gates_per_second);
        out += buf;
    }
    return out;
}

std::string stage_report_table(const StageMetrics &m) {
    std::string out = "stage          seconds   gates/s\n";
    char buf[128];
    for (const auto &s : m.stages()) {
        std::snprintf(buf, sizeof(buf), "%-12s %9.3f %9.3g\n", s.stage.c_str(), s.seconds, s.gates_per_second);
        out += buf;
    }
    return out;
}

std::string stage_report_json(const StageMetrics &m) {
    using nlohmann::json;
    auto ms = [](double s) {
        return std::round(s * 1e3) / 1e3;
    };
    json stages = json::array();
    for (const auto &s : m.stages()) {
        stages.push_back({{"stage", s.stage}, {"seconds", ms(s.seconds)}, {"gates_per_second", s.gates_per_second}});
    }
    json hist = json::array();
    for (size_t i = 0; i < m.latency_histogram_us.size(); i++) {
        if (m.latency_histogram_us[i]) {
            hist.push_back({{"lower_us", i ? (uint64_t)1 << i : 0}, {"count", m.latency_histogram_us[i]}});
        }
    }
    json j = {
        {"gates", m.gates},
        {"partition_count", m.partition_count},
        {"cache_hits", m.cache_hits},
        {"cache_misses", m.cache_misses},
        {"frames", m.frames},
        {"stream_bytes", m.stream_bytes},
        {"full_chunk_frames", m.full_chunk_frames},
        {"cache_ref_frames", m.cache_ref_frames},
        {"table_put_frames", m.table_put_frames},
        {"queue_capacity", m.queue_capacity},
        {"queue_high_watermark", m.queue_high_watermark},
        {"timings",
         {{"insertion_s", ms(m.insertion_s)},
          {"partition_s", ms(m.partition_s)},
          {"extraction_s", ms(m.extraction_s)},
          {"compile_s", ms(m.compile_s)},
          {"wall_s", ms(m.wall_s)},
          {"stages", stages},
          {"latency_histogram_us", hist}}},
    };
    return j.dump(2) + "\n";
}

}  // namespace qstream
