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

#ifndef QSTREAM_PIPELINE_H
#define QSTREAM_PIPELINE_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qstream/chunk_cache.h"
#include "qstream/circuit.h"
#include "qstream/graph_compiler.h"
#include "qstream/partitioner.h"

namespace qstream {

/// Link state that outlives one run: which keys the consumer already holds,
/// and the consumer's mirror of them.
struct StreamSession {
    std::unordered_set<CacheKey, CacheKeyHash> sent_keys;
    std::unordered_set<uint32_t> sent_table_keys;
    std::unordered_map<CacheKey, GraphChunk, CacheKeyHash> mirror;
    std::unordered_set<uint32_t> mirror_table_keys;
};

struct PipelineConfig {
    ResourceBounds bounds;
    uint32_t workers = 1;
    /// Frames buffered between the sequencer and the consumer; the work and
    /// result queues use the same capacity.
    uint32_t queue_capacity = 64;
    /// Simulated gates per second at the consumer; 0 drains without sleeping.
    double consumer_rate = 0;
    /// Persistent cache directory; empty means an in-memory cache.
    std::filesystem::path cache_dir;
    /// Used instead of cache_dir when set.
    ChunkCache *cache = nullptr;
    CompileOptions compile;
    /// Shared link state; a fresh session per run when null.
    StreamSession *session = nullptr;
    /// Receives the serialized stream when set.
    std::string *stream_out = nullptr;

    void validate() const;
};

struct StageTiming {
    std::string stage;
    double seconds = 0;
    double gates_per_second = 0;
};

struct StageMetrics {
    double insertion_s = 0;
    double partition_s = 0;
    double extraction_s = 0;
    double compile_s = 0;
    double wall_s = 0;
    uint64_t gates = 0;
    uint64_t partition_count = 0;
    uint64_t cache_hits = 0;
    uint64_t cache_misses = 0;
    uint64_t frames = 0;
    uint64_t stream_bytes = 0;
    uint64_t full_chunk_frames = 0;
    uint64_t cache_ref_frames = 0;
    uint64_t table_put_frames = 0;
    uint64_t queue_capacity = 0;
    uint64_t queue_high_watermark = 0;
    /// Partition ids in the order the consumer received them.
    std::vector<uint64_t> delivered;
    /// Bucket i counts latencies in [2^i, 2^(i+1)) microseconds; bucket 0
    /// also takes everything below 1 us.
    std::vector<uint64_t> latency_histogram_us;

    std::vector<StageTiming> stages() const;
};

StageMetrics run_pipeline(const CircuitDag &dag, const PipelineConfig &cfg);

struct ReplayResult {
    double cold_s = 0;
    double warm_s = 0;
    double ratio = 0;
    StageMetrics cold;
    StageMetrics warm;
};

/// Cold run on an empty cache, then a warm run on the same cache.
ReplayResult replay_speedup(const CircuitDag &dag, const PipelineConfig &cfg);

std::string stage_report_csv(const StageMetrics &m);
std::string stage_report_json(const StageMetrics &m);
std::string stage_report_table(const StageMetrics &m);

}  // namespace qstream

#endif
