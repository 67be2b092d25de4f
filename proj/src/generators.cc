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

#include "qstream/generators.h"

#include <map>
#include <random>

#include "qstream/errors.h"
#include "qstream/wire_format.h"

namespace qstream {

std::vector<Gate> maj_gates(uint32_t c, uint32_t b, uint32_t a) {
    return {Gate(GateKind(GateTag::CX), {a, b}), Gate(GateKind(GateTag::CX), {a, c}),
            Gate(GateKind(GateTag::Toffoli), {c, b, a})};
}

std::vector<Gate> uma_gates(uint32_t c, uint32_t b, uint32_t a) {
    return {Gate(GateKind(GateTag::Toffoli), {c, b, a}), Gate(GateKind(GateTag::CX), {a, c}),
            Gate(GateKind(GateTag::CX), {c, b})};
}

void append_maj(CircuitDag &dag, uint32_t c, uint32_t b, uint32_t a) {
    for (const auto &g : maj_gates(c, b, a)) {
        dag.append(g);
    }
}

void append_uma(CircuitDag &dag, uint32_t c, uint32_t b, uint32_t a) {
    for (const auto &g : uma_gates(c, b, a)) {
        dag.append(g);
    }
}

CircuitDag cuccaro_adder(uint32_t bits) {
    if (bits < 1) {
        throw ConfigError("adder needs at least one bit");
    }
    AdderLayout L{bits};
    CircuitDag dag(L.num_qubits());
    dag.reserve(6 * (size_t)bits + 1);
    for (uint32_t i = 0; i < bits; i++) {
        append_maj(dag, i == 0 ? L.carry_in() : L.a(i - 1), L.b(i), L.a(i));
    }
    dag.append(GateKind(GateTag::CX), {L.a(bits - 1), L.carry_out()});
    for (uint32_t i = bits; i-- > 0;) {
        append_uma(dag, i == 0 ? L.carry_in() : L.a(i - 1), L.b(i), L.a(i));
    }
    return dag;
}

void StriderConfig::validate() const {
    if (bits < 1 || alpha < 1) {
        throw ConfigError("strided plan needs bits >= 1 and alpha >= 1");
    }
    if (alpha > bits) {
        throw ConfigError("stride alpha exceeds the adder width");
    }
    if (beta >= alpha) {
        throw ConfigError("remainder beta must be below alpha");
    }
    if (beta > bits || (bits - beta) % alpha != 0) {
        throw ConfigError("bits - beta must be a multiple of alpha");
    }
}

std::vector<Gate> adder_block(BlockKind kind, uint32_t width) {
    // Local layout: 0 = carry in, 1 + 2i = b_i, 2 + 2i = a_i.
    CircuitDag dag(2 * width + 1);
    auto c_of = [](uint32_t i) {
        return i == 0 ? 0u : 2 * i;
    };
    if (kind == BlockKind::MAJ) {
        for (uint32_t i = 0; i < width; i++) {
            append_maj(dag, c_of(i), 1 + 2 * i, 2 + 2 * i);
        }
    } else {
        for (uint32_t i = width; i-- > 0;) {
            append_uma(dag, c_of(i), 1 + 2 * i, 2 + 2 * i);
        }
    }
    return lower_toffoli(dag).as_subcircuit().gates;
}

AdderPlan strided_plan(const StriderConfig &cfg, ChunkCache &cache, const CompileOptions &opts) {
    cfg.validate();
    AdderPlan plan;
    plan.cfg = cfg;
    AdderLayout L{cfg.bits};

    struct Shape {
        CacheKey key;
        std::vector<uint32_t> wire_to_local;
        uint32_t chunk = 0;
    };
    std::map<std::pair<int, uint32_t>, Shape> shapes;

    auto shape_of = [&](BlockKind kind, uint32_t width) -> Shape & {
        auto id = std::make_pair((int)kind, width);
        auto it = shapes.find(id);
        if (it != shapes.end()) {
            return it->second;
        }
        auto ex = relabel_by_first_use(adder_block(kind, width));
        Shape s;
        s.key = canonical_key(ex.sub);
        s.wire_to_local = ex.qubit_map;
        s.chunk = (uint32_t)plan.unique_chunks.size();
        std::optional<CacheEntry> hit = cache.get(s.key);
        if (hit) {
            plan.cache_hits++;
            plan.unique_chunks.push_back(decode_chunk(hit->chunk));
        } else {
            plan.cache_misses++;
            GraphChunk c = compile_chunk(ex.sub, opts);
            cache.put(s.key, encode_chunk(c));
            plan.unique_chunks.push_back(std::move(c));
        }
        plan.unique_keys.push_back(s.key);
        return shapes.emplace(id, std::move(s)).first->second;
    };

    auto add_ref = [&](BlockKind kind, uint32_t start, uint32_t width, bool first_use) {
        Shape &s = shape_of(kind, width);
        if (!first_use) {
            if (cache.get(s.key)) {
                plan.cache_hits++;
            } else {
                plan.cache_misses++;
            }
        }
        PlanRef r;
        r.key = s.key;
        r.chunk = s.chunk;
        for (uint32_t local : s.wire_to_local) {
            uint32_t g;
            if (local == 0) {
                g = start == 0 ? L.carry_in() : L.a(start - 1);
            } else if (local % 2 == 1) {
                g = L.b(start + (local - 1) / 2);
            } else {
                g = L.a(start + (local - 2) / 2);
            }
            r.qubits.push_back(g);
        }
        plan.refs.push_back(std::move(r));
    };

    // Block starts, low bits first; the remainder block sits at the bottom.
    std::vector<std::pair<uint32_t, uint32_t>> blocks;
    uint32_t pos = 0;
    if (cfg.beta > 0) {
        blocks.push_back({0, cfg.beta});
        pos = cfg.beta;
    }
    for (uint32_t i = 0; i < cfg.k_blocks(); i++, pos += cfg.alpha) {
        blocks.push_back({pos, cfg.alpha});
    }
    std::map<std::pair<int, uint32_t>, bool> seen;
    auto first = [&](BlockKind k, uint32_t w) {
        return seen.emplace(std::make_pair((int)k, w), true).second;
    };
    for (auto [start, width] : blocks) {
        add_ref(BlockKind::MAJ, start, width, first(BlockKind::MAJ, width));
    }
    plan.carry = Gate(GateKind(GateTag::CX), {L.a(cfg.bits - 1), L.carry_out()});
    plan.carry_after = plan.refs.size();
    for (size_t i = blocks.size(); i-- > 0;) {
        add_ref(BlockKind::UMA, blocks[i].first, blocks[i].second, first(BlockKind::UMA, blocks[i].second));
    }
    return plan;
}

std::vector<Gate> plan_gates(const AdderPlan &plan) {
    std::map<uint32_t, std::vector<Gate>> block_cache;
    std::vector<Gate> out;
    auto emit = [&](const PlanRef &r, size_t index) {
        BlockKind kind = index < plan.carry_after ? BlockKind::MAJ : BlockKind::UMA;
        uint32_t width = (uint32_t)(r.qubits.size() - 1) / 2;
        auto ex = relabel_by_first_use(adder_block(kind, width));
        for (auto g : ex.sub.gates) {
            for (size_t j = 0; j < g.num_qubits; j++) {
                g.qubits[j] = r.qubits[g.qubits[j]];
            }
            out.push_back(g);
        }
    };
    for (size_t i = 0; i < plan.refs.size(); i++) {
        if (i == plan.carry_after) {
            out.push_back(plan.carry);
        }
        emit(plan.refs[i], i);
    }
    if (plan.carry_after == plan.refs.size()) {
        out.push_back(plan.carry);
    }
    return out;
}

CircuitDag synthetic_repetitive(uint32_t blocks, uint32_t block_gates, uint32_t distinct_blocks, uint32_t qubits,
                                uint64_t seed) {
    if (distinct_blocks > blocks) {
        throw ConfigError("distinct_blocks exceeds blocks");
    }
    if (blocks > 0 && (distinct_blocks == 0 || block_gates == 0)) {
        throw ConfigError("synthetic circuit needs at least one template gate");
    }
    if (qubits < 2) {
        throw ConfigError("synthetic circuit needs at least two qubits");
    }
    std::mt19937_64 rng(seed);
    auto pick = [&](uint64_t m) {
        return (uint32_t)(rng() % m);
    };
    static const GateTag one[] = {GateTag::H, GateTag::S, GateTag::Sdg, GateTag::T, GateTag::Tdg, GateTag::X,
                                  GateTag::Z};
    std::vector<std::vector<Gate>> templates;
    std::vector<CacheKey> keys;
    while (templates.size() < distinct_blocks) {
        std::vector<Gate> t;
        uint32_t last = pick(qubits);
        for (uint32_t i = 0; i < block_gates; i++) {
            if (pick(100) < 40) {
                uint32_t other = pick(qubits - 1);
                if (other >= last) {
                    other++;
                }
                bool cx = pick(2);
                if (pick(2)) {
                    t.push_back(Gate(GateKind(cx ? GateTag::CX : GateTag::CZ), {last, other}));
                } else {
                    t.push_back(Gate(GateKind(cx ? GateTag::CX : GateTag::CZ), {other, last}));
                }
                last = pick(2) ? other : last;
            } else {
                t.push_back(Gate(GateKind(one[pick(7)]), {last}));
            }
        }
        CacheKey k = canonical_key(t);
        if (std::find(keys.begin(), keys.end(), k) != keys.end()) {
            continue;
        }
        keys.push_back(k);
        templates.push_back(std::move(t));
    }
    CircuitDag dag(qubits);
    dag.reserve((size_t)blocks * block_gates);
    std::vector<uint32_t> perm(qubits);
    for (uint32_t b = 0; b < blocks; b++) {
        for (uint32_t q = 0; q < qubits; q++) {
            perm[q] = q;
        }
        for (uint32_t q = qubits - 1; q > 0; q--) {
            std::swap(perm[q], perm[pick(q + 1)]);
        }
        for (auto g : templates[b % distinct_blocks]) {
            for (size_t j = 0; j < g.num_qubits; j++) {
                g.qubits[j] = perm[g.qubits[j]];
            }
            dag.append(g);
        }
    }
    return dag;
}

ResourceBounds synthetic_bounds(uint32_t block_gates, uint32_t qubits) {
    ResourceBounds b;
    b.max_gates = block_gates;
    b.max_t_count = block_gates;
    b.max_qubits = std::max<uint32_t>(qubits, 3);
    b.window_size = block_gates * 64;
    return b;
}

}  // namespace qstream
