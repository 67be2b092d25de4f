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

#include "qstream/partitioner.h"

#include <algorithm>
#include <bit>

#include "qstream/decomp_table.h"
#include "qstream/errors.h"

namespace qstream {

void ResourceBounds::validate() const {
    if (max_t_count < 1 || max_qubits < 1 || max_gates < 1 || window_size < 1) {
        throw ConfigError("resource bounds must all be positive");
    }
}

void QubitSet::merge(const QubitSet &other) {
    if (words_.size() < other.words_.size()) {
        words_.resize(other.words_.size(), 0);
    }
    for (size_t i = 0; i < other.words_.size(); i++) {
        words_[i] |= other.words_[i];
    }
}

uint32_t QubitSet::size() const {
    uint32_t s = 0;
    for (auto w : words_) {
        s += (uint32_t)std::popcount(w);
    }
    return s;
}

uint32_t QubitSet::union_size(const QubitSet &other) const {
    const auto &a = words_.size() >= other.words_.size() ? words_ : other.words_;
    const auto &b = words_.size() >= other.words_.size() ? other.words_ : words_;
    uint32_t s = 0;
    for (size_t i = 0; i < a.size(); i++) {
        s += (uint32_t)std::popcount(a[i] | (i < b.size() ? b[i] : 0));
    }
    return s;
}

std::vector<uint32_t> QubitSet::to_vector() const {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < words_.size(); i++) {
        for (uint64_t w = words_[i]; w; w &= w - 1) {
            out.push_back((uint32_t)(i * 64 + std::countr_zero(w)));
        }
    }
    return out;
}

UnionFind::UnionFind(uint32_t size, uint32_t num_qubits)
    : num_qubits_(num_qubits), parent_(size), rank_(size, 0), agg_(size) {
    for (uint32_t i = 0; i < size; i++) {
        parent_[i] = i;
    }
}

void UnionFind::make_set(uint32_t i, uint32_t t_weight, std::span<const uint32_t> qubits) {
    parent_[i] = i;
    rank_[i] = 0;
    // Sized to the highest qubit touched; merge() grows as needed.
    uint32_t hi = 0;
    for (auto q : qubits) {
        hi = std::max(hi, q + 1);
    }
    Aggregate a;
    a.t_count = t_weight;
    a.gate_count = 1;
    a.qubits = QubitSet(hi);
    for (auto q : qubits) {
        a.qubits.insert(q);
    }
    agg_[i] = std::move(a);
}

uint32_t UnionFind::find(uint32_t i) {
    uint32_t r = i;
    while (parent_[r] != r) {
        r = parent_[r];
    }
    while (parent_[i] != r) {
        uint32_t nx = parent_[i];
        parent_[i] = r;
        i = nx;
    }
    return r;
}

bool UnionFind::fits(const std::vector<uint32_t> &roots, const ResourceBounds &bounds) const {
    uint64_t t = 0, g = 0;
    for (auto r : roots) {
        t += agg_[r].t_count;
        g += agg_[r].gate_count;
    }
    if (t > bounds.max_t_count || g > bounds.max_gates) {
        return false;
    }
    if (roots.size() == 2) {
        return agg_[roots[0]].qubits.union_size(agg_[roots[1]].qubits) <= bounds.max_qubits;
    }
    QubitSet u;
    for (auto r : roots) {
        u.merge(agg_[r].qubits);
    }
    return u.size() <= bounds.max_qubits;
}

uint32_t UnionFind::link(uint32_t a, uint32_t b) {
    if (rank_[a] < rank_[b]) {
        std::swap(a, b);
    }
    parent_[b] = a;
    if (rank_[a] == rank_[b]) {
        rank_[a]++;
    }
    agg_[a].t_count += agg_[b].t_count;
    agg_[a].gate_count += agg_[b].gate_count;
    agg_[a].qubits.merge(agg_[b].qubits);
    agg_[b] = Aggregate{};
    return a;
}

uint32_t UnionFind::merge_all(const std::vector<uint32_t> &roots) {
    uint32_t r = roots[0];
    for (size_t i = 1; i < roots.size(); i++) {
        r = link(r, roots[i]);
    }
    return r;
}

bool UnionFind::unite(uint32_t a, uint32_t b, const ResourceBounds &bounds) {
    a = find(a);
    b = find(b);
    if (a == b) {
        return true;
    }
    if (!fits({a, b}, bounds)) {
        return false;
    }
    link(a, b);
    return true;
}

Partitioner::Partitioner(const CircuitDag &dag, const EdgeList &edges, ResourceBounds bounds,
                         const DecompositionTable *table)
    : dag_(dag), edges_(edges), bounds_(bounds), table_(table) {
    bounds_.validate();
}

bool Partitioner::order_ok(const std::vector<uint32_t> &roots, const std::vector<uint32_t> &extra_preds) {
    // Every cut edge must run from a component with a smaller seed to one with
    // a larger seed; emitting by seed is then a topological order.
    uint32_t new_seed = UINT32_MAX;
    for (auto r : roots) {
        new_seed = std::min(new_seed, seed_[r]);
    }
    auto inside = [&](uint32_t root) {
        return std::find(roots.begin(), roots.end(), root) != roots.end();
    };
    auto check = [&](uint32_t src) {
        if (src < begin_) {
            return true;
        }
        uint32_t rs = uf_.find(src - begin_);
        return inside(rs) || seed_[rs] < new_seed;
    };
    for (auto r : roots) {
        for (auto src : in_edges_[r]) {
            if (!check(src)) {
                return false;
            }
        }
    }
    for (auto src : extra_preds) {
        if (!check(src)) {
            return false;
        }
    }
    return true;
}

uint32_t Partitioner::merge_roots(const std::vector<uint32_t> &roots, const std::vector<uint32_t> &extra_preds) {
    uint32_t seed = UINT32_MAX;
    std::vector<uint32_t> in;
    for (auto r : roots) {
        seed = std::min(seed, seed_[r]);
        in.insert(in.end(), in_edges_[r].begin(), in_edges_[r].end());
        in_edges_[r].clear();
        in_edges_[r].shrink_to_fit();
    }
    in.insert(in.end(), extra_preds.begin(), extra_preds.end());
    uint32_t root = uf_.merge_all(roots);
    std::vector<uint32_t> kept;
    for (auto src : in) {
        if (src >= begin_ && uf_.find(src - begin_) == root) {
            continue;
        }
        kept.push_back(src);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    seed_[root] = seed;
    in_edges_[root] = std::move(kept);
    stats_.merges += roots.size() - 1;
    return root;
}

void Partitioner::process_window(uint32_t begin, uint32_t end, const std::function<void(Partition &&)> &sink) {
    begin_ = begin;
    uint32_t len = end - begin;
    uf_ = UnionFind(len, dag_.num_qubits());
    seed_.assign(len, 0);
    in_edges_.assign(len, {});
    stats_.windows++;
    stats_.peak_resident_nodes = std::max<uint64_t>(stats_.peak_resident_nodes, len);

    std::vector<uint32_t> preds;
    for (uint32_t id = begin; id < end; id++) {
        const GateNode &node = dag_.node(id);
        uint32_t tw = t_weight(node.kind(), table_);
        if (tw > bounds_.max_t_count || node.gate.num_qubits > bounds_.max_qubits) {
            std::string desc = std::string(gate_name(node.kind().tag)) + "(";
            for (size_t j = 0; j < node.gate.num_qubits; j++) {
                desc += (j ? "," : "") + std::to_string(node.gate.qubits[j]);
            }
            throw ConfigError("gate " + std::to_string(id) + " " + desc + ") exceeds the partition bounds on its own");
        }
        uint32_t v = id - begin;
        uf_.make_set(v, tw, node.qubits());
        seed_[v] = id;

        preds.clear();
        while (edge_pos_ < edges_.edges.size() && edges_.edges[edge_pos_].second == id) {
            preds.push_back(edges_.edges[edge_pos_].first);
            edge_pos_++;
        }

        std::vector<uint32_t> live;
        for (auto p : preds) {
            if (p >= begin) {
                live.push_back(p);
            }
        }
        // Full merge with every live predecessor component first.
        std::vector<uint32_t> roots{v};
        for (auto p : live) {
            uint32_t r = uf_.find(p - begin);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) {
                roots.push_back(r);
            }
        }
        if (roots.size() > 1 && uf_.fits(roots, bounds_) && order_ok(roots, {})) {
            merge_roots(roots, {});
            continue;
        }
        // Then one predecessor at a time, in edge order. Predecessors left
        // out become cut edges into v's component.
        std::vector<uint32_t> pending = live;
        for (auto p : live) {
            uint32_t rv = uf_.find(v);
            uint32_t rp = uf_.find(p - begin);
            if (rv == rp) {
                continue;
            }
            std::vector<uint32_t> others;
            for (auto q : pending) {
                if (q != p && uf_.find(q - begin) != rp && uf_.find(q - begin) != rv) {
                    others.push_back(q);
                }
            }
            std::vector<uint32_t> pair{rv, rp};
            if (uf_.fits(pair, bounds_) && order_ok(pair, others)) {
                merge_roots(pair, {});
            } else {
                stats_.refusals++;
            }
        }
        uint32_t rv = uf_.find(v);
        for (auto p : live) {
            if (uf_.find(p - begin) != rv) {
                in_edges_[rv].push_back(p);
            }
        }
    }

    // Close the window: every live component is emitted, by seed.
    std::vector<uint32_t> roots;
    for (uint32_t v = 0; v < len; v++) {
        if (uf_.find(v) == v) {
            roots.push_back(v);
        }
    }
    std::sort(roots.begin(), roots.end(), [&](uint32_t a, uint32_t b) {
        return seed_[a] < seed_[b];
    });
    std::vector<std::vector<uint32_t>> members(len);
    for (uint32_t v = 0; v < len; v++) {
        members[uf_.find(v)].push_back(begin + v);
    }
    auto same = [&](uint32_t a, uint32_t b) {
        if (b == NO_NODE || b < begin || b >= end) {
            return false;
        }
        return uf_.find(a - begin) == uf_.find(b - begin);
    };
    for (auto r : roots) {
        Partition p;
        p.id = next_id_++;
        p.node_ids = std::move(members[r]);
        const Aggregate &a = uf_.agg(r);
        p.t_count = a.t_count;
        p.gate_count = a.gate_count;
        p.qubit_set = a.qubits.to_vector();
        for (auto id : p.node_ids) {
            const GateNode &node = dag_.node(id);
            for (size_t j = 0; j < node.gate.num_qubits; j++) {
                uint32_t q = node.gate.qubits[j];
                if (node.prev[j] != NO_NODE && !same(id, node.prev[j])) {
                    p.boundary_in.push_back({q, node.prev[j], id});
                }
                if (node.next[j] != NO_NODE && !same(id, node.next[j])) {
                    p.boundary_out.push_back({q, id, node.next[j]});
                }
            }
        }
        sink(std::move(p));
    }
    uf_ = UnionFind();
    seed_.clear();
    seed_.shrink_to_fit();
    in_edges_.clear();
    in_edges_.shrink_to_fit();
}

void Partitioner::run(const std::function<void(Partition &&)> &sink) {
    uint32_t total = (uint32_t)dag_.size();
    edge_pos_ = 0;
    for (uint32_t b = 0; b < total; b += bounds_.window_size) {
        uint32_t e = (uint32_t)std::min<uint64_t>(total, (uint64_t)b + bounds_.window_size);
        process_window(b, e, sink);
    }
}

std::vector<Partition> partition_stream(const EdgeList &edges, const CircuitDag &dag, const ResourceBounds &bounds,
                                        const DecompositionTable *table) {
    std::vector<Partition> out;
    Partitioner p(dag, edges, bounds, table);
    p.run([&](Partition &&part) {
        out.push_back(std::move(part));
    });
    return out;
}

uint64_t peak_memory_nodes(const ResourceBounds &bounds, uint64_t frontier) {
    return (uint64_t)bounds.window_size + frontier;
}

}  // namespace qstream
