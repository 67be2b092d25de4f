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

#include "qstream/local_minimize.h"

#include <array>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "qstream/errors.h"
#include "qstream/graph_chunk.h"

namespace qstream {

namespace {

// sqrt(-iX) on the pivot and sqrt(iZ) on its neighbours, up to phase.
const LocalClifford &lc_pivot() {
    static const LocalClifford c = LocalClifford::from_word({GateTag::H, GateTag::S, GateTag::H});
    return c;
}
const LocalClifford &lc_neighbor() {
    static const LocalClifford c = LocalClifford::from_gate(GateTag::Sdg);
    return c;
}

// 0 for vertices projected onto <+|, 1 otherwise.
std::vector<uint8_t> roles(const GraphChunk &c) {
    std::vector<uint8_t> r(c.n_vertices, 0);
    for (auto v : c.output_map) {
        r[v] = 1;
    }
    for (const auto &t : c.tape) {
        r[t.vertex] = 1;
    }
    return r;
}

inline size_t vertex_cost(uint8_t role, LocalClifford l) {
    if (role == 0) {
        return l.fixes_plus() ? 0 : 1;
    }
    return l.is_identity() ? 0 : 1;
}

// Compact form for chunks with at most 64 vertices.
struct Small {
    std::vector<uint64_t> adj;
    std::vector<uint8_t> loc;

    std::string key() const {
        std::string s(reinterpret_cast<const char *>(adj.data()), adj.size() * 8);
        s.append(reinterpret_cast<const char *>(loc.data()), loc.size());
        return s;
    }
};

void small_move(Small &s, uint32_t u, int times) {
    for (int t = 0; t < times; t++) {
        uint64_t nb = s.adj[u];
        for (uint64_t m = nb; m; m &= m - 1) {
            uint32_t v = (uint32_t)__builtin_ctzll(m);
            s.adj[v] ^= nb & ~(uint64_t{1} << v);
            s.loc[v] = lc_neighbor().after(LocalClifford(s.loc[v])).code();
        }
        s.loc[u] = lc_pivot().after(LocalClifford(s.loc[u])).code();
    }
}

size_t small_cost(const Small &s, const std::vector<uint8_t> &role) {
    size_t c = 0;
    for (size_t v = 0; v < s.loc.size(); v++) {
        c += vertex_cost(role[v], LocalClifford(s.loc[v]));
    }
    return c;
}

Small to_small(const GraphChunk &c) {
    Small s;
    s.adj.assign(c.n_vertices, 0);
    s.loc.assign(c.n_vertices, 0);
    for (uint32_t v = 0; v < c.n_vertices; v++) {
        s.adj[v] = c.n_vertices ? c.adjacency.row(v)[0] : 0;
        s.loc[v] = c.locals[v].code();
    }
    return s;
}

void from_small(GraphChunk &c, const Small &s) {
    for (uint32_t v = 0; v < c.n_vertices; v++) {
        c.adjacency.row(v)[0] = s.adj[v];
        c.locals[v] = LocalClifford(s.loc[v]);
    }
}

bool pair_pass(Small &s, const std::vector<uint8_t> &role, uint32_t n) {
    size_t V = s.loc.size();
    size_t base = small_cost(s, role);
    for (size_t a = 0; a < V; a++) {
        if (!vertex_cost(role[a], LocalClifford(s.loc[a]))) {
            continue;
        }
        uint64_t near = s.adj[a] | (uint64_t{1} << a);
        uint64_t two = near;
        for (uint64_t m = near; m; m &= m - 1) {
            two |= s.adj[__builtin_ctzll(m)];
        }
        std::vector<uint32_t> cand;
        for (uint64_t m = two; m; m &= m - 1) {
            uint32_t u = (uint32_t)__builtin_ctzll(m);
            if (u >= n) {
                cand.push_back(u);
            }
        }
        for (auto u1 : cand) {
            for (int m1 = 1; m1 <= 3; m1++) {
                Small s1 = s;
                small_move(s1, u1, m1);
                for (auto u2 : cand) {
                    if (u2 == u1) {
                        continue;
                    }
                    for (int m2 = 1; m2 <= 3; m2++) {
                        Small s2 = s1;
                        small_move(s2, u2, m2);
                        if (small_cost(s2, role) < base) {
                            s = std::move(s2);
                            return true;
                        }
                    }
                }
            }
        }
    }
    return false;
}

void bfs(Small &s, const std::vector<uint8_t> &role, uint32_t n, size_t target, size_t budget) {
    size_t best = small_cost(s, role);
    if (best <= target) {
        return;
    }
    Small best_state = s;
    std::unordered_set<std::string> seen;
    std::deque<Small> queue;
    seen.insert(s.key());
    queue.push_back(s);
    uint32_t V = (uint32_t)s.loc.size();
    while (!queue.empty() && seen.size() < budget) {
        Small cur = std::move(queue.front());
        queue.pop_front();
        for (uint32_t u = n; u < V; u++) {
            for (int m = 1; m <= 3; m++) {
                Small nx = cur;
                small_move(nx, u, m);
                if (!seen.insert(nx.key()).second) {
                    continue;
                }
                size_t c = small_cost(nx, role);
                if (c < best) {
                    best = c;
                    best_state = nx;
                    if (best <= target) {
                        s = std::move(best_state);
                        return;
                    }
                }
                queue.push_back(std::move(nx));
            }
        }
    }
    s = std::move(best_state);
}

}  // namespace

void local_complement(GraphChunk &c, uint32_t u) {
    std::vector<uint32_t> nb = c.neighbors(u);
    for (size_t i = 0; i < nb.size(); i++) {
        for (size_t j = i + 1; j < nb.size(); j++) {
            c.adjacency.flip(nb[i], nb[j]);
            c.adjacency.flip(nb[j], nb[i]);
        }
        c.locals[nb[i]] = lc_neighbor().after(c.locals[nb[i]]);
    }
    c.locals[u] = lc_pivot().after(c.locals[u]);
}

void stabilizer_move(GraphChunk &c, uint32_t u) {
    static const LocalClifford x = LocalClifford::from_gate(GateTag::X);
    static const LocalClifford z = LocalClifford::from_gate(GateTag::Z);
    for (auto v : c.neighbors(u)) {
        c.locals[v] = z.after(c.locals[v]);
    }
    c.locals[u] = x.after(c.locals[u]);
}

size_t local_cost(const GraphChunk &c) {
    auto role = roles(c);
    size_t total = 0;
    for (uint32_t v = 0; v < c.n_vertices; v++) {
        total += vertex_cost(role[v], c.locals[v]);
    }
    return total;
}

void canonicalize_measured_locals(GraphChunk &c) {
    auto role = roles(c);
    for (uint32_t v = 0; v < c.n_vertices; v++) {
        if (role[v] == 0 && c.locals[v].fixes_plus()) {
            c.locals[v] = LocalClifford::identity();
        }
    }
}

void minimize_locals(GraphChunk &c, const MinimizeOptions &opts) {
    const uint32_t n = c.n_inputs;
    const uint32_t V = c.n_vertices;
    auto role = roles(c);

    // Greedy: cost changes only at u and its neighbours.
    for (size_t sweep = 0; sweep < opts.max_sweeps; sweep++) {
        bool improved = false;
        for (uint32_t u = n; u < V; u++) {
            auto nb = c.neighbors(u);
            LocalClifford lu = c.locals[u];
            std::vector<LocalClifford> ln;
            ln.reserve(nb.size());
            long before = (long)vertex_cost(role[u], lu);
            for (auto v : nb) {
                ln.push_back(c.locals[v]);
                before += (long)vertex_cost(role[v], c.locals[v]);
            }
            int best_m = 0;
            long best = before;
            LocalClifford cu = lu;
            std::vector<LocalClifford> cn = ln;
            for (int m = 1; m <= 3; m++) {
                cu = lc_pivot().after(cu);
                long cost = (long)vertex_cost(role[u], cu);
                for (size_t i = 0; i < nb.size(); i++) {
                    cn[i] = lc_neighbor().after(cn[i]);
                    cost += (long)vertex_cost(role[nb[i]], cn[i]);
                }
                if (cost < best) {
                    best = cost;
                    best_m = m;
                }
            }
            if (best_m) {
                if (best_m == 2) {
                    stabilizer_move(c, u);
                } else {
                    for (int m = 0; m < best_m; m++) {
                        local_complement(c, u);
                    }
                }
                improved = true;
            }
        }
        if (!improved) {
            break;
        }
    }

    if (V <= 64 && V <= opts.pair_search_vertex_limit) {
        Small s = to_small(c);
        while (pair_pass(s, role, n)) {
        }
        if (V <= opts.exhaustive_vertex_limit) {
            bfs(s, role, n, (size_t)n + c.k_nonclifford, opts.exhaustive_state_budget);
        }
        from_small(c, s);
    }
    canonicalize_measured_locals(c);
}

}  // namespace qstream
