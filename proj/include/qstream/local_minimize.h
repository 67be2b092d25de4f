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

#ifndef QSTREAM_LOCAL_MINIMIZE_H
#define QSTREAM_LOCAL_MINIMIZE_H

#include <cstddef>
#include <cstdint>

namespace qstream {

struct GraphChunk;

/// Local complementation at a non-input vertex u rewrites the chunk without
/// changing what it implements: edges inside N(u) toggle, locals[u] gains
/// sqrt(-iX) and every neighbour gains sqrt(iZ). The stabilizer move K_u
/// (equal to two complementations) gains X on u and Z on N(u).
void local_complement(GraphChunk &c, uint32_t u);
void stabilizer_move(GraphChunk &c, uint32_t u);

/// Non-identity locals, counting X-measured vertices whose local fixes |+>
/// as identity.
size_t local_cost(const GraphChunk &c);

/// Resets locals on X-measured vertices that fix |+> to the identity code.
void canonicalize_measured_locals(GraphChunk &c);

struct MinimizeOptions {
    /// Greedy sweeps over single moves.
    size_t max_sweeps = 32;
    /// Pairs of moves around costly vertices, for chunks up to this size.
    size_t pair_search_vertex_limit = 48;
    /// Breadth-first search over the move orbit when the greedy result is
    /// still above n+k, for chunks up to this size.
    size_t exhaustive_vertex_limit = 24;
    size_t exhaustive_state_budget = 200000;
};

/// Lowers local_cost with local complementations and stabilizer moves, then
/// canonicalizes. Never increases the cost.
void minimize_locals(GraphChunk &c, const MinimizeOptions &opts = {});

}  // namespace qstream

#endif
