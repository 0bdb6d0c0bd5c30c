// Copyright 2026 The gnncirc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gnncirc/cgnn.hpp"
#include "gnncirc/gadgets.hpp"

namespace gnncirc {

// Fragment ports follow the graph encoding: n*n adjacency blocks in row
// major order, then n feature blocks. Vertex indices are 1-based.

// Emits m_ij * v_j for every j; the zero diagonal removes vertex i itself.
Fragment build_neighbor_mask(std::size_t n, std::size_t i, unsigned k);
// Sum of row i of the adjacency blocks.
Fragment build_degree(std::size_t n, std::size_t i, unsigned k);
// Ports: n masked blocks, then n neighbor flags. Results: the flagged
// blocks in vertex order followed by zero blocks (a stable counting sort
// on the key (1 - flag) * n + position).
Fragment build_compaction(std::size_t n, unsigned k);

std::vector<GateId> emit_neighbor_mask(CircuitBuilder& b,
                                       std::span<const GateId> row,
                                       std::span<const GateId> features);
GateId emit_degree(CircuitBuilder& b, std::span<const GateId> row);
std::vector<GateId> emit_compaction(CircuitBuilder& b,
                                    std::span<const GateId> masked,
                                    std::span<const GateId> flags);

struct G2cOptions {
  // Layer families are refuted for tail symmetry at arities 3..this.
  std::size_t symmetry_max_arity = 6;
  std::size_t symmetry_trials = 10;
  std::uint64_t seed = 1;
};

struct G2cResources {
  std::size_t n = 0;
  std::size_t size = 0;
  std::size_t depth = 0;
};

// Circuit family K_n mapping enc(G) (n*n + n blocks) to the n final feature
// blocks of the source C-GNN. Members are built on demand and cached.
class G2cPlan {
 public:
  explicit G2cPlan(CGnn source);

  const CGnn& source() const { return source_; }
  const Circuit& circuit(std::size_t n) const;
  G2cResources resources(std::size_t n) const;

 private:
  struct Cache;
  CGnn source_;
  std::shared_ptr<Cache> cache_;
};

// Throws Error when a layer family fails generation or the tail-symmetry
// refuter finds a counterexample.
G2cPlan compile_gnn_to_circuit_family(const CGnn& net,
                                      const G2cOptions& options = {});

// Builds K_n directly.
Circuit build_gnn_circuit(const CGnn& net, std::size_t n);

}  // namespace gnncirc
