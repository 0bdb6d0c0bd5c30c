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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

// Undirected simple graph on vertices 0..n-1 with a feature vector per
// vertex.
class LabeledGraph {
 public:
  // Edges are 0-based unordered pairs; self loops and duplicates throw.
  LabeledGraph(std::size_t n, unsigned dim,
               const std::vector<std::pair<std::size_t, std::size_t>>& edges,
               std::vector<VecK> features);

  std::size_t size() const { return adjacency_.size(); }
  unsigned dim() const { return dim_; }
  Backend backend() const;
  const std::vector<VecK>& features() const { return features_; }
  // Ascending vertex order.
  const std::vector<std::size_t>& neighbors(std::size_t v) const {
    return adjacency_.at(v);
  }
  bool adjacent(std::size_t u, std::size_t v) const;
  // Pairs (u, v) with u < v, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  // Same structure with new features.
  LabeledGraph with_features(std::vector<VecK> features) const;

 private:
  unsigned dim_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<VecK> features_;
};

// n*n row-major adjacency blocks (all-zero / all-one) then the n features.
std::vector<VecK> encode_graph(const LabeledGraph& g);
// The trailing n feature blocks of an n*n+n encoding, or an n-block
// feature-only sequence verbatim.
std::vector<VecK> decode_features(std::span<const VecK> blocks, std::size_t n);

using GateNumbering = std::map<GateId, Rational>;

// Consecutive integers from 1 for every gate that is not a source, in
// (depth, gate id) order.
GateNumbering number_gates(const Circuit& c);

struct CircuitGraph {
  LabeledGraph graph;
  // vertex -> gate and back.
  std::vector<GateId> vertex_gate;
  std::map<GateId, std::size_t> gate_vertex;
  // Input values that coincide with a gate number.
  std::vector<std::string> warnings;

  std::vector<std::size_t> output_vertices(const Circuit& c) const;
};

// Vertices are the gates of c: inputs in ordinal order, then constants in
// id order, then numbered gates by ascending number. Inputs carry their
// values, constants their value, every other gate its number broadcast.
CircuitGraph circuit_to_labeled_graph(const Circuit& c, const GateNumbering& nr,
                                      std::span<const VecK> inputs);

// Text format: `graph <n> dim <k>`, then `edge <i> <j>` and
// `feat <i> <v1,...,vk>` lines with 1-based vertices. Missing features
// default to zero.
LabeledGraph parse_graph(std::string_view text);
std::string format_graph(const LabeledGraph& g);

}  // namespace gnncirc
