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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gnncirc/eval.hpp"
#include "gnncirc/family.hpp"
#include "gnncirc/graph.hpp"

namespace gnncirc {

struct CGnnLayer {
  // Applied to (own feature, neighbor features in vertex order).
  CircuitFamily family;
  std::string activation = "id";
};

class CGnn {
 public:
  // Throws Error on zero layers, dimension mismatches or unknown
  // activations.
  CGnn(unsigned dim, std::vector<CGnnLayer> layers);

  unsigned dim() const { return dim_; }
  std::size_t depth() const { return layers_.size(); }
  const std::vector<CGnnLayer>& layers() const { return layers_; }

 private:
  unsigned dim_;
  std::vector<CGnnLayer> layers_;
};

// Backend defaults to the graph's. Returns the same structure with the
// final features.
LabeledGraph eval_cgnn(const CGnn& net, const LabeledGraph& g,
                       const EvalOptions& options = {});
// Feature snapshots h^(0) ... h^(d).
std::vector<std::vector<VecK>> eval_cgnn_trace(const CGnn& net,
                                               const LabeledGraph& g,
                                               const EvalOptions& options = {});
// Final features of the given vertices, computing only the values they
// depend on.
std::vector<VecK> eval_cgnn_at(const CGnn& net, const LabeledGraph& g,
                               std::span<const std::size_t> vertices,
                               const EvalOptions& options = {});

enum class Aggregation { Sum, Product, Mean };

std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view name);

// One aggregate-combine layer: x' = act(A x + B agg(tail) + c).
struct AcGnnLayer {
  // A symmetric family is applied to the tail when it is nonempty. An empty
  // tail aggregates to 1 for Product and to 0 otherwise.
  std::variant<Aggregation, CircuitFamily> aggregation = Aggregation::Sum;
  std::vector<std::vector<Scalar>> self_weights;      // k x k
  std::vector<std::vector<Scalar>> neighbor_weights;  // k x k
  VecK bias;
  std::string activation = "id";
};

// Throws Error on malformed matrices, or float parameters when `target` is
// the exact backend.
CGnn from_ac_gnn(unsigned dim, const std::vector<AcGnnLayer>& layers,
                 Backend target = Backend::Exact);

// Combine file: k `self <row>` lines, k `neigh <row>` lines, one
// `bias <vector>` line; rows are comma separated.
AcGnnLayer parse_combine(std::string_view text, unsigned dim);

// Description file: `cgnn dim <k> depth <d>` then d lines
//   layer builtin <sum|product|mean> <combine-file> <activation>
//   layer family <circuit-file-template-with-{n}> <activation>
// Relative paths resolve against `base_dir`.
CGnn parse_cgnn(std::string_view text, const std::filesystem::path& base_dir);
CGnn read_cgnn_file(const std::filesystem::path& path);

// Writes `<stem>.cgnn` plus one circuit file per layer and arity into
// `dir`, as family templates. Returns the description path.
std::filesystem::path write_cgnn_files(const CGnn& net,
                                       const std::filesystem::path& dir,
                                       std::string_view stem,
                                       std::span<const std::size_t> arities);

}  // namespace gnncirc
