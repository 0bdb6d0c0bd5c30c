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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnncirc/cgnn.hpp"
#include "gnncirc/compile_c2g.hpp"
#include "gnncirc/random.hpp"

namespace gnncirc {

struct Bounds {
  std::size_t max_n = 6;
  std::size_t max_depth = 4;
  std::size_t max_size = 20;
  unsigned dim = 2;
  std::int64_t magnitude = 100;
  // C-GNN layer count.
  std::size_t max_layers = 3;
};

// "n=6,depth=4,size=20,k=2,mag=100,layers=3"; omitted keys keep defaults.
// Throws ParseError.
Bounds parse_bounds(std::string_view text);
std::string to_string(const Bounds& b);

struct TestSpec {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  Bounds bounds;
  Backend backend = Backend::Exact;
};

struct CircuitShape {
  unsigned dim = 1;
  // Sigmoid, tanh and relu gates may appear.
  bool activations = false;
  // At least one activation gate.
  bool require_activation = false;
  // Strata above the sources are homogeneous and every wire spans one
  // level, so normalization leaves the form intact.
  bool function_layer = false;
  std::vector<std::string> activation_pool = {"sigmoid", "tanh", "relu"};
};

// Valid circuit with depth <= max_depth and size <= max_size. Throws Error
// when the bounds admit no circuit of the requested shape.
Circuit gen_random_circuit(Rng& rng, const Bounds& bounds,
                           const CircuitShape& shape);
Circuit gen_random_circuit(const TestSpec& spec, const CircuitShape& shape);

// Features are rationals within the magnitude bound.
LabeledGraph gen_random_graph(Rng& rng, std::size_t n, unsigned dim,
                              std::int64_t edge_num, std::int64_t edge_den,
                              std::int64_t magnitude);
LabeledGraph gen_random_graph(const TestSpec& spec);

// Layers mix aggregate-combine layers with small tail-symmetric families.
// Float-only activations are drawn only for the float backend.
CGnn gen_random_cgnn(Rng& rng, const Bounds& bounds, Backend backend);
CGnn gen_random_cgnn(const TestSpec& spec);

std::vector<VecK> gen_random_inputs(Rng& rng, const Circuit& c,
                                    std::int64_t magnitude);

struct Divergence {
  // Layer of the C-GNN trace (0 = initial features); for circuit outputs
  // the final layer.
  std::size_t layer = 0;
  std::size_t vertex = 0;
  std::size_t component = 0;
  std::string expected;
  std::string actual;
  std::string context;
};

struct VerifyReport {
  bool compiled = true;
  bool match = true;
  std::string error;
  std::optional<Divergence> first;
  std::size_t compared = 0;

  bool ok() const { return compiled && match; }
  std::string str() const;
};

// Exact comparison on the exact backend, relative 1e-9 with absolute floor
// 1e-12 on the float backend. Compilation failures are reported.
VerifyReport verify_g2c(const CGnn& net, const LabeledGraph& g,
                        const EvalOptions& options = {});
// Compiles `c` and compares the output vertices with `reference` (defaults
// to `c`) evaluated on the same inputs. On mismatch the live trace is
// scanned for the first divergent vertex.
VerifyReport verify_c2g(const Circuit& c, std::span<const VecK> inputs,
                        Regime regime, const EvalOptions& options = {},
                        const Circuit* reference = nullptr);

struct CampaignReport {
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  std::size_t failures = 0;
  std::string text;
  bool ok() const { return mismatches == 0 && failures == 0; }
};

// One line per instance plus a summary; identical specs give identical text.
CampaignReport run_g2c_campaign(const TestSpec& spec);
CampaignReport run_c2g_campaign(const TestSpec& spec, Regime regime);

// Exact backend with float-only activations lifted, or plain float.
EvalOptions campaign_options(Backend backend);

}  // namespace gnncirc
