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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnncirc/cgnn.hpp"
#include "gnncirc/gadgets.hpp"
#include "gnncirc/graph.hpp"

namespace gnncirc {

enum class Regime {
  // Add, Mul, Proj and Output gates only.
  Plain,
  // Activation gates are evaluated inside the layer families.
  GatesInFamilies,
  // Function-layer form; activation strata become layer activations.
  ActivationLayers,
};

std::string_view to_string(Regime r);
// "plain", "gates" or "actlayers". Throws ParseError.
Regime parse_regime(std::string_view name);

// Per-layer tables of a compilation. Layer i (1-based) evaluates the gates
// at depth i.
struct C2gLayer {
  // Numbers carried by not-yet-evaluated gates when the layer starts.
  GateNumbering numbering;
  // Gates at depth i.
  std::vector<GateId> stratum;
  // Numbers of the gates at depth >= i.
  std::vector<Rational> domain;
  std::string activation = "id";
  // ActivationLayers activation strata: current number -> preimage whose
  // image is the gate's number for the following layers.
  std::vector<std::pair<Rational, Scalar>> preimages;
  bool renumbered = false;
};

class C2gPlan {
 public:
  C2gPlan(const Circuit& source, Regime regime);

  Regime regime() const { return regime_; }
  const Circuit& normalized() const { return normalized_; }
  const Measure& measures() const { return measure_; }
  std::size_t depth() const { return measure_.depth; }
  const GateNumbering& initial_numbering() const { return layers_[0].numbering; }
  const C2gLayer& layer(std::size_t i) const { return layers_.at(i - 1); }
  // Unique successor of a non-output, non-input gate.
  GateId successor(GateId g) const { return successor_.at(g); }
  // Number of g in force after `layer` layers; g must still be pending.
  const Rational& number_after(GateId g, std::size_t layer) const;
  // Vertex values after `layer` layers are meaningful only for gates with
  // layer <= depth (sources: layer 0).
  bool live(GateId g, std::size_t layer) const;

  // The labeled graph of the normalized circuit for the given inputs.
  CircuitGraph graph_for(std::span<const VecK> inputs) const;

 private:
  Regime regime_;
  Circuit normalized_;
  Measure measure_;
  std::vector<GateId> successor_;
  std::vector<C2gLayer> layers_;
  // numbering in force after the last layer
  GateNumbering final_numbering_;
};

// Add/Mul/Output/Proj (and, for GatesInFamilies, Activation) dispatch on
// the own number; other vertices keep their feature.
CircuitFamily build_layer_family_plain(const C2gPlan& plan, std::size_t layer);
// Family and layer activation for ActivationLayers.
CGnnLayer build_layer_family_actlayer(const C2gPlan& plan, std::size_t layer);

struct C2gCompilation {
  CGnn gnn;
  C2gPlan plan;
};

// Normalizes `c`, checks the regime constraints and builds one layer per
// depth level. Throws Error on violations.
C2gCompilation compile_circuit_to_gnn(const Circuit& c, Regime regime);

}  // namespace gnncirc
