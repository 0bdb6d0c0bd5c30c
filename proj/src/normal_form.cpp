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

#include "gnncirc/normal_form.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

#include "gnncirc/errors.hpp"

namespace gnncirc {

namespace {

struct PathLengths {
  std::vector<std::size_t> shortest;
  std::vector<std::size_t> longest;
};

PathLengths path_lengths(const Circuit& c) {
  PathLengths pl;
  pl.shortest.assign(c.size(), 0);
  pl.longest.assign(c.size(), 0);
  for (GateId g : c.topological_order()) {
    const auto& preds = c.gate(g).preds;
    if (preds.empty()) continue;
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    for (GateId p : preds) {
      lo = std::min(lo, pl.shortest[p] + 1);
      hi = std::max(hi, pl.longest[p] + 1);
    }
    pl.shortest[g] = lo;
    pl.longest[g] = hi;
  }
  return pl;
}

}  // namespace

bool is_path_length_normal(const Circuit& c) {
  require_valid(c, "is_path_length_normal");
  PathLengths pl = path_lengths(c);
  std::optional<std::size_t> length;
  for (GateId o : c.outputs()) {
    if (pl.shortest[o] != pl.longest[o]) return false;
    if (length && *length != pl.longest[o]) return false;
    length = pl.longest[o];
  }
  auto succ = c.successors();
  for (GateId g = 0; g < c.size(); ++g) {
    GateOp op = c.gate(g).op();
    if (op == GateOp::Input || op == GateOp::Output) continue;
    if (succ[g].size() != 1) return false;
  }
  return true;
}

Circuit to_path_length_normal_form(const Circuit& c) {
  require_valid(c, "to_path_length_normal_form");
  const Measure m = measure(c);
  CircuitBuilder b(c.dim());
  std::vector<GateId> inputs;
  for (GateId g : c.inputs()) {
    inputs.push_back(b.input(std::get<InputGate>(c.gate(g).kind).ordinal));
  }
  std::map<GateId, GateId> input_copy;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    input_copy[c.inputs()[i]] = inputs[i];
  }

  // Emits a fresh copy of g whose value is available at exactly `level`.
  auto emit = [&](auto&& self, GateId g, std::size_t level) -> GateId {
    const Gate& gate = c.gate(g);
    if (gate.is_source()) {
      GateId wire = gate.op() == GateOp::Input ? input_copy.at(g)
                                               : b.raw(gate.kind, {});
      for (std::size_t i = 0; i < level; ++i) wire = b.add({wire});
      return wire;
    }
    std::vector<GateId> preds;
    preds.reserve(gate.preds.size());
    for (GateId p : gate.preds) preds.push_back(self(self, p, level - 1));
    return b.raw(gate.kind, std::move(preds));
  };
  for (GateId o : c.outputs()) emit(emit, o, m.depth);
  return std::move(b).build();
}

bool is_function_layer_form(const Circuit& c) {
  if (!is_path_length_normal(c)) return false;
  const Measure m = measure(c);
  std::map<std::size_t, std::string> stratum_type;
  for (GateId g = 0; g < c.size(); ++g) {
    if (c.gate(g).is_source()) continue;
    std::string label = kind_label(c.gate(g).kind);
    auto [it, fresh] = stratum_type.emplace(m.gate_depth[g], label);
    if (!fresh && it->second != label) return false;
  }
  return true;
}

std::vector<std::string> liveness_audit(const Circuit& c) {
  require_valid(c, "liveness_audit");
  std::vector<std::string> problems;
  const Measure m = measure(c);
  auto succ = c.successors();
  for (GateId g = 0; g < c.size(); ++g) {
    GateOp op = c.gate(g).op();
    if (op == GateOp::Output) continue;
    if (op != GateOp::Input && succ[g].size() != 1) {
      problems.push_back("gate g" + std::to_string(g) + " has " +
                         std::to_string(succ[g].size()) + " successors");
    }
    for (GateId s : succ[g]) {
      if (m.gate_depth[s] != m.gate_depth[g] + 1) {
        problems.push_back("wire g" + std::to_string(g) + " -> g" +
                           std::to_string(s) + " spans depth " +
                           std::to_string(m.gate_depth[g]) + " to " +
                           std::to_string(m.gate_depth[s]));
      }
    }
  }
  return problems;
}

}  // namespace gnncirc
