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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gnncirc/scalar.hpp"

namespace gnncirc {

using GateId = std::uint32_t;

struct InputGate {
  std::size_t ordinal;  // 0-based
};
struct OutputGate {
  std::size_t ordinal;  // 0-based
};
struct ConstGate {
  VecK value;
};
// Maps (x_1..x_k) to the vector with x_from at position `to`, 0 elsewhere.
// Component indices are 1-based.
struct ProjGate {
  unsigned from;
  unsigned to;
};
struct AddGate {};
struct MulGate {};
struct ActivationGate {
  std::string name;
};

using GateKind = std::variant<InputGate, OutputGate, ConstGate, ProjGate,
                              AddGate, MulGate, ActivationGate>;

enum class GateOp { Input, Output, Const, Proj, Add, Mul, Activation };

GateOp op_of(const GateKind& kind);
// Stable type label, e.g. "ADD", "PROJ:1,2", "ACT:relu".
std::string kind_label(const GateKind& kind);

struct Gate {
  GateKind kind;
  std::vector<GateId> preds;

  GateOp op() const { return op_of(kind); }
  // Input and Const gates have no predecessors.
  bool is_source() const {
    return op() == GateOp::Input || op() == GateOp::Const;
  }
};

// A DAG of typed gates over R^k. Gate ids are dense indices. The structure
// is not checked on construction; see validate_circuit.
class Circuit {
 public:
  Circuit() = default;

  unsigned dim() const { return dim_; }
  std::size_t size() const { return gates_.size(); }
  const Gate& gate(GateId id) const { return gates_.at(id); }
  const std::vector<Gate>& gates() const { return gates_; }
  // Input/output gates sorted by ordinal.
  const std::vector<GateId>& inputs() const { return inputs_; }
  const std::vector<GateId>& outputs() const { return outputs_; }
  bool acyclic() const { return acyclic_; }
  // validate_circuit(*this).ok(), computed once at construction.
  bool valid() const { return valid_; }
  // Kahn order with ties broken by ascending id; empty when cyclic.
  const std::vector<GateId>& topological_order() const { return topo_; }
  std::vector<std::vector<GateId>> successors() const;

 private:
  friend class CircuitBuilder;
  unsigned dim_ = 1;
  std::vector<Gate> gates_;
  std::vector<GateId> inputs_;
  std::vector<GateId> outputs_;
  std::vector<GateId> topo_;
  bool acyclic_ = true;
  bool valid_ = true;
};

class CircuitBuilder {
 public:
  explicit CircuitBuilder(unsigned dim);

  unsigned dim() const { return dim_; }
  std::size_t size() const { return gates_.size(); }
  const Gate& gate(GateId id) const { return gates_.at(id); }
  // Longest path from a source; valid for gates whose predecessors were
  // added before them.
  std::size_t depth(GateId id) const { return depth_.at(id); }

  // Ordinals default to the number of inputs/outputs added so far.
  GateId input();
  GateId input(std::size_t ordinal);
  GateId output(GateId pred);
  GateId output(GateId pred, std::size_t ordinal);
  GateId constant(VecK value);
  // Broadcast (c,...,c).
  GateId constant(const Scalar& c);
  GateId constant(const Rational& c) { return constant(Scalar(c)); }
  GateId proj(unsigned from, unsigned to, GateId pred);
  GateId add(std::span<const GateId> preds);
  GateId add(std::initializer_list<GateId> preds) {
    return add(std::span<const GateId>(preds.begin(), preds.size()));
  }
  GateId mul(std::span<const GateId> preds);
  GateId mul(std::initializer_list<GateId> preds) {
    return mul(std::span<const GateId>(preds.begin(), preds.size()));
  }
  GateId activation(std::string name, GateId pred);
  // Unary Add chain from `wire` up to exactly `target` depth.
  GateId pad_to_depth(GateId wire, std::size_t target);
  // No structural checks; predecessors may refer forward.
  GateId raw(GateKind kind, std::vector<GateId> preds);

  Circuit build() &&;

 private:
  GateId push(GateKind kind, std::vector<GateId> preds);

  unsigned dim_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> depth_;
  std::size_t next_input_ = 0;
  std::size_t next_output_ = 0;
};

enum class ViolationKind { Cycle, Arity, Ordinal, Dim, MultiEdge, Dangling };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  GateId gate;  // offending gate, or 0 for circuit-wide issues
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Observations that are not violations, e.g. input gates with fan-out.
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string str() const;
};

ValidationReport validate_circuit(const Circuit& c);
// Throws Error listing the violations when c does not validate.
void require_valid(const Circuit& c, std::string_view context);

struct Measure {
  std::size_t size = 0;
  // Longest source-to-output path.
  std::size_t depth = 0;
  // Longest path from a source (Input or Const gate) to each gate.
  std::vector<std::size_t> gate_depth;
};

Measure measure(const Circuit& c);

}  // namespace gnncirc
