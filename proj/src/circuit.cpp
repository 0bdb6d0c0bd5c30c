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

#include "gnncirc/circuit.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "gnncirc/errors.hpp"

namespace gnncirc {

GateOp op_of(const GateKind& kind) {
  return static_cast<GateOp>(kind.index());
}

std::string kind_label(const GateKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, InputGate>) {
          return "INPUT";
        } else if constexpr (std::is_same_v<T, OutputGate>) {
          return "OUTPUT";
        } else if constexpr (std::is_same_v<T, ConstGate>) {
          return "CONST";
        } else if constexpr (std::is_same_v<T, ProjGate>) {
          return "PROJ:" + std::to_string(k.from) + "," + std::to_string(k.to);
        } else if constexpr (std::is_same_v<T, AddGate>) {
          return "ADD";
        } else if constexpr (std::is_same_v<T, MulGate>) {
          return "MUL";
        } else {
          return "ACT:" + k.name;
        }
      },
      kind);
}

std::vector<std::vector<GateId>> Circuit::successors() const {
  std::vector<std::vector<GateId>> succ(gates_.size());
  for (GateId g = 0; g < gates_.size(); ++g) {
    for (GateId p : gates_[g].preds) {
      if (p < gates_.size()) succ[p].push_back(g);
    }
  }
  return succ;
}

CircuitBuilder::CircuitBuilder(unsigned dim) : dim_(dim) {
  if (dim == 0) throw Error("circuit dimension must be at least 1");
}

GateId CircuitBuilder::push(GateKind kind, std::vector<GateId> preds) {
  GateId id = static_cast<GateId>(gates_.size());
  std::size_t d = 0;
  for (GateId p : preds) {
    if (p < id) d = std::max(d, depth_[p] + 1);
  }
  gates_.push_back(Gate{std::move(kind), std::move(preds)});
  depth_.push_back(d);
  return id;
}

GateId CircuitBuilder::input() { return input(next_input_); }

GateId CircuitBuilder::input(std::size_t ordinal) {
  next_input_ = std::max(next_input_, ordinal + 1);
  return push(InputGate{ordinal}, {});
}

GateId CircuitBuilder::output(GateId pred) { return output(pred, next_output_); }

GateId CircuitBuilder::output(GateId pred, std::size_t ordinal) {
  next_output_ = std::max(next_output_, ordinal + 1);
  return push(OutputGate{ordinal}, {pred});
}

GateId CircuitBuilder::constant(VecK value) {
  return push(ConstGate{std::move(value)}, {});
}

GateId CircuitBuilder::constant(const Scalar& c) {
  return constant(VecK::broadcast(c, dim_));
}

GateId CircuitBuilder::proj(unsigned from, unsigned to, GateId pred) {
  return push(ProjGate{from, to}, {pred});
}

GateId CircuitBuilder::add(std::span<const GateId> preds) {
  return push(AddGate{}, std::vector<GateId>(preds.begin(), preds.end()));
}

GateId CircuitBuilder::mul(std::span<const GateId> preds) {
  return push(MulGate{}, std::vector<GateId>(preds.begin(), preds.end()));
}

GateId CircuitBuilder::activation(std::string name, GateId pred) {
  return push(ActivationGate{std::move(name)}, {pred});
}

GateId CircuitBuilder::pad_to_depth(GateId wire, std::size_t target) {
  if (depth(wire) > target) {
    throw Error("wire depth " + std::to_string(depth(wire)) +
                " exceeds padding target " + std::to_string(target));
  }
  while (depth(wire) < target) wire = add({wire});
  return wire;
}

GateId CircuitBuilder::raw(GateKind kind, std::vector<GateId> preds) {
  if (const auto* in = std::get_if<InputGate>(&kind)) {
    next_input_ = std::max(next_input_, in->ordinal + 1);
  } else if (const auto* out = std::get_if<OutputGate>(&kind)) {
    next_output_ = std::max(next_output_, out->ordinal + 1);
  }
  return push(std::move(kind), std::move(preds));
}

Circuit CircuitBuilder::build() && {
  Circuit c;
  c.dim_ = dim_;
  c.gates_ = std::move(gates_);
  const std::size_t n = c.gates_.size();

  std::vector<std::pair<std::size_t, GateId>> ins, outs;
  for (GateId g = 0; g < n; ++g) {
    if (const auto* in = std::get_if<InputGate>(&c.gates_[g].kind)) {
      ins.emplace_back(in->ordinal, g);
    } else if (const auto* out = std::get_if<OutputGate>(&c.gates_[g].kind)) {
      outs.emplace_back(out->ordinal, g);
    }
  }
  std::sort(ins.begin(), ins.end());
  std::sort(outs.begin(), outs.end());
  for (auto& [o, g] : ins) c.inputs_.push_back(g);
  for (auto& [o, g] : outs) c.outputs_.push_back(g);

  // Kahn's algorithm; dangling predecessor references are ignored here and
  // reported by validation.
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<GateId>> succ(n);
  for (GateId g = 0; g < n; ++g) {
    for (GateId p : c.gates_[g].preds) {
      if (p < n) {
        ++indeg[g];
        succ[p].push_back(g);
      }
    }
  }
  std::priority_queue<GateId, std::vector<GateId>, std::greater<>> ready;
  for (GateId g = 0; g < n; ++g) {
    if (indeg[g] == 0) ready.push(g);
  }
  c.topo_.reserve(n);
  while (!ready.empty()) {
    GateId g = ready.top();
    ready.pop();
    c.topo_.push_back(g);
    for (GateId s : succ[g]) {
      if (--indeg[s] == 0) ready.push(s);
    }
  }
  c.acyclic_ = c.topo_.size() == n;
  if (!c.acyclic_) c.topo_.clear();
  c.valid_ = validate_circuit(c).ok();
  return c;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Cycle:
      return "cycle";
    case ViolationKind::Arity:
      return "arity";
    case ViolationKind::Ordinal:
      return "ordinal";
    case ViolationKind::Dim:
      return "dim";
    case ViolationKind::MultiEdge:
      return "multi-edge";
    case ViolationKind::Dangling:
      return "dangling";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::str() const {
  std::ostringstream out;
  if (ok()) out << "ok\n";
  for (const auto& v : violations) {
    out << "violation " << to_string(v.kind) << " g" << v.gate << ": "
        << v.message << "\n";
  }
  for (const auto& n : notes) out << "note " << n << "\n";
  return out.str();
}

namespace {

void check_ordinals(const Circuit& c, GateOp op, const char* what,
                    ValidationReport& report) {
  std::map<std::size_t, GateId> seen;
  for (GateId g = 0; g < c.size(); ++g) {
    const auto& kind = c.gate(g).kind;
    if (op_of(kind) != op) continue;
    std::size_t ord = op == GateOp::Input ? std::get<InputGate>(kind).ordinal
                                          : std::get<OutputGate>(kind).ordinal;
    if (!seen.emplace(ord, g).second) {
      report.violations.push_back(
          {ViolationKind::Ordinal, g,
           std::string("duplicate ") + what + " ordinal " +
               std::to_string(ord + 1)});
    }
  }
  std::size_t expected = 0;
  for (const auto& [ord, g] : seen) {
    if (ord != expected) {
      report.violations.push_back(
          {ViolationKind::Ordinal, g,
           std::string("missing ") + what + " ordinal " +
               std::to_string(expected + 1)});
      break;
    }
    ++expected;
  }
}

}  // namespace

ValidationReport validate_circuit(const Circuit& c) {
  ValidationReport report;
  const std::size_t n = c.size();
  std::vector<std::size_t> outdeg(n, 0);

  for (GateId g = 0; g < n; ++g) {
    const Gate& gate = c.gate(g);
    std::set<GateId> distinct;
    for (GateId p : gate.preds) {
      if (p >= n) {
        report.violations.push_back({ViolationKind::Dangling, g,
                                     "predecessor g" + std::to_string(p) +
                                         " does not exist"});
        continue;
      }
      if (!distinct.insert(p).second) {
        report.violations.push_back({ViolationKind::MultiEdge, g,
                                     "repeated wire from g" + std::to_string(p)});
      }
      ++outdeg[p];
    }
    const std::size_t indeg = gate.preds.size();
    switch (gate.op()) {
      case GateOp::Input:
      case GateOp::Const:
        if (indeg != 0) {
          report.violations.push_back(
              {ViolationKind::Arity, g, kind_label(gate.kind) +
                                            " gate must have indegree 0"});
        }
        break;
      case GateOp::Output:
      case GateOp::Proj:
      case GateOp::Activation:
        if (indeg != 1) {
          report.violations.push_back(
              {ViolationKind::Arity, g,
               kind_label(gate.kind) + " gate must have indegree 1, has " +
                   std::to_string(indeg)});
        }
        break;
      case GateOp::Add:
      case GateOp::Mul:
        if (indeg == 0) {
          report.violations.push_back(
              {ViolationKind::Arity, g,
               kind_label(gate.kind) + " gate must have indegree >= 1"});
        }
        break;
    }
    if (const auto* k = std::get_if<ConstGate>(&gate.kind)) {
      if (k->value.dim() != c.dim()) {
        report.violations.push_back(
            {ViolationKind::Dim, g,
             "constant of dimension " + std::to_string(k->value.dim()) +
                 " in a circuit of dimension " + std::to_string(c.dim())});
      }
    }
    if (const auto* k = std::get_if<ProjGate>(&gate.kind)) {
      if (k->from < 1 || k->from > c.dim() || k->to < 1 || k->to > c.dim()) {
        report.violations.push_back(
            {ViolationKind::Dim, g,
             "projection indices out of range 1.." + std::to_string(c.dim())});
      }
    }
  }
  for (GateId g = 0; g < n; ++g) {
    if (c.gate(g).op() == GateOp::Output && outdeg[g] != 0) {
      report.violations.push_back(
          {ViolationKind::Arity, g, "OUTPUT gate must have outdegree 0"});
    }
    if (c.gate(g).op() == GateOp::Input && outdeg[g] > 1) {
      report.notes.push_back("input gate g" + std::to_string(g) +
                             " has fan-out " + std::to_string(outdeg[g]));
    }
  }
  check_ordinals(c, GateOp::Input, "input", report);
  check_ordinals(c, GateOp::Output, "output", report);
  if (!c.acyclic()) {
    report.violations.push_back(
        {ViolationKind::Cycle, 0, "the wire graph contains a cycle"});
  }
  return report;
}

void require_valid(const Circuit& c, std::string_view context) {
  if (c.valid()) return;
  auto report = validate_circuit(c);
  if (!report.ok()) {
    throw Error(std::string(context) + ": invalid circuit\n" + report.str());
  }
}

Measure measure(const Circuit& c) {
  if (!c.valid()) require_valid(c, "measure");
  Measure m;
  m.size = c.size();
  m.gate_depth.assign(c.size(), 0);
  for (GateId g : c.topological_order()) {
    std::size_t d = 0;
    for (GateId p : c.gate(g).preds) d = std::max(d, m.gate_depth[p] + 1);
    m.gate_depth[g] = d;
  }
  if (c.outputs().empty()) {
    for (std::size_t d : m.gate_depth) m.depth = std::max(m.depth, d);
  } else {
    for (GateId o : c.outputs()) m.depth = std::max(m.depth, m.gate_depth[o]);
  }
  return m;
}

}  // namespace gnncirc
