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

#include "gnncirc/convert.hpp"

#include "gnncirc/errors.hpp"

namespace gnncirc {

Circuit rk_to_r(const Circuit& c) {
  require_valid(c, "rk_to_r");
  const unsigned k = c.dim();
  CircuitBuilder b(1);
  // comp[g][j]: scalar gate carrying component j of gate g.
  std::vector<std::vector<GateId>> comp(c.size());
  for (GateId g : c.topological_order()) {
    const Gate& gate = c.gate(g);
    auto& out = comp[g];
    out.resize(k);
    auto column = [&](unsigned j) {
      std::vector<GateId> preds;
      preds.reserve(gate.preds.size());
      for (GateId p : gate.preds) preds.push_back(comp[p][j]);
      return preds;
    };
    switch (gate.op()) {
      case GateOp::Input: {
        auto ord = std::get<InputGate>(gate.kind).ordinal;
        for (unsigned j = 0; j < k; ++j) out[j] = b.input(ord * k + j);
        break;
      }
      case GateOp::Output: {
        auto ord = std::get<OutputGate>(gate.kind).ordinal;
        for (unsigned j = 0; j < k; ++j) {
          out[j] = b.output(comp[gate.preds[0]][j], ord * k + j);
        }
        break;
      }
      case GateOp::Const: {
        const auto& v = std::get<ConstGate>(gate.kind).value;
        for (unsigned j = 0; j < k; ++j) out[j] = b.constant(VecK({v[j]}));
        break;
      }
      case GateOp::Proj: {
        const auto& p = std::get<ProjGate>(gate.kind);
        for (unsigned j = 0; j < k; ++j) {
          out[j] = j + 1 == p.to ? b.add({comp[gate.preds[0]][p.from - 1]})
                                 : b.constant(Rational(0));
        }
        break;
      }
      case GateOp::Add:
        for (unsigned j = 0; j < k; ++j) out[j] = b.add(column(j));
        break;
      case GateOp::Mul:
        for (unsigned j = 0; j < k; ++j) out[j] = b.mul(column(j));
        break;
      case GateOp::Activation: {
        const auto& name = std::get<ActivationGate>(gate.kind).name;
        for (unsigned j = 0; j < k; ++j) {
          out[j] = b.activation(name, comp[gate.preds[0]][j]);
        }
        break;
      }
    }
  }
  return std::move(b).build();
}

Circuit r_to_rk(const Circuit& c, unsigned k) {
  require_valid(c, "r_to_rk");
  if (c.dim() != 1) throw Error("r_to_rk: source circuit must be scalar");
  if (k == 0) throw Error("r_to_rk: k must be at least 1");
  const std::size_t n_in = c.inputs().size();
  const std::size_t n_out = c.outputs().size();
  if (n_in % k != 0 || n_out % k != 0) {
    throw Error("r_to_rk: input/output counts " + std::to_string(n_in) + "/" +
                std::to_string(n_out) + " are not divisible by " +
                std::to_string(k));
  }
  if (k == 1) return c;

  CircuitBuilder b(k);
  std::vector<GateId> packed_inputs;
  for (std::size_t a = 0; a < n_in / k; ++a) packed_inputs.push_back(b.input(a));

  std::vector<GateId> map(c.size());
  // output ordinal -> wire feeding it
  std::vector<GateId> out_wire(n_out);
  for (GateId g : c.topological_order()) {
    const Gate& gate = c.gate(g);
    std::vector<GateId> preds;
    for (GateId p : gate.preds) preds.push_back(map[p]);
    switch (gate.op()) {
      case GateOp::Input: {
        auto ord = std::get<InputGate>(gate.kind).ordinal;
        map[g] = b.proj(static_cast<unsigned>(ord % k) + 1, 1,
                        packed_inputs[ord / k]);
        break;
      }
      case GateOp::Output:
        out_wire[std::get<OutputGate>(gate.kind).ordinal] = preds[0];
        break;
      case GateOp::Const: {
        std::vector<Scalar> v(k, Scalar::zero(Backend::Exact));
        const Scalar& s = std::get<ConstGate>(gate.kind).value[0];
        if (!s.is_exact()) {
          for (auto& x : v) x = Scalar(0.0);
        }
        v[0] = s;
        map[g] = b.constant(VecK(std::move(v)));
        break;
      }
      case GateOp::Proj:
        map[g] = b.proj(1, 1, preds[0]);
        break;
      case GateOp::Add:
        map[g] = b.add(preds);
        break;
      case GateOp::Mul:
        map[g] = b.mul(preds);
        break;
      case GateOp::Activation:
        map[g] = b.activation(std::get<ActivationGate>(gate.kind).name, preds[0]);
        break;
    }
  }
  for (std::size_t o = 0; o < n_out / k; ++o) {
    std::vector<GateId> parts;
    for (unsigned j = 0; j < k; ++j) {
      parts.push_back(b.proj(1, j + 1, out_wire[o * k + j]));
    }
    b.output(b.add(parts), o);
  }
  return std::move(b).build();
}

std::vector<VecK> flatten(std::span<const VecK> xs) {
  std::vector<VecK> out;
  for (const auto& x : xs) {
    for (const auto& s : x.components()) out.push_back(VecK({s}));
  }
  return out;
}

std::vector<VecK> pack(std::span<const VecK> scalars, unsigned k) {
  if (k == 0 || scalars.size() % k != 0) {
    throw Error("pack: scalar count not divisible by k");
  }
  std::vector<VecK> out;
  for (std::size_t i = 0; i < scalars.size(); i += k) {
    std::vector<Scalar> comp;
    for (unsigned j = 0; j < k; ++j) comp.push_back(scalars[i + j][0]);
    out.emplace_back(std::move(comp));
  }
  return out;
}

}  // namespace gnncirc
