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

#include "gnncirc/eval.hpp"

#include "gnncirc/activation.hpp"
#include "gnncirc/errors.hpp"

namespace gnncirc {

namespace {

Rational to_num(const Scalar& s, const Rational*) {
  if (!s.is_exact()) {
    throw Error("float constant " + s.str() + " on the exact backend");
  }
  return s.exact();
}

double to_num(const Scalar& s, const double*) { return s.to_double(); }

Scalar from_num(const Rational& r) { return Scalar(r); }
Scalar from_num(double d) { return Scalar(d); }

Rational apply(const ActivationFn& fn, const Rational& x, bool lift) {
  if (fn.exact_capable) return fn.forward_exact(x);
  if (!lift) {
    throw Error("activation '" + fn.name +
                "' has no exact form; use the float backend");
  }
  return rational_from_double(fn.forward_float(x.get_d()));
}

double apply(const ActivationFn& fn, double x, bool) {
  return fn.forward_float(x);
}

template <class Num>
std::vector<Num> run(const Circuit& c, std::span<const VecK> inputs,
                     bool lift) {
  const std::size_t k = c.dim();
  std::vector<Num> vals(c.size() * k);
  const Num* tag = nullptr;
  for (GateId g : c.topological_order()) {
    const Gate& gate = c.gate(g);
    Num* out = &vals[g * k];
    switch (gate.op()) {
      case GateOp::Input: {
        const VecK& x = inputs[std::get<InputGate>(gate.kind).ordinal];
        for (std::size_t j = 0; j < k; ++j) out[j] = to_num(x[j], tag);
        break;
      }
      case GateOp::Const: {
        const VecK& v = std::get<ConstGate>(gate.kind).value;
        for (std::size_t j = 0; j < k; ++j) out[j] = to_num(v[j], tag);
        break;
      }
      case GateOp::Output: {
        const Num* in = &vals[gate.preds[0] * k];
        for (std::size_t j = 0; j < k; ++j) out[j] = in[j];
        break;
      }
      case GateOp::Proj: {
        const auto& p = std::get<ProjGate>(gate.kind);
        const Num* in = &vals[gate.preds[0] * k];
        for (std::size_t j = 0; j < k; ++j) out[j] = 0;
        out[p.to - 1] = in[p.from - 1];
        break;
      }
      case GateOp::Add:
      case GateOp::Mul: {
        const bool is_add = gate.op() == GateOp::Add;
        const Num* first = &vals[gate.preds[0] * k];
        for (std::size_t j = 0; j < k; ++j) out[j] = first[j];
        for (std::size_t i = 1; i < gate.preds.size(); ++i) {
          const Num* in = &vals[gate.preds[i] * k];
          if (is_add) {
            for (std::size_t j = 0; j < k; ++j) out[j] += in[j];
          } else {
            for (std::size_t j = 0; j < k; ++j) out[j] *= in[j];
          }
        }
        break;
      }
      case GateOp::Activation: {
        const auto& fn =
            find_activation(std::get<ActivationGate>(gate.kind).name);
        const Num* in = &vals[gate.preds[0] * k];
        for (std::size_t j = 0; j < k; ++j) out[j] = apply(fn, in[j], lift);
        break;
      }
    }
  }
  return vals;
}

Backend check_inputs(const Circuit& c, std::span<const VecK> inputs,
                     const EvalOptions& options) {
  require_valid(c, "eval_circuit");
  if (inputs.size() != c.inputs().size()) {
    throw Error("eval_circuit: expected " + std::to_string(c.inputs().size()) +
                " inputs, got " + std::to_string(inputs.size()));
  }
  Backend b = options.backend.value_or(
      inputs.empty() ? Backend::Exact : inputs.front().backend());
  for (const auto& x : inputs) {
    if (x.dim() != c.dim()) {
      throw Error("eval_circuit: input of dimension " +
                  std::to_string(x.dim()) + " for a circuit of dimension " +
                  std::to_string(c.dim()));
    }
    if (x.backend() != inputs.front().backend()) {
      throw Error("eval_circuit: inputs mix exact and float backends");
    }
    if (b == Backend::Exact && x.backend() == Backend::Float) {
      throw Error("eval_circuit: float inputs on the exact backend");
    }
  }
  return b;
}

template <class Num>
std::vector<VecK> collect(const Circuit& c, const std::vector<Num>& vals,
                          const std::vector<GateId>& gates) {
  const std::size_t k = c.dim();
  std::vector<VecK> out;
  out.reserve(gates.size());
  for (GateId g : gates) {
    std::vector<Scalar> comp;
    comp.reserve(k);
    for (std::size_t j = 0; j < k; ++j) comp.push_back(from_num(vals[g * k + j]));
    out.emplace_back(std::move(comp));
  }
  return out;
}

std::vector<VecK> evaluate(const Circuit& c, std::span<const VecK> inputs,
                           const EvalOptions& options, bool all_gates) {
  Backend b = check_inputs(c, inputs, options);
  std::vector<GateId> which;
  if (all_gates) {
    which.resize(c.size());
    for (GateId g = 0; g < c.size(); ++g) which[g] = g;
  }
  const auto& gates = all_gates ? which : c.outputs();
  if (b == Backend::Exact) {
    return collect(c, run<Rational>(c, inputs, options.lift_float_activations),
                   gates);
  }
  std::vector<VecK> float_inputs;
  float_inputs.reserve(inputs.size());
  for (const auto& x : inputs) float_inputs.push_back(x.to_backend(b));
  return collect(c, run<double>(c, float_inputs, false), gates);
}

}  // namespace

std::vector<VecK> eval_circuit(const Circuit& c, std::span<const VecK> inputs,
                               const EvalOptions& options) {
  return evaluate(c, inputs, options, false);
}

std::vector<VecK> eval_all_gates(const Circuit& c,
                                 std::span<const VecK> inputs,
                                 const EvalOptions& options) {
  return evaluate(c, inputs, options, true);
}

}  // namespace gnncirc
