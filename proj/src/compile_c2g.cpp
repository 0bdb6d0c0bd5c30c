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

#include "gnncirc/compile_c2g.hpp"

#include <algorithm>
#include <map>

#include "gnncirc/activation.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/normal_form.hpp"

namespace gnncirc {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Plain:
      return "plain";
    case Regime::GatesInFamilies:
      return "gates";
    case Regime::ActivationLayers:
      return "actlayers";
  }
  return "plain";
}

Regime parse_regime(std::string_view name) {
  if (name == "plain") return Regime::Plain;
  if (name == "gates") return Regime::GatesInFamilies;
  if (name == "actlayers") return Regime::ActivationLayers;
  throw ParseError("unknown regime '" + std::string(name) + "'");
}

namespace {

// Preimages spread over the open unit interval; their images become the
// new gate numbers.
Rational renumber_preimage(std::size_t index, std::size_t count) {
  return Rational(static_cast<long>(index + 1), static_cast<long>(count + 1));
}

Rational forward_exactly(const ActivationFn& fn, const Rational& q) {
  if (fn.exact_capable) return fn.forward_exact(q);
  return rational_from_double(fn.forward_float(q.get_d()));
}

}  // namespace

C2gPlan::C2gPlan(const Circuit& source, Regime regime) : regime_(regime) {
  require_valid(source, "compile_circuit_to_gnn");
  normalized_ = to_path_length_normal_form(source);
  measure_ = measure(normalized_);
  if (measure_.depth == 0) {
    throw Error("compile_circuit_to_gnn: circuit has depth 0");
  }
  auto succ = normalized_.successors();
  successor_.assign(normalized_.size(), 0);
  for (GateId g = 0; g < normalized_.size(); ++g) {
    const Gate& gate = normalized_.gate(g);
    if (gate.op() == GateOp::Input || gate.op() == GateOp::Output) continue;
    successor_[g] = succ[g].at(0);
  }

  bool has_activation = false;
  for (const auto& gate : normalized_.gates()) {
    if (const auto* act = std::get_if<ActivationGate>(&gate.kind)) {
      find_activation(act->name);
      has_activation = true;
    }
  }
  if (regime == Regime::Plain && has_activation) {
    throw Error("regime plain: circuit contains activation gates");
  }
  if (regime == Regime::ActivationLayers && !is_function_layer_form(normalized_)) {
    throw Error("regime actlayers: circuit is not in function-layer form");
  }

  GateNumbering current = number_gates(normalized_);
  const std::size_t depth = measure_.depth;
  for (std::size_t i = 1; i <= depth; ++i) {
    C2gLayer layer;
    layer.numbering = current;
    for (GateId g = 0; g < normalized_.size(); ++g) {
      if (normalized_.gate(g).is_source()) continue;
      if (measure_.gate_depth[g] == i) layer.stratum.push_back(g);
      if (measure_.gate_depth[g] >= i) layer.domain.push_back(current.at(g));
    }
    std::sort(layer.domain.begin(), layer.domain.end());

    const auto* act =
        std::get_if<ActivationGate>(&normalized_.gate(layer.stratum.at(0)).kind);
    if (regime == Regime::ActivationLayers && act) {
      const ActivationFn& fn = find_activation(act->name);
      layer.activation = fn.name;
      std::vector<std::pair<Rational, GateId>> pending;
      for (GateId g = 0; g < normalized_.size(); ++g) {
        if (!normalized_.gate(g).is_source() && measure_.gate_depth[g] > i) {
          pending.emplace_back(current.at(g), g);
        }
      }
      std::sort(pending.begin(), pending.end());
      bool renumber = !fn.exact_capable;
      for (const auto& [num, g] : pending) {
        if (!fn.invertible_at(num.get_d())) renumber = true;
      }
      layer.renumbered = renumber;
      std::optional<Rational> previous;
      for (std::size_t k = 0; k < pending.size(); ++k) {
        const auto& [num, g] = pending[k];
        if (!renumber) {
          layer.preimages.emplace_back(num, Scalar(fn.inverse_exact(num)));
          continue;
        }
        Rational q = renumber_preimage(k, pending.size());
        Rational image = forward_exactly(fn, q);
        if (sgn(image) == 0 || (previous && image <= *previous)) {
          throw Error("activation '" + fn.name +
                      "' does not separate the renumbered gates");
        }
        previous = image;
        layer.preimages.emplace_back(num, Scalar(q));
        current[g] = image;
      }
    }
    layers_.push_back(std::move(layer));
  }
  final_numbering_ = current;
}

const Rational& C2gPlan::number_after(GateId g, std::size_t layer) const {
  if (layer < layers_.size()) return layers_[layer].numbering.at(g);
  return final_numbering_.at(g);
}

bool C2gPlan::live(GateId g, std::size_t layer) const {
  return layer <= measure_.gate_depth.at(g);
}

CircuitGraph C2gPlan::graph_for(std::span<const VecK> inputs) const {
  return circuit_to_labeled_graph(normalized_, initial_numbering(), inputs);
}

namespace {

struct FamilySpec {
  unsigned dim;
  FiniteDomain domain;
  // Stratum grouped by gate type label.
  std::map<std::string, std::vector<GateId>> groups;
  GateNumbering numbering;
  std::map<GateId, GateId> successor;
  std::vector<std::pair<Rational, Scalar>> preimages;
  bool pass_through;
  const Circuit* circuit;
};

Circuit build_layer_circuit(const FamilySpec& spec, std::size_t arity) {
  CircuitBuilder b(spec.dim);
  GateId own = b.input();
  std::vector<GateId> tail;
  for (std::size_t i = 1; i < arity; ++i) tail.push_back(b.input());
  std::optional<GateId> sum_tail, prod_tail;
  auto sum = [&] {
    if (!sum_tail) sum_tail = tail.empty() ? b.constant(Rational(0)) : b.add(tail);
    return *sum_tail;
  };
  auto prod = [&] {
    if (!prod_tail) prod_tail = tail.empty() ? b.constant(Rational(1)) : b.mul(tail);
    return *prod_tail;
  };
  ChiBank bank(b, own, spec.domain);
  auto table = [&](const std::vector<GateId>& gates, auto value) {
    std::vector<std::pair<Rational, Scalar>> entries;
    for (GateId g : gates) entries.emplace_back(spec.numbering.at(g), value(g));
    return bank.weighted_sum(entries);
  };
  auto one = [](GateId) { return Scalar(Rational(1)); };
  auto minus_successor = [&](GateId g) {
    return Scalar(Rational(-spec.numbering.at(spec.successor.at(g))));
  };

  std::vector<GateId> terms;
  std::vector<GateId> all_members;
  for (const auto& [label, gates] : spec.groups) {
    all_members.insert(all_members.end(), gates.begin(), gates.end());
    const Gate& sample = spec.circuit->gate(gates.front());
    // sum of the tail minus the successor's number, for members
    auto shifted = [&] { return b.add({b.mul({table(gates, one), sum()}),
                                       table(gates, minus_successor)}); };
    switch (sample.op()) {
      case GateOp::Add:
        terms.push_back(shifted());
        break;
      case GateOp::Mul:
        terms.push_back(b.mul({table(gates,
                                     [&](GateId g) {
                                       return Scalar(Rational(
                                           1 / spec.numbering.at(
                                                   spec.successor.at(g))));
                                     }),
                               prod()}));
        break;
      case GateOp::Output:
        terms.push_back(b.mul({table(gates, one), sum()}));
        break;
      case GateOp::Proj: {
        const auto& p = std::get<ProjGate>(sample.kind);
        terms.push_back(b.proj(p.from, p.to, shifted()));
        break;
      }
      case GateOp::Activation: {
        const auto& name = std::get<ActivationGate>(sample.kind).name;
        if (spec.pass_through) {
          GateId arg = b.add({sum(), table(gates, minus_successor)});
          terms.push_back(b.mul({table(gates, one), b.activation(name, arg)}));
        } else {
          terms.push_back(shifted());
        }
        break;
      }
      default:
        throw Error("unexpected gate in a layer stratum");
    }
  }
  if (spec.pass_through) {
    GateId keep = b.add({b.constant(Rational(1)),
                         table(all_members, [](GateId) {
                           return Scalar(Rational(-1));
                         })});
    terms.push_back(b.mul({keep, own}));
  }
  if (!spec.preimages.empty()) terms.push_back(bank.weighted_sum(spec.preimages));
  b.output(b.add(terms));
  return std::move(b).build();
}

CircuitFamily make_family(const C2gPlan& plan, std::size_t i,
                          bool pass_through) {
  const C2gLayer& layer = plan.layer(i);
  auto spec = std::make_shared<FamilySpec>(FamilySpec{
      plan.normalized().dim(), FiniteDomain(layer.domain), {}, layer.numbering,
      {}, pass_through ? std::vector<std::pair<Rational, Scalar>>{}
                       : layer.preimages,
      pass_through, nullptr});
  // The plan may be moved; keep a private copy of the circuit.
  auto circuit = std::make_shared<Circuit>(plan.normalized());
  spec->circuit = circuit.get();
  std::set<std::string> acts;
  for (GateId g : layer.stratum) {
    const Gate& gate = circuit->gate(g);
    spec->groups[kind_label(gate.kind)].push_back(g);
    if (gate.op() != GateOp::Output) spec->successor[g] = plan.successor(g);
    if (const auto* a = std::get_if<ActivationGate>(&gate.kind)) {
      if (pass_through) acts.insert(a->name);
    }
  }
  auto gen = [spec, circuit](std::size_t arity) {
    return build_layer_circuit(*spec, arity);
  };
  const std::size_t base_size = build_layer_circuit(*spec, 1).size();
  return CircuitFamily(
      "c2g-layer-" + std::to_string(i), spec->dim, gen,
      [base_size](std::size_t arity) { return base_size + arity + 2; },
      [](std::size_t) { return std::size_t{10}; }, acts);
}

}  // namespace

CircuitFamily build_layer_family_plain(const C2gPlan& plan, std::size_t layer) {
  if (plan.regime() == Regime::ActivationLayers) {
    throw Error("build_layer_family_plain: regime actlayers");
  }
  if (plan.regime() == Regime::Plain) {
    for (GateId g : plan.layer(layer).stratum) {
      if (plan.normalized().gate(g).op() == GateOp::Activation) {
        throw Error("regime plain: stratum " + std::to_string(layer) +
                    " contains an activation gate");
      }
    }
  }
  return make_family(plan, layer, true);
}

CGnnLayer build_layer_family_actlayer(const C2gPlan& plan, std::size_t layer) {
  if (plan.regime() != Regime::ActivationLayers) {
    throw Error("build_layer_family_actlayer: regime is not actlayers");
  }
  const C2gLayer& tables = plan.layer(layer);
  if (tables.activation == "id") {
    return CGnnLayer{make_family(plan, layer, true), "id"};
  }
  return CGnnLayer{make_family(plan, layer, false), tables.activation};
}

C2gCompilation compile_circuit_to_gnn(const Circuit& c, Regime regime) {
  C2gPlan plan(c, regime);
  std::vector<CGnnLayer> layers;
  for (std::size_t i = 1; i <= plan.depth(); ++i) {
    if (regime == Regime::ActivationLayers) {
      layers.push_back(build_layer_family_actlayer(plan, i));
    } else {
      layers.push_back(CGnnLayer{build_layer_family_plain(plan, i), "id"});
    }
  }
  CGnn gnn(plan.normalized().dim(), std::move(layers));
  return C2gCompilation{std::move(gnn), std::move(plan)};
}

}  // namespace gnncirc
