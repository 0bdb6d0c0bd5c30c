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

#include "gnncirc/compile_g2c.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gnncirc/activation.hpp"
#include "gnncirc/errors.hpp"

namespace gnncirc {

namespace {

void check_index(std::size_t n, std::size_t i) {
  if (i < 1 || i > n) {
    throw Error("vertex index " + std::to_string(i) + " out of range 1.." +
                std::to_string(n));
  }
}

struct EncodingPorts {
  std::vector<std::vector<GateId>> adjacency;  // [i][j]
  std::vector<GateId> features;
};

EncodingPorts encoding_inputs(CircuitBuilder& b, std::size_t n) {
  EncodingPorts ports;
  ports.adjacency.assign(n, std::vector<GateId>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ports.adjacency[i][j] = b.input();
  }
  for (std::size_t j = 0; j < n; ++j) ports.features.push_back(b.input());
  return ports;
}

// Longest path added between the layer inputs and the pre-activation
// output, excluding the layer family itself.
constexpr std::size_t kLayerOverhead = 11;
// Layers are padded to the family depth over arities up to at least this,
// so the depth of K_n does not depend on n for small n.
constexpr std::size_t kDepthProbeArity = 8;

}  // namespace

std::vector<GateId> emit_neighbor_mask(CircuitBuilder& b,
                                       std::span<const GateId> row,
                                       std::span<const GateId> features) {
  std::vector<GateId> masked;
  masked.reserve(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    masked.push_back(b.mul({row[j], features[j]}));
  }
  return masked;
}

GateId emit_degree(CircuitBuilder& b, std::span<const GateId> row) {
  return b.add(row);
}

std::vector<GateId> emit_compaction(CircuitBuilder& b,
                                    std::span<const GateId> masked,
                                    std::span<const GateId> flags) {
  const std::size_t n = masked.size();
  const long ln = static_cast<long>(n);
  // key_p = n + p - n * flag_p, so key_p - key_q =
  // (p - q) + n * flag_q - n * flag_p.
  std::vector<GateId> plus_nf, minus_nf;
  if (n > 1) {
    for (std::size_t q = 0; q < n; ++q) {
      plus_nf.push_back(b.mul({b.constant(Rational(ln)), flags[q]}));
      minus_nf.push_back(b.mul({b.constant(Rational(-ln)), flags[q]}));
    }
  }
  std::vector<GateId> rank(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<GateId> wins;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      GateId offset =
          b.constant(Rational(static_cast<long>(p) - static_cast<long>(q)));
      GateId diff = b.add({offset, plus_nf[q], minus_nf[p]});
      wins.push_back(emit_sign_like(b, diff, 2 * n));
    }
    rank[p] = wins.empty() ? b.constant(Rational(0)) : b.add(wins);
  }
  const FiniteDomain positions = FiniteDomain::integers(0, ln - 1);
  std::vector<std::vector<GateId>> placed(n);  // [slot][p]
  for (std::size_t p = 0; p < n; ++p) {
    ChiBank bank(b, rank[p], positions);
    for (std::size_t s = 0; s < n; ++s) {
      placed[s].push_back(
          b.mul({bank.chi(Rational(static_cast<long>(s))), masked[p]}));
    }
  }
  std::vector<GateId> slots;
  for (std::size_t s = 0; s < n; ++s) slots.push_back(b.add(placed[s]));
  return slots;
}

Fragment build_neighbor_mask(std::size_t n, std::size_t i, unsigned k) {
  check_index(n, i);
  CircuitBuilder b(k);
  EncodingPorts ports = encoding_inputs(b, n);
  for (GateId w : emit_neighbor_mask(b, ports.adjacency[i - 1], ports.features)) {
    b.output(w);
  }
  return Fragment{std::move(b).build()};
}

Fragment build_degree(std::size_t n, std::size_t i, unsigned k) {
  check_index(n, i);
  CircuitBuilder b(k);
  EncodingPorts ports = encoding_inputs(b, n);
  b.output(emit_degree(b, ports.adjacency[i - 1]));
  return Fragment{std::move(b).build()};
}

Fragment build_compaction(std::size_t n, unsigned k) {
  if (n == 0) throw Error("build_compaction: n must be at least 1");
  CircuitBuilder b(k);
  std::vector<GateId> masked, flags;
  for (std::size_t j = 0; j < n; ++j) masked.push_back(b.input());
  for (std::size_t j = 0; j < n; ++j) flags.push_back(b.input());
  for (GateId w : emit_compaction(b, masked, flags)) b.output(w);
  return Fragment{std::move(b).build()};
}

Circuit build_gnn_circuit(const CGnn& net, std::size_t n) {
  if (n == 0) throw Error("K_n needs n >= 1");
  CircuitBuilder b(net.dim());
  EncodingPorts ports = encoding_inputs(b, n);
  const FiniteDomain degrees = FiniteDomain::integers(0, static_cast<long>(n) - 1);
  std::vector<GateId> features = ports.features;
  std::size_t base = 0;
  for (const auto& layer : net.layers()) {
    std::size_t family_depth = 0;
    for (std::size_t j = 1; j <= std::max(n, kDepthProbeArity); ++j) {
      family_depth = std::max(family_depth, layer.family.depth_bound(j));
    }
    const std::size_t target = base + kLayerOverhead + family_depth;
    const ActivationFn& act = find_activation(layer.activation);
    std::vector<GateId> next;
    for (std::size_t v = 0; v < n; ++v) {
      const auto& row = ports.adjacency[v];
      GateId degree = emit_degree(b, row);
      auto masked = emit_neighbor_mask(b, row, features);
      auto slots = emit_compaction(b, masked, row);
      ChiBank select(b, degree, degrees);
      std::vector<GateId> terms;
      for (std::size_t j = 1; j <= n; ++j) {
        std::vector<GateId> args{features[v]};
        args.insert(args.end(), slots.begin(),
                    slots.begin() + static_cast<std::ptrdiff_t>(j - 1));
        GateId branch = splice(b, layer.family.circuit(j), args)[0];
        GateId indicator = select.chi(Rational(static_cast<long>(j - 1)));
        terms.push_back(b.mul({indicator, branch}));
      }
      GateId out = b.pad_to_depth(b.add(terms), target);
      if (!act.is_identity()) out = b.activation(act.name, out);
      next.push_back(out);
    }
    features = std::move(next);
    base = target + (act.is_identity() ? 0 : 1);
  }
  for (GateId f : features) b.output(f);
  return std::move(b).build();
}

struct G2cPlan::Cache {
  std::mutex mutex;
  std::map<std::size_t, std::unique_ptr<const Circuit>> circuits;
};

G2cPlan::G2cPlan(CGnn source)
    : source_(std::move(source)), cache_(std::make_shared<Cache>()) {}

const Circuit& G2cPlan::circuit(std::size_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->circuits.find(n);
  if (it != cache_->circuits.end()) return *it->second;
  auto c = std::make_unique<const Circuit>(build_gnn_circuit(source_, n));
  const Circuit& ref = *c;
  cache_->circuits.emplace(n, std::move(c));
  return ref;
}

G2cResources G2cPlan::resources(std::size_t n) const {
  Measure m = measure(circuit(n));
  return G2cResources{n, m.size, m.depth};
}

G2cPlan compile_gnn_to_circuit_family(const CGnn& net,
                                      const G2cOptions& options) {
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const auto& layer = net.layers()[i];
    for (const auto& name : layer.family.activations()) find_activation(name);
    for (std::size_t a = 3; a <= options.symmetry_max_arity; ++a) {
      auto verdict = check_tail_symmetric(layer.family, a, options.symmetry_trials,
                                          options.seed + 1000 * i + a);
      if (verdict.counterexample_found) {
        throw Error("layer " + std::to_string(i + 1) + " family '" +
                    layer.family.name() + "' is not tail-symmetric at arity " +
                    std::to_string(a) + ": " + verdict.str());
      }
    }
  }
  return G2cPlan(net);
}

}  // namespace gnncirc
