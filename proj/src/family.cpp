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

#include "gnncirc/family.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "gnncirc/activation.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/random.hpp"

namespace gnncirc {

struct CircuitFamily::Cache {
  std::mutex mutex;
  std::map<std::size_t, std::unique_ptr<const Circuit>> circuits;
};

CircuitFamily::CircuitFamily(std::string name, unsigned dim,
                             Generator generate, Bound size_bound,
                             Bound depth_bound,
                             std::set<std::string> activations)
    : name_(std::move(name)),
      dim_(dim),
      generate_(std::move(generate)),
      size_bound_(std::move(size_bound)),
      depth_bound_(std::move(depth_bound)),
      activations_(std::move(activations)),
      cache_(std::make_shared<Cache>()) {}

const Circuit& CircuitFamily::circuit(std::size_t arity) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->circuits.find(arity);
  if (it != cache_->circuits.end()) return *it->second;

  const std::string where =
      "family '" + name_ + "' at arity " + std::to_string(arity);
  auto c = std::make_unique<const Circuit>(generate_(arity));
  require_valid(*c, where);
  if (c->dim() != dim_) {
    throw Error(where + ": circuit dimension " + std::to_string(c->dim()) +
                " differs from family dimension " + std::to_string(dim_));
  }
  if (c->inputs().size() != arity) {
    throw Error(where + ": circuit has " + std::to_string(c->inputs().size()) +
                " inputs");
  }
  if (c->outputs().size() != 1) {
    throw Error(where + ": circuit must have exactly one output");
  }
  for (const auto& gate : c->gates()) {
    if (const auto* act = std::get_if<ActivationGate>(&gate.kind)) {
      if (!activations_.count(act->name)) {
        throw Error(where + ": activation '" + act->name +
                    "' is not in the family's activation set");
      }
    }
  }
  Measure m = measure(*c);
  if (m.size > size_bound(arity) || m.depth > depth_bound(arity)) {
    throw Error(where + ": size " + std::to_string(m.size) + "/depth " +
                std::to_string(m.depth) + " exceed the declared bounds " +
                std::to_string(size_bound(arity)) + "/" +
                std::to_string(depth_bound(arity)));
  }
  const Circuit& ref = *c;
  cache_->circuits.emplace(arity, std::move(c));
  return ref;
}

std::vector<VecK> eval_family(const CircuitFamily& fam,
                              std::span<const VecK> xs,
                              const EvalOptions& options) {
  if (xs.empty()) throw Error("eval_family: empty argument list");
  return eval_circuit(fam.circuit(xs.size()), xs, options);
}

namespace {

CircuitFamily fold_family(std::string name, unsigned dim, bool is_add) {
  auto gen = [dim, is_add](std::size_t n) {
    CircuitBuilder b(dim);
    std::vector<GateId> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(b.input());
    GateId r = is_add ? b.add(xs) : b.mul(xs);
    b.output(r);
    return std::move(b).build();
  };
  return CircuitFamily(std::move(name), dim, gen,
                       [](std::size_t n) { return n + 2; },
                       [](std::size_t) { return std::size_t{2}; });
}

}  // namespace

CircuitFamily sum_family(unsigned dim) { return fold_family("sum", dim, true); }

CircuitFamily product_family(unsigned dim) {
  return fold_family("product", dim, false);
}

CircuitFamily first_argument_family(unsigned dim) {
  auto gen = [dim](std::size_t n) {
    CircuitBuilder b(dim);
    GateId own = b.input();
    for (std::size_t i = 1; i < n; ++i) b.input();
    b.output(own);
    return std::move(b).build();
  };
  return CircuitFamily("first", dim, gen, [](std::size_t n) { return n + 1; },
                       [](std::size_t) { return std::size_t{1}; });
}

CircuitFamily family_from_generator(std::string name, unsigned dim,
                                    CircuitFamily::Generator generate) {
  // Bounds are the measured values of the generated members.
  auto shared = std::make_shared<CircuitFamily::Generator>(std::move(generate));
  auto size = [shared](std::size_t n) { return measure((*shared)(n)).size; };
  auto depth = [shared](std::size_t n) { return measure((*shared)(n)).depth; };
  std::set<std::string> acts = {};
  for (const auto& a : registered_activations()) acts.insert(a);
  return CircuitFamily(
      std::move(name), dim, [shared](std::size_t n) { return (*shared)(n); },
      size, depth, acts);
}

std::string TailSymmetryVerdict::str() const {
  if (!counterexample_found) return "no counterexample found";
  std::ostringstream out;
  out << "counterexample: inputs";
  for (const auto& x : inputs) out << " (" << x.str() << ")";
  out << " tail permutation";
  for (auto p : permutation) out << " " << p + 1;
  return out.str();
}

TailSymmetryVerdict check_tail_symmetric(const CircuitFamily& fam,
                                         std::size_t n, std::size_t trials,
                                         std::uint64_t seed) {
  TailSymmetryVerdict verdict;
  const Circuit& c = fam.circuit(n);
  bool exact = true;
  for (const auto& gate : c.gates()) {
    if (const auto* act = std::get_if<ActivationGate>(&gate.kind)) {
      if (!find_activation(act->name).exact_capable) exact = false;
    }
  }
  EvalOptions options;
  options.backend = exact ? Backend::Exact : Backend::Float;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<VecK> xs;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Scalar> comp;
      for (unsigned j = 0; j < fam.dim(); ++j) {
        comp.emplace_back(rng.rational(20));
      }
      xs.emplace_back(std::move(comp));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> tail(perm.begin() + 1, perm.end());
    rng.shuffle(tail);
    std::copy(tail.begin(), tail.end(), perm.begin() + 1);
    std::vector<VecK> permuted;
    for (auto p : perm) permuted.push_back(xs[p]);

    auto base = eval_circuit(c, xs, options);
    auto other = eval_circuit(c, permuted, options);
    bool same = exact ? base == other : approx_equal(base[0], other[0]);
    if (!same) {
      verdict.counterexample_found = true;
      verdict.inputs = xs;
      verdict.permutation = perm;
      return verdict;
    }
  }
  return verdict;
}

}  // namespace gnncirc
