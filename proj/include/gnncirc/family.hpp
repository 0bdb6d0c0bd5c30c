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
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gnncirc/circuit.hpp"
#include "gnncirc/eval.hpp"

namespace gnncirc {

// Arity-indexed circuits with declared resource bounds. Generated circuits
// are validated once and cached; the cache is shared between copies.
class CircuitFamily {
 public:
  using Generator = std::function<Circuit(std::size_t arity)>;
  using Bound = std::function<std::size_t(std::size_t arity)>;

  CircuitFamily(std::string name, unsigned dim, Generator generate,
                Bound size_bound, Bound depth_bound,
                std::set<std::string> activations = {});

  const std::string& name() const { return name_; }
  unsigned dim() const { return dim_; }
  const std::set<std::string>& activations() const { return activations_; }
  std::size_t size_bound(std::size_t arity) const { return size_bound_(arity); }
  std::size_t depth_bound(std::size_t arity) const {
    return depth_bound_(arity);
  }

  // Throws Error when generation fails, the circuit does not validate, has
  // the wrong number of inputs, not exactly one output, the wrong
  // dimension, or exceeds a declared bound.
  const Circuit& circuit(std::size_t arity) const;

 private:
  struct Cache;
  std::string name_;
  unsigned dim_;
  Generator generate_;
  Bound size_bound_;
  Bound depth_bound_;
  std::set<std::string> activations_;
  std::shared_ptr<Cache> cache_;
};

std::vector<VecK> eval_family(const CircuitFamily& fam,
                              std::span<const VecK> xs,
                              const EvalOptions& options = {});

// f(x_1, ..., x_n) = x_1 + ... + x_n.
CircuitFamily sum_family(unsigned dim);
// f(x_1, ..., x_n) = x_1 * ... * x_n.
CircuitFamily product_family(unsigned dim);
// f(x_1, ...) = x_1.
CircuitFamily first_argument_family(unsigned dim);
// Wraps fixed circuits keyed by arity; bounds are the measured values.
CircuitFamily family_from_generator(std::string name, unsigned dim,
                                    CircuitFamily::Generator generate);

struct TailSymmetryVerdict {
  bool counterexample_found = false;
  std::vector<VecK> inputs;
  // Positions (0-based) applied to the tail that changed the output.
  std::vector<std::size_t> permutation;
  std::string str() const;
};

// Randomized refuter over random rational inputs and random permutations
// of positions 2..n. Families with float-only activations are compared on
// the float backend with relative tolerance 1e-9.
TailSymmetryVerdict check_tail_symmetric(const CircuitFamily& fam,
                                         std::size_t n, std::size_t trials,
                                         std::uint64_t seed);

}  // namespace gnncirc
