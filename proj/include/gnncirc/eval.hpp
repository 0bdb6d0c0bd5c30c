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
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

struct EvalOptions {
  // Defaults to the backend of the inputs, or Exact without inputs.
  std::optional<Backend> backend;
  // On the exact backend, evaluate activations that have no exact form in
  // binary64 and continue with the exact value of the rounded result.
  bool lift_float_activations = false;
};

// Values of the output gates in ordinal order. Throws Error on invalid
// circuits, input count/dimension/backend mismatches, unknown activations,
// float constants or float-only activations on the exact backend.
std::vector<VecK> eval_circuit(const Circuit& c, std::span<const VecK> inputs,
                               const EvalOptions& options = {});

// Values of every gate, indexed by gate id.
std::vector<VecK> eval_all_gates(const Circuit& c,
                                 std::span<const VecK> inputs,
                                 const EvalOptions& options = {});

}  // namespace gnncirc
