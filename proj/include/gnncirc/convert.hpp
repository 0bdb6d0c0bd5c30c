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

#include <span>
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

// Splits every R^k gate into k scalar gates. Input a becomes inputs
// a*k+1..a*k+k (likewise outputs). A projection becomes one unary Add
// carrying the projected component plus Const(0) for the other components.
Circuit rk_to_r(const Circuit& c);

// Packs a scalar circuit with n*k inputs and m*k outputs into an R^k
// circuit with n inputs and m outputs. Each scalar input is projected to
// the first component; each output block is reassembled by projections and
// one Add. For k = 1 the circuit is returned unchanged.
Circuit r_to_rk(const Circuit& c, unsigned k);

// Flattens R^k vectors into k scalar vectors each, and back.
std::vector<VecK> flatten(std::span<const VecK> xs);
std::vector<VecK> pack(std::span<const VecK> scalars, unsigned k);

}  // namespace gnncirc
