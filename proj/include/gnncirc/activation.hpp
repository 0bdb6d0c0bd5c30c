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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gnncirc/scalar.hpp"

namespace gnncirc {

// A registered unary real function together with a partial inverse on the
// image of a set on which it is injective.
struct ActivationFn {
  std::string name;
  bool exact_capable = false;
  std::string injectivity_domain;
  std::function<double(double)> forward_float;
  std::function<double(double)> inverse_float;
  // Empty unless exact_capable.
  std::function<Rational(const Rational&)> forward_exact;
  std::function<Rational(const Rational&)> inverse_exact;
  // Membership of y in the image of the injectivity domain.
  std::function<bool(double)> invertible_at;

  bool is_identity() const { return name == "id"; }
};

// Registered: id, relu, sigmoid, tanh, clamp01. Throws Error when unknown.
const ActivationFn& find_activation(std::string_view name);
bool is_registered_activation(std::string_view name);
std::vector<std::string> registered_activations();

// Float-only activations on exact scalars throw Error unless
// lift_float is set, in which case the binary64 result is taken exactly.
Scalar activation_apply(const ActivationFn& fn, const Scalar& x,
                        bool lift_float = false);
VecK activation_apply(const ActivationFn& fn, const VecK& x,
                      bool lift_float = false);
// Throws Error outside the invertible image.
Scalar activation_invert(const ActivationFn& fn, const Scalar& y);

}  // namespace gnncirc
