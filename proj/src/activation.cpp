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

#include "gnncirc/activation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gnncirc/errors.hpp"

namespace gnncirc {

namespace {

std::map<std::string, ActivationFn, std::less<>> make_registry() {
  std::map<std::string, ActivationFn, std::less<>> reg;

  ActivationFn id;
  id.name = "id";
  id.exact_capable = true;
  id.injectivity_domain = "all reals";
  id.forward_float = [](double x) { return x; };
  id.inverse_float = [](double y) { return y; };
  id.forward_exact = [](const Rational& x) { return x; };
  id.inverse_exact = [](const Rational& y) { return y; };
  id.invertible_at = [](double) { return true; };
  reg.emplace(id.name, id);

  ActivationFn relu;
  relu.name = "relu";
  relu.exact_capable = true;
  relu.injectivity_domain = "positive reals";
  relu.forward_float = [](double x) { return x > 0 ? x : 0.0; };
  relu.inverse_float = [](double y) { return y; };
  relu.forward_exact = [](const Rational& x) {
    return sgn(x) > 0 ? x : Rational(0);
  };
  relu.inverse_exact = [](const Rational& y) { return y; };
  relu.invertible_at = [](double y) { return y > 0; };
  reg.emplace(relu.name, relu);

  ActivationFn sigmoid;
  sigmoid.name = "sigmoid";
  sigmoid.injectivity_domain = "all reals";
  sigmoid.forward_float = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  sigmoid.inverse_float = [](double y) { return std::log(y / (1.0 - y)); };
  sigmoid.invertible_at = [](double y) { return y > 0 && y < 1; };
  reg.emplace(sigmoid.name, sigmoid);

  ActivationFn tanh_fn;
  tanh_fn.name = "tanh";
  tanh_fn.injectivity_domain = "all reals";
  tanh_fn.forward_float = [](double x) { return std::tanh(x); };
  tanh_fn.inverse_float = [](double y) { return std::atanh(y); };
  tanh_fn.invertible_at = [](double y) { return y > -1 && y < 1; };
  reg.emplace(tanh_fn.name, tanh_fn);

  // Piecewise linear saturation; injective on the open unit interval only.
  ActivationFn clamp;
  clamp.name = "clamp01";
  clamp.exact_capable = true;
  clamp.injectivity_domain = "open unit interval";
  clamp.forward_float = [](double x) { return std::clamp(x, 0.0, 1.0); };
  clamp.inverse_float = [](double y) { return y; };
  clamp.forward_exact = [](const Rational& x) {
    if (sgn(x) < 0) return Rational(0);
    if (x > 1) return Rational(1);
    return x;
  };
  clamp.inverse_exact = [](const Rational& y) { return y; };
  clamp.invertible_at = [](double y) { return y > 0 && y < 1; };
  reg.emplace(clamp.name, clamp);

  return reg;
}

const std::map<std::string, ActivationFn, std::less<>>& registry() {
  static const auto reg = make_registry();
  return reg;
}

}  // namespace

const ActivationFn& find_activation(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    throw Error("unknown activation '" + std::string(name) + "'");
  }
  return it->second;
}

bool is_registered_activation(std::string_view name) {
  return registry().count(name) > 0;
}

std::vector<std::string> registered_activations() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

Scalar activation_apply(const ActivationFn& fn, const Scalar& x,
                        bool lift_float) {
  if (!x.is_exact()) return Scalar(fn.forward_float(x.to_double()));
  if (fn.exact_capable) return Scalar(fn.forward_exact(x.exact()));
  if (!lift_float) {
    throw Error("activation '" + fn.name +
                "' has no exact form; use the float backend");
  }
  return Scalar(rational_from_double(fn.forward_float(x.to_double())));
}

VecK activation_apply(const ActivationFn& fn, const VecK& x, bool lift_float) {
  std::vector<Scalar> c;
  c.reserve(x.dim());
  for (const auto& s : x.components()) {
    c.push_back(activation_apply(fn, s, lift_float));
  }
  return VecK(std::move(c));
}

Scalar activation_invert(const ActivationFn& fn, const Scalar& y) {
  if (!fn.invertible_at(y.to_double())) {
    throw Error("activation '" + fn.name + "' is not invertible at " + y.str());
  }
  if (y.is_exact()) {
    if (!fn.exact_capable) {
      throw Error("activation '" + fn.name + "' has no exact inverse");
    }
    return Scalar(fn.inverse_exact(y.exact()));
  }
  return Scalar(fn.inverse_float(y.to_double()));
}

}  // namespace gnncirc
