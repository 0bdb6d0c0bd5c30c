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

#include "gnncirc/gadgets.hpp"

#include <algorithm>

#include "gnncirc/errors.hpp"

namespace gnncirc {

std::vector<GateId> splice(CircuitBuilder& host, const Circuit& frag,
                           std::span<const GateId> ports) {
  require_valid(frag, "splice");
  if (frag.dim() != host.dim()) {
    throw Error("splice: fragment dimension differs from host");
  }
  if (ports.size() != frag.inputs().size()) {
    throw Error("splice: expected " + std::to_string(frag.inputs().size()) +
                " ports, got " + std::to_string(ports.size()));
  }
  std::vector<GateId> map(frag.size());
  for (std::size_t i = 0; i < ports.size(); ++i) map[frag.inputs()[i]] = ports[i];
  for (GateId g : frag.topological_order()) {
    const Gate& gate = frag.gate(g);
    if (gate.op() == GateOp::Input) continue;
    if (gate.op() == GateOp::Output) {
      map[g] = map[gate.preds[0]];
      continue;
    }
    std::vector<GateId> preds;
    preds.reserve(gate.preds.size());
    for (GateId p : gate.preds) preds.push_back(map[p]);
    map[g] = host.raw(gate.kind, std::move(preds));
  }
  std::vector<GateId> results;
  for (GateId o : frag.outputs()) results.push_back(map[o]);
  return results;
}

FiniteDomain::FiniteDomain(std::vector<Rational> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error("finite domain must be nonempty");
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw Error("finite domain elements must be distinct");
  }
}

FiniteDomain FiniteDomain::integers(long lo, long hi) {
  std::vector<Rational> e;
  for (long v = lo; v <= hi; ++v) e.emplace_back(v);
  return FiniteDomain(std::move(e));
}

bool FiniteDomain::contains(const Rational& a) const {
  return std::binary_search(elements_.begin(), elements_.end(), a);
}

ChiBank::ChiBank(CircuitBuilder& b, GateId x, FiniteDomain domain)
    : b_(b), x_(x), domain_(std::move(domain)),
      factors_(domain_.size(), kNoGate) {}

GateId ChiBank::factor(std::size_t i) {
  if (factors_[i] == kNoGate) {
    factors_[i] = b_.add({x_, b_.constant(Rational(-domain_.elements()[i]))});
  }
  return factors_[i];
}

GateId ChiBank::chi(const Rational& a, const Scalar& weight) {
  const auto& elems = domain_.elements();
  auto it = std::lower_bound(elems.begin(), elems.end(), a);
  if (it == elems.end() || *it != a) {
    throw Error("chi: " + to_string(a) + " is not in the domain");
  }
  const std::size_t pos = static_cast<std::size_t>(it - elems.begin());
  if (elems.size() == 1) return b_.constant(weight);
  Rational denom(1);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i != pos) denom *= a - elems[i];
  }
  Rational scale = 1 / denom;
  Scalar folded = weight.is_exact() ? Scalar(Rational(weight.exact() * scale))
                                    : Scalar(weight.to_double() * scale.get_d());
  std::vector<GateId> preds;
  preds.reserve(elems.size());
  preds.push_back(b_.constant(folded));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i != pos) preds.push_back(factor(i));
  }
  return b_.mul(preds);
}

GateId ChiBank::weighted_sum(
    std::span<const std::pair<Rational, Scalar>> entries) {
  if (entries.empty()) return b_.constant(Rational(0));
  std::vector<GateId> terms;
  terms.reserve(entries.size());
  for (const auto& [key, value] : entries) terms.push_back(chi(key, value));
  return b_.add(terms);
}

Fragment build_chi(const FiniteDomain& domain, const Rational& a, unsigned k) {
  if (!domain.contains(a)) {
    throw Error("build_chi: " + to_string(a) + " is not in the domain");
  }
  CircuitBuilder b(k);
  GateId x = b.input();
  ChiBank bank(b, x, domain);
  b.output(bank.chi(a));
  return Fragment{std::move(b).build()};
}

Fragment build_eq_indicator(std::size_t bound, std::size_t target, unsigned k) {
  if (target > bound) {
    throw Error("build_eq_indicator: target " + std::to_string(target) +
                " exceeds bound " + std::to_string(bound));
  }
  return build_chi(FiniteDomain::integers(0, static_cast<long>(bound)),
                   Rational(static_cast<long>(target)), k);
}

GateId emit_sign_like(CircuitBuilder& b, GateId x, std::size_t n) {
  if (n == 0) throw Error("sign-like gadget needs n >= 1");
  const long m = static_cast<long>(n) - 1;
  if (m == 0) return b.constant(Rational(0));
  ChiBank bank(b, x, FiniteDomain::integers(-m, m));
  std::vector<GateId> terms;
  for (long d = 1; d <= m; ++d) terms.push_back(bank.chi(Rational(d)));
  return b.add(terms);
}

Fragment build_sign_like(std::size_t n, unsigned k) {
  CircuitBuilder b(k);
  GateId x = b.input();
  b.output(emit_sign_like(b, x, n));
  return Fragment{std::move(b).build()};
}

Fragment build_lookup(std::span<const std::pair<Rational, Scalar>> table,
                      const FiniteDomain& domain, unsigned k) {
  std::vector<Rational> keys;
  for (const auto& [key, value] : table) {
    if (!domain.contains(key)) {
      throw Error("build_lookup: key " + to_string(key) +
                  " is not in the domain");
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw Error("build_lookup: duplicate keys");
  }
  CircuitBuilder b(k);
  GateId x = b.input();
  ChiBank bank(b, x, domain);
  b.output(bank.weighted_sum(table));
  return Fragment{std::move(b).build()};
}

Fragment build_lookup(std::span<const std::pair<Rational, Scalar>> table,
                      unsigned k) {
  std::vector<Rational> keys;
  for (const auto& [key, value] : table) keys.push_back(key);
  if (keys.empty()) keys.emplace_back(0);
  return build_lookup(table, FiniteDomain(std::move(keys)), k);
}

}  // namespace gnncirc
