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
#include <utility>
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

// A reusable sub-circuit. Its input gates are the free ports (in ordinal
// order) and its output gates the result ports.
struct Fragment {
  Circuit circuit;
};

// Copies `frag` into `host`, binding its free ports to `ports`, and returns
// the host wires carrying the fragment's results.
std::vector<GateId> splice(CircuitBuilder& host, const Circuit& frag,
                           std::span<const GateId> ports);

// Nonempty set of distinct rationals, kept sorted.
class FiniteDomain {
 public:
  explicit FiniteDomain(std::vector<Rational> elements);
  static FiniteDomain integers(long lo, long hi);
  const std::vector<Rational>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const Rational& a) const;

 private:
  std::vector<Rational> elements_;
};

// Lagrange basis polynomials of a domain evaluated at one wire. The factors
// (x - a) are shared by all targets.
class ChiBank {
 public:
  ChiBank(CircuitBuilder& b, GateId x, FiniteDomain domain);

  const FiniteDomain& domain() const { return domain_; }
  // chi_{A,a}(x) scaled by `weight`: one Mul of a folded constant and the
  // |A|-1 factors; a constant when |A| = 1.
  GateId chi(const Rational& a, const Scalar& weight);
  GateId chi(const Rational& a) { return chi(a, Scalar(Rational(1))); }
  // Sum of weight * chi_a over the entries; Const(0) for an empty table.
  GateId weighted_sum(
      std::span<const std::pair<Rational, Scalar>> entries);

 private:
  static constexpr GateId kNoGate = static_cast<GateId>(-1);
  // The shared factor (x - a_i), created on first use.
  GateId factor(std::size_t i);

  CircuitBuilder& b_;
  GateId x_;
  FiniteDomain domain_;
  std::vector<GateId> factors_;
};

// Indicator of x = a on A, as a polynomial of degree |A|-1.
Fragment build_chi(const FiniteDomain& domain, const Rational& a, unsigned k);
// build_chi({0, ..., bound}, target, k).
Fragment build_eq_indicator(std::size_t bound, std::size_t target, unsigned k);
// 1 on {1, ..., n-1} and 0 on {-(n-1), ..., 0}.
Fragment build_sign_like(std::size_t n, unsigned k);
GateId emit_sign_like(CircuitBuilder& b, GateId x, std::size_t n);
// table[x] for keys x, 0 for other members of `domain` (which must contain
// every key).
Fragment build_lookup(std::span<const std::pair<Rational, Scalar>> table,
                      const FiniteDomain& domain, unsigned k);
Fragment build_lookup(std::span<const std::pair<Rational, Scalar>> table,
                      unsigned k);

}  // namespace gnncirc
