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

#include <gtest/gtest.h>

#include "gnncirc/errors.hpp"
#include "gnncirc/eval.hpp"
#include "gnncirc/gadgets.hpp"
#include "gnncirc/random.hpp"

namespace gnncirc {
namespace {

Rational eval1(const Circuit& c, const Rational& x) {
  return eval_circuit(c, std::vector<VecK>{VecK({Scalar(x)})}).at(0)[0].exact();
}

TEST(FiniteDomain, SortsAndRejectsDuplicates) {
  FiniteDomain d({Rational(3), Rational(-1), Rational(1, 2)});
  EXPECT_EQ(d.elements().front(), Rational(-1));
  EXPECT_TRUE(d.contains(Rational(1, 2)));
  EXPECT_FALSE(d.contains(Rational(2)));
  EXPECT_THROW(FiniteDomain({Rational(1), Rational(1)}), Error);
  EXPECT_THROW(FiniteDomain(std::vector<Rational>{}), Error);
  EXPECT_EQ(FiniteDomain::integers(-2, 2).size(), 5u);
}

TEST(Chi, KroneckerTableOnSmallDomains) {
  Rng rng(2);
  for (std::size_t size = 1; size <= 7; ++size) {
    std::vector<Rational> elems;
    while (elems.size() < size) {
      Rational r = rng.rational(9);
      if (std::find(elems.begin(), elems.end(), r) == elems.end()) elems.push_back(r);
    }
    FiniteDomain d(elems);
    for (const auto& a : d.elements()) {
      Fragment f = build_chi(d, a, 1);
      for (const auto& x : d.elements()) {
        EXPECT_EQ(eval1(f.circuit, x), x == a ? 1 : 0);
      }
    }
  }
}

TEST(Chi, SizeAndDepthDependOnlyOnDomainSize) {
  for (std::size_t size = 1; size <= 8; ++size) {
    FiniteDomain a = FiniteDomain::integers(1, static_cast<long>(size));
    FiniteDomain b = FiniteDomain::integers(100, static_cast<long>(99 + size));
    const Measure ma = measure(build_chi(a, Rational(1), 1).circuit);
    const Measure mb = measure(build_chi(b, Rational(100 + static_cast<long>(size) - 1), 1).circuit);
    EXPECT_EQ(ma.size, mb.size);
    EXPECT_EQ(ma.depth, mb.depth);
    // input, output, one Mul with its constant, and size-1 factors with theirs
    EXPECT_EQ(ma.size, size == 1 ? 3u : 2 * (size - 1) + 4);
    EXPECT_LE(ma.depth, 4u);
  }
}

TEST(Chi, ComponentwiseOnVectors) {
  FiniteDomain d = FiniteDomain::integers(0, 3);
  Fragment f = build_chi(d, Rational(2), 3);
  auto out = eval_circuit(f.circuit, std::vector<VecK>{VecK::ints({2, 0, 3})});
  EXPECT_EQ(out[0], VecK::ints({1, 0, 0}));
}

TEST(Chi, EqIndicatorOverRange) {
  Fragment f = build_eq_indicator(5, 3, 1);
  for (long x = 0; x <= 5; ++x) EXPECT_EQ(eval1(f.circuit, Rational(x)), x == 3 ? 1 : 0);
  EXPECT_THROW(build_eq_indicator(2, 3, 1), Error);
}

TEST(SignLike, ExhaustiveUpToEight) {
  for (std::size_t n = 1; n <= 8; ++n) {
    Fragment f = build_sign_like(n, 1);
    const long m = static_cast<long>(n) - 1;
    for (long x = -m; x <= m; ++x) {
      EXPECT_EQ(eval1(f.circuit, Rational(x)), x >= 1 ? 1 : 0) << "n=" << n << " x=" << x;
    }
  }
  EXPECT_THROW(build_sign_like(0, 1), Error);
}

TEST(Lookup, ReturnsTableValuesAndZeroElsewhere) {
  std::vector<std::pair<Rational, Scalar>> table = {
      {Rational(1), Scalar(Rational(10))}, {Rational(4), Scalar(Rational(-1, 2))}};
  FiniteDomain d = FiniteDomain::integers(0, 5);
  Fragment f = build_lookup(table, d, 1);
  for (long x = 0; x <= 5; ++x) {
    Rational want = x == 1 ? Rational(10) : x == 4 ? Rational(-1, 2) : Rational(0);
    EXPECT_EQ(eval1(f.circuit, Rational(x)), want);
  }
  Fragment keys_only = build_lookup(table, 1);
  EXPECT_EQ(eval1(keys_only.circuit, Rational(4)), Rational(-1, 2));
  std::vector<std::pair<Rational, Scalar>> outside = {{Rational(9), Scalar(Rational(1))}};
  EXPECT_THROW(build_lookup(outside, d, 1), Error);
}

TEST(Splice, BindsPortsAndReturnsResults) {
  Fragment f = build_chi(FiniteDomain::integers(0, 2), Rational(0), 1);
  CircuitBuilder b(1);
  GateId x = b.input();
  GateId y = b.input();
  GateId s = b.add({x, y});
  std::vector<GateId> ports = {s};
  auto res = splice(b, f.circuit, ports);
  ASSERT_EQ(res.size(), 1u);
  b.output(res[0]);
  Circuit c = std::move(b).build();
  EXPECT_EQ(eval_circuit(c, std::vector<VecK>{VecK::ints({1}), VecK::ints({-1})})[0],
            VecK::ints({1}));
  EXPECT_EQ(eval_circuit(c, std::vector<VecK>{VecK::ints({1}), VecK::ints({1})})[0],
            VecK::ints({0}));
}

TEST(ChiBank, SharesFactorsAcrossTargets) {
  CircuitBuilder b(1);
  GateId x = b.input();
  ChiBank bank(b, x, FiniteDomain::integers(1, 5));
  const std::size_t before = b.size();
  bank.chi(Rational(1));
  const std::size_t after_one = b.size();
  bank.chi(Rational(2));
  // the second indicator reuses three factors
  EXPECT_EQ(b.size() - after_one, 4u);
  EXPECT_EQ(after_one - before, 10u);
}

}  // namespace
}  // namespace gnncirc
