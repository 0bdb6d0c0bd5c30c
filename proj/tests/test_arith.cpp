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

#include <cmath>

#include "gnncirc/activation.hpp"
#include "gnncirc/circuit.hpp"
#include "gnncirc/circuit_io.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/eval.hpp"
#include "gnncirc/random.hpp"
#include "gnncirc/rational.hpp"
#include "gnncirc/scalar.hpp"
#include "gnncirc/verify.hpp"
#include "oracles.hpp"

namespace gnncirc {
namespace {

Circuit sum_times_input() {
  CircuitBuilder b(1);
  GateId x1 = b.input(), x2 = b.input(), x3 = b.input();
  b.output(b.mul({b.add({x1, x2}), x3}));
  return std::move(b).build();
}

TEST(Rational, ParsesAndCanonicalizes) {
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("x"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Rational, DoubleConversionIsExact) {
  EXPECT_EQ(rational_from_double(0.5), Rational(1, 2));
  EXPECT_EQ(rational_from_double(-3.0), Rational(-3));
  const double d = 0.1;
  EXPECT_EQ(rational_from_double(d).get_d(), d);
}

TEST(Scalar, BackendsDoNotMix) {
  Scalar a(Rational(1, 3));
  Scalar f(0.25);
  EXPECT_EQ((a + a).exact(), Rational(2, 3));
  EXPECT_EQ((a * a).exact(), Rational(1, 9));
  EXPECT_EQ((-a).exact(), Rational(-1, 3));
  EXPECT_DOUBLE_EQ((f * f).to_double(), 0.0625);
  EXPECT_THROW(a + f, Error);
  EXPECT_EQ(f.to_backend(Backend::Exact).exact(), Rational(1, 4));
}

TEST(Scalar, FloatTextIsDistinguishable) {
  EXPECT_TRUE(parse_scalar("3").is_exact());
  EXPECT_TRUE(parse_scalar("3/4").is_exact());
  EXPECT_FALSE(parse_scalar("3.0").is_exact());
  EXPECT_FALSE(parse_scalar("1e3").is_exact());
  Scalar f(2.0);
  EXPECT_FALSE(parse_scalar(f.str()).is_exact());
  EXPECT_EQ(parse_scalar(f.str()).to_double(), 2.0);
}

TEST(Scalar, ApproxEqualUsesRelativeAndAbsoluteTolerance) {
  EXPECT_TRUE(approx_equal(1.0, 1.0 + 1e-10));
  EXPECT_FALSE(approx_equal(1.0, 1.0 + 1e-8));
  EXPECT_TRUE(approx_equal(0.0, 1e-13));
  EXPECT_FALSE(approx_equal(0.0, 1e-11));
}

TEST(VecK, ComponentwiseArithmeticAndText) {
  VecK a = VecK::ints({1, 2});
  VecK b = VecK::ints({3, 4});
  EXPECT_EQ(a + b, VecK::ints({4, 6}));
  EXPECT_EQ(a * b, VecK::ints({3, 8}));
  EXPECT_EQ(parse_veck("1/2,3"), VecK({Scalar(Rational(1, 2)), Scalar::integer(3)}));
  EXPECT_EQ(parse_veck((a + b).str()), a + b);
  EXPECT_TRUE(VecK::broadcast(Scalar::integer(5), 3).is_broadcast_of(Scalar::integer(5)));
}

TEST(Activation, RegistryAndInverses) {
  for (const auto& name : registered_activations()) {
    EXPECT_TRUE(is_registered_activation(name));
  }
  EXPECT_THROW(find_activation("softplus"), Error);
  const auto& relu = find_activation("relu");
  EXPECT_EQ(activation_apply(relu, Scalar(Rational(-3))).exact(), 0);
  EXPECT_EQ(activation_invert(relu, Scalar(Rational(5, 2))).exact(), Rational(5, 2));
  EXPECT_THROW(activation_invert(relu, Scalar(Rational(0))), Error);
  const auto& sig = find_activation("sigmoid");
  EXPECT_FALSE(sig.exact_capable);
  EXPECT_THROW(activation_apply(sig, Scalar(Rational(1))), Error);
  Scalar lifted = activation_apply(sig, Scalar(Rational(1)), true);
  EXPECT_TRUE(lifted.is_exact());
  EXPECT_EQ(lifted.to_double(), 1.0 / (1.0 + std::exp(-1.0)));
  EXPECT_THROW(activation_invert(sig, Scalar(3.0)), Error);
  EXPECT_NEAR(activation_invert(sig, Scalar(0.25)).to_double(), std::log(1.0 / 3.0), 1e-12);
  const auto& clamp = find_activation("clamp01");
  EXPECT_EQ(activation_apply(clamp, Scalar(Rational(7, 3))).exact(), 1);
  EXPECT_EQ(activation_apply(clamp, Scalar(Rational(1, 3))).exact(), Rational(1, 3));
}

TEST(Activation, FloatInverseRoundTrips) {
  for (const char* name : {"sigmoid", "tanh"}) {
    const auto& fn = find_activation(name);
    for (double x : {-3.0, -0.5, 0.0, 0.75, 2.0}) {
      EXPECT_NEAR(fn.inverse_float(fn.forward_float(x)), x, 1e-9) << name;
    }
  }
}

TEST(Circuit, EvaluatesTheWorkedExample) {
  Circuit c = sum_times_input();
  auto out = eval_circuit(c, std::vector<VecK>{VecK::ints({6}), VecK::ints({9}), VecK::ints({5})});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], VecK::ints({75}));
  Measure m = measure(c);
  EXPECT_EQ(m.size, 6u);
  EXPECT_EQ(m.depth, 3u);
}

TEST(Circuit, IdentityCircuit) {
  CircuitBuilder b(2);
  b.output(b.input());
  Circuit c = std::move(b).build();
  VecK x({Scalar(Rational(-7, 3)), Scalar(Rational(4))});
  EXPECT_EQ(eval_circuit(c, std::vector<VecK>{x})[0], x);
  EXPECT_EQ(measure(c).depth, 1u);
}

TEST(Circuit, ProjectionMovesOneComponent) {
  CircuitBuilder b(3);
  b.output(b.proj(3, 1, b.input()));
  Circuit c = std::move(b).build();
  auto out = eval_circuit(c, std::vector<VecK>{VecK::ints({4, 5, 6})});
  EXPECT_EQ(out[0], VecK::ints({6, 0, 0}));
}

TEST(Circuit, ValidationReportsEachViolationKind) {
  {
    CircuitBuilder b(1);
    GateId x = b.input();
    b.output(b.raw(AddGate{}, {x, x}));
    EXPECT_TRUE(validate_circuit(std::move(b).build()).has(ViolationKind::MultiEdge));
  }
  {
    CircuitBuilder b(1);
    b.input();
    b.output(b.raw(MulGate{}, {}));
    EXPECT_TRUE(validate_circuit(std::move(b).build()).has(ViolationKind::Arity));
  }
  {
    CircuitBuilder b(1);
    GateId x = b.input(1);
    b.output(x);
    EXPECT_TRUE(validate_circuit(std::move(b).build()).has(ViolationKind::Ordinal));
  }
  {
    CircuitBuilder b(2);
    GateId x = b.input();
    b.output(b.add({x, b.constant(VecK::ints({1}))}));
    EXPECT_TRUE(validate_circuit(std::move(b).build()).has(ViolationKind::Dim));
  }
  {
    CircuitBuilder b(1);
    GateId x = b.input();
    b.output(b.raw(AddGate{}, {x, 17}));
    EXPECT_TRUE(validate_circuit(std::move(b).build()).has(ViolationKind::Dangling));
  }
  {
    CircuitBuilder b(1);
    GateId x = b.input();
    GateId a = b.raw(AddGate{}, {x, 2});
    GateId m = b.raw(MulGate{}, {a});
    b.output(m);
    Circuit c = std::move(b).build();
    EXPECT_TRUE(validate_circuit(c).has(ViolationKind::Cycle));
    EXPECT_FALSE(c.valid());
    EXPECT_THROW(eval_circuit(c, std::vector<VecK>{VecK::ints({1})}), Error);
  }
}

TEST(Circuit, InputFanOutIsANoteNotAViolation) {
  CircuitBuilder b(1);
  GateId x = b.input();
  b.output(b.add({x}));
  b.output(b.mul({x}));
  ValidationReport r = validate_circuit(std::move(b).build());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.notes.size(), 1u);
}

TEST(Circuit, TopologicalOrderRespectsWires) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    CircuitShape shape;
    shape.dim = 2;
    Circuit c = gen_random_circuit(rng, Bounds{}, shape);
    std::vector<std::size_t> pos(c.size());
    const auto& order = c.topological_order();
    ASSERT_EQ(order.size(), c.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (GateId g = 0; g < c.size(); ++g) {
      for (GateId p : c.gate(g).preds) EXPECT_LT(pos[p], pos[g]);
    }
  }
}

TEST(Eval, AgreesWithRecursiveOracle) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    CircuitShape shape;
    shape.dim = static_cast<unsigned>(rng.uniform(1, 3));
    Circuit c = gen_random_circuit(rng, Bounds{}, shape);
    auto inputs = gen_random_inputs(rng, c, 100);
    EXPECT_EQ(eval_circuit(c, inputs), oracle::eval_circuit(c, inputs)) << format_circuit(c);
  }
}

TEST(Eval, FloatBackendTracksExact) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    Circuit c = gen_random_circuit(rng, Bounds{}, CircuitShape{});
    auto inputs = gen_random_inputs(rng, c, 10);
    auto exact = eval_circuit(c, inputs);
    EvalOptions f;
    f.backend = Backend::Float;
    auto approx = eval_circuit(c, inputs, f);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      EXPECT_TRUE(approx_equal(approx[i], exact[i].to_backend(Backend::Float)));
    }
  }
}

TEST(Eval, RejectsMismatchedInputsAndFloatConstants) {
  Circuit c = sum_times_input();
  EXPECT_THROW(eval_circuit(c, std::vector<VecK>{VecK::ints({1})}), Error);
  EXPECT_THROW(eval_circuit(c, std::vector<VecK>{VecK::ints({1, 2}), VecK::ints({1, 2}),
                                                 VecK::ints({1, 2})}),
               Error);
  CircuitBuilder b(1);
  b.output(b.add({b.input(), b.constant(Scalar(0.5))}));
  Circuit fc = std::move(b).build();
  EXPECT_THROW(eval_circuit(fc, std::vector<VecK>{VecK::ints({1})}), Error);
  EvalOptions f;
  f.backend = Backend::Float;
  EXPECT_DOUBLE_EQ(eval_circuit(fc, std::vector<VecK>{VecK::ints({1})}, f)[0][0].to_double(), 1.5);
}

TEST(Eval, SigmoidNeedsFloatOrLifting) {
  CircuitBuilder b(1);
  b.output(b.activation("sigmoid", b.input()));
  Circuit c = std::move(b).build();
  std::vector<VecK> in = {VecK::ints({2})};
  EXPECT_THROW(eval_circuit(c, in), Error);
  EvalOptions lift;
  lift.lift_float_activations = true;
  EXPECT_EQ(eval_circuit(c, in, lift)[0][0].to_double(), 1.0 / (1.0 + std::exp(-2.0)));
}

TEST(CircuitText, RoundTripsAndHashIsIdIndependent) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    CircuitShape shape;
    shape.dim = static_cast<unsigned>(rng.uniform(1, 2));
    shape.activations = true;
    Circuit c = gen_random_circuit(rng, Bounds{}, shape);
    Circuit back = parse_circuit(format_circuit(c));
    EXPECT_EQ(format_circuit(back), format_circuit(c));
    EXPECT_EQ(structural_hash(back), structural_hash(c));
  }
  Circuit a = parse_circuit("dim 1\ng10 INPUT:1\ng3 INPUT:2\ng7 ADD <- g10,g3\ng1 OUTPUT:1 <- g7\n");
  Circuit b = parse_circuit("dim 1\ng0 INPUT:1\ng1 INPUT:2\ng2 ADD <- g0,g1\ng3 OUTPUT:1 <- g2\n");
  EXPECT_EQ(structural_hash(a), structural_hash(b));
  Circuit m = parse_circuit("dim 1\ng0 INPUT:1\ng1 INPUT:2\ng2 MUL <- g0,g1\ng3 OUTPUT:1 <- g2\n");
  EXPECT_NE(structural_hash(a), structural_hash(m));
}

TEST(CircuitText, ParseErrors) {
  EXPECT_THROW(parse_circuit("g0 INPUT:1\n"), ParseError);
  EXPECT_THROW(parse_circuit("dim 1\ng0 FOO\n"), ParseError);
  EXPECT_THROW(parse_circuit("dim 1\ng0 INPUT:1\ng0 INPUT:2\n"), ParseError);
  EXPECT_THROW(parse_circuit("dim 1\ng0 ADD <- g9\n"), ParseError);
  EXPECT_THROW(parse_input_list("1,x", 1), ParseError);
}

TEST(CircuitText, InputLists) {
  EXPECT_EQ(parse_input_list("6,9,5", 1).size(), 3u);
  auto v = parse_input_list("1,2;3,4", 2);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], VecK::ints({3, 4}));
}

}  // namespace
}  // namespace gnncirc
