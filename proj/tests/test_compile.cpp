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
#include "gnncirc/circuit_io.hpp"
#include "gnncirc/compile_c2g.hpp"
#include "gnncirc/compile_g2c.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/eval.hpp"
#include "gnncirc/normal_form.hpp"
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

Circuit two_activations_summed(const std::string& act) {
  CircuitBuilder b(1);
  GateId x1 = b.input(), x2 = b.input();
  b.output(b.add({b.activation(act, x1), b.activation(act, x2)}));
  return std::move(b).build();
}

std::vector<VecK> ints(std::initializer_list<long> xs) {
  std::vector<VecK> out;
  for (long x : xs) out.push_back(VecK::ints({x}));
  return out;
}

// ---- graph to circuit ----

TEST(G2cGadgets, MaskDegreeAndCompactionMatchOracles) {
  Rng rng(9);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform(1, 6));
    const unsigned k = static_cast<unsigned>(rng.uniform(1, 2));
    LabeledGraph g = gen_random_graph(rng, n, k, 1, 2, 20);
    auto blocks = encode_graph(g);
    const auto i = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(n)));

    auto mask = eval_circuit(build_neighbor_mask(n, i, k).circuit, blocks);
    auto degree = eval_circuit(build_degree(n, i, k).circuit, blocks);
    ASSERT_EQ(mask.size(), n);
    EXPECT_EQ(degree.at(0), VecK::broadcast(Scalar::integer(static_cast<long>(g.neighbors(i - 1).size())), k));
    std::vector<VecK> expected_slots;
    for (std::size_t j = 0; j < n; ++j) {
      const bool adj = g.adjacent(i - 1, j);
      EXPECT_EQ(mask[j], adj ? g.features()[j] : VecK::zeros(k));
      if (adj) expected_slots.push_back(g.features()[j]);
    }
    while (expected_slots.size() < n) expected_slots.push_back(VecK::zeros(k));

    std::vector<VecK> ports = mask;
    for (std::size_t j = 0; j < n; ++j) ports.push_back(blocks[(i - 1) * n + j]);
    auto slots = eval_circuit(build_compaction(n, k).circuit, ports);
    EXPECT_EQ(slots, expected_slots);
  }
}

TEST(G2c, SumThenProductOnAnEdge) {
  CGnn net(1, {CGnnLayer{sum_family(1), "id"}, CGnnLayer{product_family(1), "id"}});
  LabeledGraph g(2, 1, {{0, 1}}, {VecK::ints({3}), VecK::ints({4})});
  G2cPlan plan = compile_gnn_to_circuit_family(net);
  auto out = decode_features(eval_circuit(plan.circuit(2), encode_graph(g)), 2);
  EXPECT_EQ(out, ints({49, 49}));
  EXPECT_EQ(&plan.circuit(2), &plan.circuit(2));
}

TEST(G2c, RandomNetworksAgreeWithTheirCircuits) {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    Bounds b;
    b.dim = static_cast<unsigned>(rng.uniform(1, 2));
    b.max_n = 5;
    CGnn net = gen_random_cgnn(rng, b, Backend::Exact);
    LabeledGraph g = gen_random_graph(rng, static_cast<std::size_t>(rng.uniform(1, 5)), b.dim, 1, 2, 30);
    VerifyReport r = verify_g2c(net, g);
    EXPECT_TRUE(r.ok()) << r.str();
    EXPECT_EQ(decode_features(eval_circuit(build_gnn_circuit(net, g.size()), encode_graph(g)), g.size()),
              oracle::eval_cgnn(net, g));
  }
}

TEST(G2c, DepthIsIndependentOfGraphSize) {
  Rng rng(16);
  CGnn net = gen_random_cgnn(rng, Bounds{}, Backend::Exact);
  G2cPlan plan = compile_gnn_to_circuit_family(net);
  const std::size_t d = plan.resources(1).depth;
  std::size_t previous = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    G2cResources r = plan.resources(n);
    EXPECT_EQ(r.depth, d);
    EXPECT_GT(r.size, previous);
    previous = r.size;
  }
}

TEST(G2c, RejectsFamiliesThatAreNotTailSymmetric) {
  auto asym = family_from_generator("second-minus-third", 1, [](std::size_t n) {
    CircuitBuilder b(1);
    std::vector<GateId> in;
    for (std::size_t i = 0; i < n; ++i) in.push_back(b.input());
    if (n >= 3) {
      b.output(b.add({in[1], b.mul({in[2], b.constant(Rational(-1))})}));
    } else {
      b.output(b.add({in[0]}));
    }
    return std::move(b).build();
  });
  CGnn net(1, {CGnnLayer{asym, "id"}});
  EXPECT_THROW(compile_gnn_to_circuit_family(net), Error);
  VerifyReport r = verify_g2c(net, LabeledGraph(1, 1, {}, ints({1})));
  EXPECT_FALSE(r.compiled);
  EXPECT_FALSE(r.ok());
}

TEST(G2c, IdentityNetworkOnRandomGraphs) {
  Rng rng(17);
  CGnn net(2, {CGnnLayer{first_argument_family(2), "id"}});
  for (int t = 0; t < 10; ++t) {
    LabeledGraph g = gen_random_graph(rng, static_cast<std::size_t>(rng.uniform(1, 6)), 2, 1, 2, 50);
    EXPECT_TRUE(verify_g2c(net, g).ok());
  }
}

// ---- circuit to graph network ----

TEST(C2g, WorkedExampleTraceOnLiveVertices) {
  C2gCompilation comp = compile_circuit_to_gnn(sum_times_input(), Regime::Plain);
  EXPECT_EQ(comp.gnn.depth(), 3u);
  const Circuit& n = comp.plan.normalized();
  CircuitGraph cg = comp.plan.graph_for(ints({6, 9, 5}));
  auto trace = eval_cgnn_trace(comp.gnn, cg.graph);
  auto vertex_of = [&](const std::string& label) {
    for (std::size_t v = 0; v < cg.vertex_gate.size(); ++v) {
      GateId g = cg.vertex_gate[v];
      if (kind_label(n.gate(g).kind) == label && n.gate(g).preds.size() > 1) return v;
      if (label == "OUTPUT" && n.gate(g).op() == GateOp::Output) return v;
    }
    return std::size_t{0};
  };
  const std::size_t plus = vertex_of("ADD"), times = vertex_of("MUL"), out = vertex_of("OUTPUT");
  EXPECT_EQ(trace[0][plus], VecK::ints({1}));
  EXPECT_EQ(trace[1][plus], VecK::ints({15}));
  EXPECT_EQ(trace[0][times], VecK::ints({3}));
  EXPECT_EQ(trace[1][times], VecK::ints({3}));
  EXPECT_EQ(trace[2][times], VecK::ints({75}));
  EXPECT_EQ(trace[2][out], VecK::ints({4}));
  EXPECT_EQ(trace[3][out], VecK::ints({75}));
}

TEST(C2g, IdentityCircuit) {
  CircuitBuilder b(2);
  b.output(b.input());
  Circuit c = std::move(b).build();
  std::vector<VecK> in = {VecK({Scalar(Rational(-5, 7)), Scalar(Rational(3))})};
  VerifyReport r = verify_c2g(c, in, Regime::Plain);
  EXPECT_TRUE(r.ok()) << r.str();
}

TEST(C2g, LayerCountEqualsDepth) {
  Rng rng(40);
  for (int t = 0; t < 30; ++t) {
    Circuit c = gen_random_circuit(rng, Bounds{}, CircuitShape{});
    C2gCompilation comp = compile_circuit_to_gnn(c, Regime::Plain);
    EXPECT_EQ(comp.gnn.depth(), measure(c).depth);
  }
}

TEST(C2g, PlainRegimeIsExactOnRandomCircuits) {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    CircuitShape shape;
    shape.dim = static_cast<unsigned>(rng.uniform(1, 2));
    Circuit c = gen_random_circuit(rng, Bounds{}, shape);
    auto in = gen_random_inputs(rng, c, 100);
    VerifyReport r = verify_c2g(c, in, Regime::Plain);
    EXPECT_TRUE(r.ok()) << r.str() << "\n" << format_circuit(c);
  }
}

TEST(C2g, RegimeViolationsAreRejected) {
  EXPECT_THROW(compile_circuit_to_gnn(two_activations_summed("relu"), Regime::Plain), Error);
  CircuitBuilder b(1);
  GateId x1 = b.input(), x2 = b.input();
  b.output(b.add({b.activation("relu", x1), b.add({x2})}));
  EXPECT_THROW(compile_circuit_to_gnn(std::move(b).build(), Regime::ActivationLayers), Error);
  VerifyReport r = verify_c2g(two_activations_summed("relu"), ints({1, 2}), Regime::Plain);
  EXPECT_FALSE(r.compiled);
}

TEST(C2g, SigmoidLayersMatchTheCircuit) {
  EvalOptions lift = campaign_options(Backend::Exact);
  Circuit c = two_activations_summed("sigmoid");
  C2gCompilation comp = compile_circuit_to_gnn(c, Regime::ActivationLayers);
  EXPECT_EQ(comp.gnn.layers()[0].activation, "sigmoid");
  EXPECT_TRUE(comp.plan.layer(1).renumbered);
  CircuitGraph cg = comp.plan.graph_for(ints({6, 9}));
  auto out = eval_cgnn_at(comp.gnn, cg.graph, cg.output_vertices(comp.plan.normalized()), lift);
  const auto& sig = find_activation("sigmoid");
  EXPECT_EQ(out[0][0].to_double(), sig.forward_float(6.0) + sig.forward_float(9.0));
  EvalOptions f = campaign_options(Backend::Float);
  auto outf = eval_cgnn_at(comp.gnn, cg.graph, cg.output_vertices(comp.plan.normalized()), f);
  EXPECT_TRUE(approx_equal(outf[0][0].to_double(), sig.forward_float(6.0) + sig.forward_float(9.0)));
}

TEST(C2g, ReluLayersNeedNoRenumbering) {
  C2gCompilation comp = compile_circuit_to_gnn(two_activations_summed("relu"), Regime::ActivationLayers);
  EXPECT_FALSE(comp.plan.layer(1).renumbered);
  EXPECT_TRUE(verify_c2g(two_activations_summed("relu"), ints({-6, 9}), Regime::ActivationLayers).ok());
}

TEST(C2g, PiecewiseActivationForcesExactRenumbering) {
  Circuit c = two_activations_summed("clamp01");
  C2gCompilation comp = compile_circuit_to_gnn(c, Regime::ActivationLayers);
  const C2gLayer& first = comp.plan.layer(1);
  ASSERT_TRUE(first.renumbered);
  std::vector<Rational> fresh;
  for (GateId g : comp.plan.layer(2).stratum) fresh.push_back(comp.plan.layer(2).numbering.at(g));
  for (const auto& r : fresh) {
    EXPECT_GT(r, 0);
    EXPECT_LT(r, 1);
  }
  for (auto in : {ints({6, 9}), ints({-1, 0}), std::vector<VecK>{VecK({Scalar(Rational(1, 3))}), VecK({Scalar(Rational(3, 4))})}}) {
    VerifyReport r = verify_c2g(c, in, Regime::ActivationLayers);
    EXPECT_TRUE(r.ok()) << r.str();
  }
}

TEST(C2g, IdentityStrataMatchThePlainBuilder) {
  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    CircuitShape shape;
    shape.function_layer = true;
    shape.dim = static_cast<unsigned>(rng.uniform(1, 2));
    Circuit c = gen_random_circuit(rng, Bounds{}, shape);
    C2gPlan act(c, Regime::ActivationLayers);
    C2gPlan plain(c, Regime::Plain);
    for (std::size_t i = 1; i <= act.depth(); ++i) {
      CGnnLayer a = build_layer_family_actlayer(act, i);
      CircuitFamily p = build_layer_family_plain(plain, i);
      EXPECT_EQ(a.activation, "id");
      for (std::size_t arity : {1, 2, 4}) {
        EXPECT_EQ(format_circuit(a.family.circuit(arity)), format_circuit(p.circuit(arity)));
      }
    }
  }
}

TEST(C2g, ActivationRegimesAgreeOnRandomCircuits) {
  Rng rng(43);
  for (Regime regime : {Regime::GatesInFamilies, Regime::ActivationLayers}) {
    for (Backend backend : {Backend::Exact, Backend::Float}) {
      for (int t = 0; t < 40; ++t) {
        CircuitShape shape;
        shape.activations = true;
        shape.require_activation = true;
        shape.function_layer = regime == Regime::ActivationLayers;
        shape.dim = static_cast<unsigned>(rng.uniform(1, 2));
        Circuit c = gen_random_circuit(rng, Bounds{}, shape);
        auto in = gen_random_inputs(rng, c, 100);
        VerifyReport r = verify_c2g(c, in, regime, campaign_options(backend));
        EXPECT_TRUE(r.ok()) << r.str() << "\n" << format_circuit(c);
      }
    }
  }
}

TEST(C2g, MutatedGateIsPinpointed) {
  Circuit good = sum_times_input();
  CircuitBuilder b(1);
  GateId x1 = b.input(), x2 = b.input(), x3 = b.input();
  b.output(b.mul({b.mul({x1, x2}), x3}));
  Circuit bad = std::move(b).build();
  VerifyReport r = verify_c2g(bad, ints({6, 9, 5}), Regime::Plain, {}, &good);
  ASSERT_FALSE(r.match);
  ASSERT_TRUE(r.first.has_value());
  EXPECT_EQ(r.first->layer, 1u);
  EXPECT_EQ(r.first->expected, "15");
  EXPECT_EQ(r.first->actual, "54");
  EXPECT_NE(r.str().find("MISMATCH"), std::string::npos);
}

TEST(C2g, RegimeNames) {
  for (Regime r : {Regime::Plain, Regime::GatesInFamilies, Regime::ActivationLayers}) {
    EXPECT_EQ(parse_regime(to_string(r)), r);
  }
  EXPECT_THROW(parse_regime("other"), ParseError);
}

}  // namespace
}  // namespace gnncirc
