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

#include "gnncirc/verify.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "gnncirc/compile_g2c.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/eval.hpp"
#include "gnncirc/normal_form.hpp"

namespace gnncirc {

Bounds parse_bounds(std::string_view text) {
  Bounds b;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("bounds: expected key=value, got '" + std::string(item) + "'");
    }
    std::string_view key = item.substr(0, eq);
    std::string_view val = item.substr(eq + 1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || p != val.data() + val.size() || v <= 0) {
      throw ParseError("bounds: '" + std::string(key) + "' needs a positive integer");
    }
    auto u = static_cast<std::size_t>(v);
    if (key == "n") {
      b.max_n = u;
    } else if (key == "depth") {
      b.max_depth = u;
    } else if (key == "size") {
      b.max_size = u;
    } else if (key == "k") {
      b.dim = static_cast<unsigned>(u);
    } else if (key == "mag") {
      b.magnitude = v;
    } else if (key == "layers") {
      b.max_layers = u;
    } else {
      throw ParseError("bounds: unknown key '" + std::string(key) + "'");
    }
  }
  return b;
}

std::string to_string(const Bounds& b) {
  std::ostringstream os;
  os << "n=" << b.max_n << ",depth=" << b.max_depth << ",size=" << b.max_size
     << ",k=" << b.dim << ",mag=" << b.magnitude << ",layers=" << b.max_layers;
  return os.str();
}

namespace {

VecK random_vec(Rng& rng, unsigned dim, std::int64_t magnitude) {
  std::vector<Scalar> comps;
  for (unsigned i = 0; i < dim; ++i) comps.emplace_back(rng.rational(magnitude));
  return VecK(std::move(comps));
}

constexpr std::int64_t kConstMagnitude = 10;

Circuit gen_general(Rng& rng, const Bounds& bounds, const CircuitShape& shape) {
  const std::size_t max_size = bounds.max_size;
  CircuitBuilder b(shape.dim);
  const auto inputs = static_cast<std::size_t>(
      rng.uniform(1, static_cast<std::int64_t>(std::min<std::size_t>(3, max_size - 1))));
  for (std::size_t i = 0; i < inputs; ++i) b.input();
  const auto outputs = static_cast<std::size_t>(rng.uniform(
      1, static_cast<std::int64_t>(std::min<std::size_t>(2, max_size - inputs))));
  const std::size_t budget = max_size - inputs - outputs;
  const auto internal =
      static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(budget)));

  std::vector<std::string> kinds = {"add", "add", "add", "mul", "mul", "mul", "const"};
  if (shape.dim > 1) kinds.push_back("proj");
  if (shape.activations) kinds.insert(kinds.end(), {"act", "act"});

  std::vector<GateId> pool;  // non-output gates
  for (GateId g = 0; g < inputs; ++g) pool.push_back(g);
  for (std::size_t t = 0; t < internal; ++t) {
    std::vector<GateId> usable;
    for (GateId g : pool) {
      if (b.depth(g) + 2 <= bounds.max_depth) usable.push_back(g);
    }
    const std::string& kind = rng.pick(kinds);
    if (kind == "const" || usable.empty()) {
      pool.push_back(b.constant(random_vec(rng, shape.dim, kConstMagnitude)));
      continue;
    }
    if (kind == "proj") {
      auto from = static_cast<unsigned>(rng.uniform(1, shape.dim));
      auto to = static_cast<unsigned>(rng.uniform(1, shape.dim));
      pool.push_back(b.proj(from, to, rng.pick(usable)));
    } else if (kind == "act") {
      pool.push_back(b.activation(rng.pick(shape.activation_pool), rng.pick(usable)));
    } else {
      rng.shuffle(usable);
      auto fan_in = static_cast<std::size_t>(
          rng.uniform(1, static_cast<std::int64_t>(std::min<std::size_t>(3, usable.size()))));
      std::vector<GateId> preds(usable.begin(), usable.begin() + static_cast<long>(fan_in));
      pool.push_back(kind == "add" ? b.add(preds) : b.mul(preds));
    }
  }
  std::vector<std::size_t> fan_out(b.size(), 0);
  for (GateId g = 0; g < b.size(); ++g) {
    for (GateId p : b.gate(g).preds) ++fan_out[p];
  }
  std::vector<GateId> sinks;
  for (GateId g : pool) {
    if (fan_out[g] == 0 && !b.gate(g).is_source()) sinks.push_back(g);
  }
  for (std::size_t o = 0; o < outputs; ++o) {
    if (!sinks.empty()) {
      std::size_t i = static_cast<std::size_t>(
          rng.uniform(0, static_cast<std::int64_t>(sinks.size()) - 1));
      b.output(sinks[i]);
      sinks.erase(sinks.begin() + static_cast<long>(i));
    } else {
      b.output(rng.pick(pool));
    }
  }
  return std::move(b).build();
}

struct LayeredGen {
  Rng& rng;
  CircuitBuilder& b;
  const CircuitShape& shape;
  std::vector<std::string> level_kind;  // index = level
  std::size_t inputs;
  std::size_t spare;

  std::size_t chain_cost(std::size_t level) const { return level; }

  GateId build(std::size_t level) {
    const std::string& kind = level_kind[level];
    std::vector<GateId> preds;
    std::size_t fan_in = 1;
    if (kind == "add" || kind == "mul") {
      fan_in += static_cast<std::size_t>(rng.uniform(0, 2));
    }
    std::vector<GateId> free_inputs;
    for (GateId g = 0; g < inputs; ++g) free_inputs.push_back(g);
    rng.shuffle(free_inputs);
    for (std::size_t i = 0; i < fan_in; ++i) {
      if (level == 1) {
        const bool want_const = free_inputs.empty() || rng.chance(1, 5);
        if (want_const) {
          if (spare == 0) break;
          --spare;
          preds.push_back(b.constant(random_vec(rng, shape.dim, kConstMagnitude)));
        } else {
          preds.push_back(free_inputs.back());
          free_inputs.pop_back();
        }
      } else {
        if (i > 0) {
          if (spare < chain_cost(level - 1)) break;
          spare -= chain_cost(level - 1);
        }
        preds.push_back(build(level - 1));
      }
    }
    if (preds.empty()) preds.push_back(free_inputs.empty() ? GateId{0} : free_inputs.back());
    if (kind == "add") return b.add(preds);
    if (kind == "mul") return b.mul(preds);
    if (kind == "output") return b.output(preds[0]);
    if (kind.rfind("proj", 0) == 0) {
      auto from = static_cast<unsigned>(kind[5] - '0');
      auto to = static_cast<unsigned>(kind[7] - '0');
      return b.proj(from, to, preds[0]);
    }
    return b.activation(kind, preds[0]);
  }
};

Circuit gen_function_layer(Rng& rng, const Bounds& bounds,
                           const CircuitShape& shape) {
  const std::size_t min_depth = shape.require_activation ? 2 : 1;
  if (bounds.max_depth < min_depth || bounds.max_size < min_depth + 1) {
    throw Error("gen_random_circuit: bounds admit no function-layer circuit");
  }
  const auto depth = static_cast<std::size_t>(rng.uniform(
      static_cast<std::int64_t>(min_depth),
      static_cast<std::int64_t>(std::min(bounds.max_depth, bounds.max_size - 1))));
  const auto inputs = static_cast<std::size_t>(rng.uniform(
      1, static_cast<std::int64_t>(std::min<std::size_t>(3, bounds.max_size - depth))));
  const std::size_t room = bounds.max_size - inputs;
  const auto outputs = static_cast<std::size_t>(
      rng.uniform(1, static_cast<std::int64_t>(std::min<std::size_t>(2, room / depth))));

  std::vector<std::string> kinds = {"add", "mul"};
  if (shape.dim > 1) {
    kinds.push_back("proj:" + std::to_string(rng.uniform(1, shape.dim)) + "," +
                    std::to_string(rng.uniform(1, shape.dim)));
  }
  if (shape.activations) {
    for (const auto& a : shape.activation_pool) kinds.push_back(a);
  }
  std::vector<std::string> level_kind(depth + 1);
  level_kind[depth] = "output";
  bool has_activation = false;
  for (std::size_t l = 1; l < depth; ++l) {
    level_kind[l] = rng.pick(kinds);
    if (std::find(shape.activation_pool.begin(), shape.activation_pool.end(),
                  level_kind[l]) != shape.activation_pool.end()) {
      has_activation = true;
    }
  }
  if (shape.require_activation && !has_activation) {
    level_kind[static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(depth) - 1))] =
        rng.pick(shape.activation_pool);
  }
  CircuitBuilder b(shape.dim);
  for (std::size_t i = 0; i < inputs; ++i) b.input();
  LayeredGen gen{rng, b, shape, level_kind, inputs, room - outputs * depth};
  for (std::size_t o = 0; o < outputs; ++o) gen.build(depth);
  return std::move(b).build();
}

bool contains_activation(const Circuit& c) {
  return std::any_of(c.gates().begin(), c.gates().end(), [](const Gate& g) {
    return g.op() == GateOp::Activation;
  });
}

bool same_scalar(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return approx_equal(a.to_double(), b.to_double());
}

std::optional<Divergence> first_difference(std::span<const VecK> expected,
                                           std::span<const VecK> actual,
                                           std::size_t layer) {
  for (std::size_t v = 0; v < expected.size(); ++v) {
    for (std::size_t j = 0; j < expected[v].dim(); ++j) {
      if (v >= actual.size() || j >= actual[v].dim()) {
        return Divergence{layer, v, j, expected[v][j].str(), "<missing>", ""};
      }
      if (!same_scalar(expected[v][j], actual[v][j])) {
        return Divergence{layer, v, j, expected[v][j].str(), actual[v][j].str(), ""};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Circuit gen_random_circuit(Rng& rng, const Bounds& bounds,
                           const CircuitShape& shape) {
  if (bounds.max_depth == 0 || bounds.max_size < 2 || shape.dim == 0) {
    throw Error("gen_random_circuit: bounds admit no circuit");
  }
  if (shape.function_layer) return gen_function_layer(rng, bounds, shape);
  if (shape.require_activation && (bounds.max_depth < 2 || bounds.max_size < 3)) {
    throw Error("gen_random_circuit: bounds leave no room for an activation gate");
  }
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Circuit c = gen_general(rng, bounds, shape);
    if (!shape.require_activation || contains_activation(c)) return c;
  }
  throw Error("gen_random_circuit: no activation gate after repeated attempts");
}

Circuit gen_random_circuit(const TestSpec& spec, const CircuitShape& shape) {
  Rng rng(spec.seed);
  return gen_random_circuit(rng, spec.bounds, shape);
}

LabeledGraph gen_random_graph(Rng& rng, std::size_t n, unsigned dim,
                              std::int64_t edge_num, std::int64_t edge_den,
                              std::int64_t magnitude) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.chance(edge_num, edge_den)) edges.emplace_back(i, j);
    }
  }
  std::vector<VecK> features;
  for (std::size_t v = 0; v < n; ++v) features.push_back(random_vec(rng, dim, magnitude));
  return LabeledGraph(n, dim, std::move(edges), std::move(features));
}

LabeledGraph gen_random_graph(const TestSpec& spec) {
  Rng rng(spec.seed);
  auto n = static_cast<std::size_t>(
      rng.uniform(1, static_cast<std::int64_t>(spec.bounds.max_n)));
  return gen_random_graph(rng, n, spec.bounds.dim, 1, 2, spec.bounds.magnitude);
}

namespace {

Circuit scaled_tail_sum(unsigned dim, std::size_t arity) {
  CircuitBuilder b(dim);
  GateId own = b.input();
  std::vector<GateId> tail;
  for (std::size_t i = 1; i < arity; ++i) tail.push_back(b.input());
  GateId sum = tail.empty() ? b.constant(Rational(0)) : b.add(tail);
  b.output(b.mul({own, sum}));
  return std::move(b).build();
}

Circuit square_sum(unsigned dim, std::size_t arity) {
  CircuitBuilder b(dim);
  std::vector<GateId> terms = {b.input()};
  for (std::size_t i = 1; i < arity; ++i) {
    GateId t = b.input();
    terms.push_back(b.mul({t, b.add({t})}));
  }
  b.output(b.add(terms));
  return std::move(b).build();
}

Circuit relu_tail_sum(unsigned dim, std::size_t arity) {
  CircuitBuilder b(dim);
  GateId own = b.input();
  std::vector<GateId> tail;
  for (std::size_t i = 1; i < arity; ++i) tail.push_back(b.input());
  if (tail.empty()) {
    b.output(b.add({own}));
  } else {
    b.output(b.add({own, b.activation("relu", b.add(tail))}));
  }
  return std::move(b).build();
}

Scalar random_weight(Rng& rng) {
  if (rng.chance(1, 4)) return Scalar(rng.rational(3));
  return Scalar::integer(static_cast<long>(rng.uniform(-2, 2)));
}

}  // namespace

CGnn gen_random_cgnn(Rng& rng, const Bounds& bounds, Backend backend) {
  const unsigned k = bounds.dim;
  std::vector<std::string> acts = {"id", "id", "relu"};
  if (backend == Backend::Float) acts.insert(acts.end(), {"sigmoid", "tanh"});
  const auto depth = static_cast<std::size_t>(
      rng.uniform(1, static_cast<std::int64_t>(bounds.max_layers)));
  std::vector<CGnnLayer> layers;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::string& act = rng.pick(acts);
    switch (rng.uniform(0, 5)) {
      case 0:
        layers.push_back({family_from_generator("scaled-tail-sum", k,
                                                [k](std::size_t a) { return scaled_tail_sum(k, a); }),
                          act});
        break;
      case 1:
        layers.push_back({family_from_generator("square-sum", k,
                                                [k](std::size_t a) { return square_sum(k, a); }),
                          act});
        break;
      case 2:
        layers.push_back({family_from_generator("relu-tail-sum", k,
                                                [k](std::size_t a) { return relu_tail_sum(k, a); }),
                          act});
        break;
      default: {
        AcGnnLayer ac;
        const std::vector<Aggregation> aggs = {Aggregation::Sum, Aggregation::Sum,
                                               Aggregation::Mean, Aggregation::Product};
        ac.aggregation = rng.pick(aggs);
        ac.self_weights.assign(k, std::vector<Scalar>(k));
        ac.neighbor_weights.assign(k, std::vector<Scalar>(k));
        for (unsigned i = 0; i < k; ++i) {
          for (unsigned j = 0; j < k; ++j) {
            ac.self_weights[i][j] = random_weight(rng);
            ac.neighbor_weights[i][j] = random_weight(rng);
          }
        }
        std::vector<Scalar> bias;
        for (unsigned i = 0; i < k; ++i) bias.push_back(random_weight(rng));
        ac.bias = VecK(std::move(bias));
        ac.activation = act;
        layers.push_back(from_ac_gnn(k, {ac}, Backend::Exact).layers().front());
      }
    }
  }
  return CGnn(k, std::move(layers));
}

CGnn gen_random_cgnn(const TestSpec& spec) {
  Rng rng(spec.seed);
  return gen_random_cgnn(rng, spec.bounds, spec.backend);
}

std::vector<VecK> gen_random_inputs(Rng& rng, const Circuit& c,
                                    std::int64_t magnitude) {
  std::vector<VecK> inputs;
  for (std::size_t i = 0; i < c.inputs().size(); ++i) {
    inputs.push_back(random_vec(rng, c.dim(), magnitude));
  }
  return inputs;
}

std::string VerifyReport::str() const {
  std::ostringstream os;
  if (!compiled) {
    os << "COMPILE-FAILURE " << error;
  } else if (match) {
    os << "match (" << compared << " values)";
  } else {
    os << "MISMATCH";
    if (first) {
      os << " layer " << first->layer << " vertex " << first->vertex + 1
         << " component " << first->component + 1 << ": expected "
         << first->expected << ", got " << first->actual;
      if (!first->context.empty()) os << " | " << first->context;
    }
    if (!error.empty()) os << " " << error;
  }
  return os.str();
}

VerifyReport verify_g2c(const CGnn& net, const LabeledGraph& g,
                        const EvalOptions& options) {
  VerifyReport report;
  std::vector<VecK> from_circuit;
  try {
    G2cPlan plan = compile_gnn_to_circuit_family(net);
    const Circuit& kn = plan.circuit(g.size());
    from_circuit = decode_features(eval_circuit(kn, encode_graph(g), options), g.size());
  } catch (const std::exception& e) {
    report.compiled = false;
    report.error = e.what();
    return report;
  }
  const std::size_t depth = net.depth();
  std::vector<std::vector<VecK>> trace = eval_cgnn_trace(net, g, options);
  const auto& expected = trace.back();
  for (const auto& v : expected) report.compared += v.dim();
  if (auto d = first_difference(expected, from_circuit, depth)) {
    std::ostringstream ctx;
    ctx << "trace of vertex " << d->vertex + 1 << ":";
    for (const auto& row : trace) ctx << " (" << row[d->vertex].str() << ")";
    d->context = ctx.str();
    report.match = false;
    report.first = std::move(*d);
  }
  return report;
}

namespace {

// First live vertex whose traced value differs from the value the layer
// should hold: the gate's number while pending, its value once evaluated.
std::optional<Divergence> scan_live_trace(const C2gCompilation& comp,
                                          const CircuitGraph& cg,
                                          const Circuit& reference_normal,
                                          std::span<const VecK> inputs,
                                          const EvalOptions& options) {
  const C2gPlan& plan = comp.plan;
  const Circuit& nc = plan.normalized();
  if (reference_normal.size() != nc.size()) return std::nullopt;
  std::vector<VecK> values = eval_all_gates(reference_normal, inputs, options);
  auto trace = eval_cgnn_trace(comp.gnn, cg.graph, options);
  const unsigned k = nc.dim();
  for (std::size_t layer = 1; layer < trace.size(); ++layer) {
    for (std::size_t v = 0; v < cg.vertex_gate.size(); ++v) {
      GateId g = cg.vertex_gate[v];
      if (nc.gate(g).is_source() || !plan.live(g, layer)) continue;
      VecK want = layer == plan.measures().gate_depth[g]
                      ? values[g]
                      : VecK::broadcast(Scalar(plan.number_after(g, layer)), k);
      auto d = first_difference(std::span<const VecK>(&want, 1),
                                std::span<const VecK>(&trace[layer][v], 1), layer);
      if (d) {
        d->vertex = v;
        d->context = "gate g" + std::to_string(g) + " " + kind_label(nc.gate(g).kind);
        return d;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

VerifyReport verify_c2g(const Circuit& c, std::span<const VecK> inputs,
                        Regime regime, const EvalOptions& options,
                        const Circuit* reference) {
  VerifyReport report;
  const Circuit& ref = reference ? *reference : c;
  std::optional<C2gCompilation> comp;
  try {
    comp.emplace(compile_circuit_to_gnn(c, regime));
  } catch (const std::exception& e) {
    report.compiled = false;
    report.error = e.what();
    return report;
  }
  CircuitGraph cg = comp->plan.graph_for(inputs);
  const auto outs = cg.output_vertices(comp->plan.normalized());
  std::vector<VecK> expected = eval_circuit(ref, inputs, options);
  std::vector<VecK> actual = eval_cgnn_at(comp->gnn, cg.graph, outs, options);
  for (const auto& v : expected) report.compared += v.dim();
  if (auto d = first_difference(expected, actual, comp->gnn.depth())) {
    report.match = false;
    d->vertex = outs.at(d->vertex);
    d->context = "output";
    report.first = std::move(*d);
    Circuit ref_normal = to_path_length_normal_form(ref);
    if (auto live = scan_live_trace(*comp, cg, ref_normal, inputs, options)) {
      report.first = std::move(*live);
    }
  }
  return report;
}

EvalOptions campaign_options(Backend backend) {
  EvalOptions o;
  o.backend = backend;
  o.lift_float_activations = backend == Backend::Exact;
  return o;
}

namespace {

std::string instance_line(std::string_view mode, std::size_t index,
                          const std::string& shape, const VerifyReport& r) {
  std::ostringstream os;
  os << mode << " #" << index + 1 << " " << shape << " : " << r.str() << "\n";
  return os.str();
}

void tally(CampaignReport& report, const VerifyReport& r) {
  ++report.instances;
  if (!r.compiled) {
    ++report.failures;
  } else if (!r.match) {
    ++report.mismatches;
  }
}

void summarize(CampaignReport& report, const TestSpec& spec) {
  std::ostringstream os;
  os << "summary seed=" << spec.seed << " bounds=" << to_string(spec.bounds)
     << " backend=" << to_string(spec.backend) << " instances=" << report.instances
     << " mismatches=" << report.mismatches << " failures=" << report.failures << "\n";
  report.text += os.str();
}

}  // namespace

CampaignReport run_g2c_campaign(const TestSpec& spec) {
  CampaignReport report;
  Rng master(spec.seed);
  const EvalOptions options = campaign_options(spec.backend);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Rng rng(master.next());
    Bounds b = spec.bounds;
    b.dim = static_cast<unsigned>(rng.uniform(1, spec.bounds.dim));
    CGnn net = gen_random_cgnn(rng, b, spec.backend);
    auto n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(b.max_n)));
    LabeledGraph g = gen_random_graph(rng, n, b.dim, 1, 2, b.magnitude);
    VerifyReport r = verify_g2c(net, g, options);
    tally(report, r);
    std::ostringstream shape;
    shape << "n=" << n << " k=" << b.dim << " layers=" << net.depth()
          << " edges=" << g.edges().size();
    report.text += instance_line("g2c", i, shape.str(), r);
  }
  summarize(report, spec);
  return report;
}

CampaignReport run_c2g_campaign(const TestSpec& spec, Regime regime) {
  CampaignReport report;
  Rng master(spec.seed);
  const EvalOptions options = campaign_options(spec.backend);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Rng rng(master.next());
    CircuitShape shape;
    shape.dim = static_cast<unsigned>(rng.uniform(1, spec.bounds.dim));
    shape.activations = regime != Regime::Plain;
    shape.require_activation = shape.activations;
    shape.function_layer = regime == Regime::ActivationLayers;
    Circuit c = gen_random_circuit(rng, spec.bounds, shape);
    std::vector<VecK> inputs = gen_random_inputs(rng, c, spec.bounds.magnitude);
    VerifyReport r = verify_c2g(c, inputs, regime, options);
    tally(report, r);
    const Measure m = measure(c);
    std::ostringstream desc;
    desc << "regime=" << to_string(regime) << " k=" << c.dim() << " size=" << m.size
         << " depth=" << m.depth;
    report.text += instance_line("c2g", i, desc.str(), r);
  }
  summarize(report, spec);
  return report;
}

}  // namespace gnncirc
