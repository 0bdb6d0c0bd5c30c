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

#include "gnncirc/cgnn.hpp"

#include <optional>
#include <sstream>

#include "gnncirc/activation.hpp"
#include "gnncirc/circuit_io.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/gadgets.hpp"

namespace gnncirc {

CGnn::CGnn(unsigned dim, std::vector<CGnnLayer> layers)
    : dim_(dim), layers_(std::move(layers)) {
  if (layers_.empty()) throw Error("a C-GNN needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].family.dim() != dim) {
      throw Error("layer " + std::to_string(i + 1) + " has dimension " +
                  std::to_string(layers_[i].family.dim()) +
                  ", model dimension is " + std::to_string(dim));
    }
    find_activation(layers_[i].activation);
  }
}

namespace {

Backend backend_for(const LabeledGraph& g, const EvalOptions& options) {
  return options.backend.value_or(g.backend());
}

VecK update_vertex(const CGnnLayer& layer, const std::vector<VecK>& prev,
                   const LabeledGraph& g, std::size_t v,
                   const EvalOptions& options) {
  std::vector<VecK> args;
  args.reserve(g.neighbors(v).size() + 1);
  args.push_back(prev[v]);
  for (std::size_t u : g.neighbors(v)) args.push_back(prev[u]);
  VecK out = eval_circuit(layer.family.circuit(args.size()), args, options)[0];
  const ActivationFn& act = find_activation(layer.activation);
  if (act.is_identity()) return out;
  return activation_apply(act, out, options.lift_float_activations);
}

std::vector<VecK> initial_features(const CGnn& net, const LabeledGraph& g,
                                   const EvalOptions& options) {
  if (g.dim() != net.dim()) {
    throw Error("graph dimension " + std::to_string(g.dim()) +
                " differs from model dimension " + std::to_string(net.dim()));
  }
  Backend b = backend_for(g, options);
  if (b == Backend::Exact && g.backend() == Backend::Float) {
    throw Error("float features on the exact backend");
  }
  std::vector<VecK> h;
  for (const auto& f : g.features()) h.push_back(f.to_backend(b));
  return h;
}

EvalOptions with_backend(const LabeledGraph& g, EvalOptions options) {
  options.backend = backend_for(g, options);
  return options;
}

}  // namespace

std::vector<std::vector<VecK>> eval_cgnn_trace(const CGnn& net,
                                               const LabeledGraph& g,
                                               const EvalOptions& options) {
  const EvalOptions opts = with_backend(g, options);
  std::vector<std::vector<VecK>> trace;
  trace.push_back(initial_features(net, g, opts));
  for (const auto& layer : net.layers()) {
    const auto& prev = trace.back();
    std::vector<VecK> next;
    next.reserve(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      next.push_back(update_vertex(layer, prev, g, v, opts));
    }
    trace.push_back(std::move(next));
  }
  return trace;
}

LabeledGraph eval_cgnn(const CGnn& net, const LabeledGraph& g,
                       const EvalOptions& options) {
  auto trace = eval_cgnn_trace(net, g, options);
  return g.with_features(std::move(trace.back()));
}

std::vector<VecK> eval_cgnn_at(const CGnn& net, const LabeledGraph& g,
                               std::span<const std::size_t> vertices,
                               const EvalOptions& options) {
  const EvalOptions opts = with_backend(g, options);
  const std::vector<VecK> h0 = initial_features(net, g, opts);
  const std::size_t d = net.depth();
  std::vector<std::vector<std::optional<VecK>>> memo(
      d + 1, std::vector<std::optional<VecK>>(g.size()));
  for (std::size_t v = 0; v < g.size(); ++v) memo[0][v] = h0[v];

  auto value = [&](auto&& self, std::size_t layer,
                   std::size_t v) -> const VecK& {
    auto& slot = memo[layer][v];
    if (slot) return *slot;
    std::vector<VecK> args;
    args.push_back(self(self, layer - 1, v));
    for (std::size_t u : g.neighbors(v)) args.push_back(self(self, layer - 1, u));
    const CGnnLayer& spec = net.layers()[layer - 1];
    VecK out = eval_circuit(spec.family.circuit(args.size()), args, opts)[0];
    const ActivationFn& act = find_activation(spec.activation);
    if (!act.is_identity()) {
      out = activation_apply(act, out, opts.lift_float_activations);
    }
    slot = std::move(out);
    return *slot;
  };
  std::vector<VecK> out;
  for (std::size_t v : vertices) {
    if (v >= g.size()) throw Error("eval_cgnn_at: vertex out of range");
    out.push_back(value(value, d, v));
  }
  return out;
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Sum:
      return "sum";
    case Aggregation::Product:
      return "product";
    case Aggregation::Mean:
      return "mean";
  }
  return "sum";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "sum") return Aggregation::Sum;
  if (name == "product") return Aggregation::Product;
  if (name == "mean") return Aggregation::Mean;
  throw ParseError("unknown aggregation '" + std::string(name) + "'");
}

namespace {

void check_matrix(const std::vector<std::vector<Scalar>>& m, unsigned dim,
                  const char* what) {
  if (m.size() != dim) {
    throw Error(std::string(what) + " matrix must have " +
                std::to_string(dim) + " rows");
  }
  for (const auto& row : m) {
    if (row.size() != dim) {
      throw Error(std::string(what) + " matrix rows must have " +
                  std::to_string(dim) + " entries");
    }
  }
}

bool has_float(const std::vector<std::vector<Scalar>>& m) {
  for (const auto& row : m) {
    for (const auto& s : row) {
      if (!s.is_exact()) return true;
    }
  }
  return false;
}

bool all_zero(const std::vector<std::vector<Scalar>>& m) {
  for (const auto& row : m) {
    for (const auto& s : row) {
      if (!s.is_zero()) return false;
    }
  }
  return true;
}

// Terms of M x as wires: M[j][i] * x_i placed at position j.
void emit_matrix_terms(CircuitBuilder& b,
                       const std::vector<std::vector<Scalar>>& m, GateId x,
                       std::vector<GateId>& terms) {
  const unsigned k = b.dim();
  for (unsigned j = 0; j < k; ++j) {
    for (unsigned i = 0; i < k; ++i) {
      const Scalar& w = m[j][i];
      if (w.is_zero()) continue;
      GateId moved = b.proj(i + 1, j + 1, x);
      terms.push_back(b.mul({b.constant(w), moved}));
    }
  }
}

}  // namespace

CGnn from_ac_gnn(unsigned dim, const std::vector<AcGnnLayer>& layers,
                 Backend target) {
  std::vector<CGnnLayer> out;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const AcGnnLayer& spec = layers[li];
    check_matrix(spec.self_weights, dim, "self");
    check_matrix(spec.neighbor_weights, dim, "neighbor");
    if (spec.bias.dim() != dim) throw Error("bias dimension mismatch");
    if (target == Backend::Exact &&
        (has_float(spec.self_weights) || has_float(spec.neighbor_weights) ||
         spec.bias.backend() == Backend::Float)) {
      throw Error("layer " + std::to_string(li + 1) +
                  ": float combine parameters on the exact backend");
    }
    find_activation(spec.activation);
    std::set<std::string> acts;
    std::optional<CircuitFamily> custom;
    if (const auto* fam = std::get_if<CircuitFamily>(&spec.aggregation)) {
      acts = fam->activations();
      custom = *fam;
    }
    auto gen = [dim, spec](std::size_t arity) {
      CircuitBuilder b(dim);
      GateId own = b.input();
      std::vector<GateId> tail;
      for (std::size_t i = 1; i < arity; ++i) tail.push_back(b.input());
      std::vector<GateId> terms;
      emit_matrix_terms(b, spec.self_weights, own, terms);
      if (!all_zero(spec.neighbor_weights)) {
        GateId agg = 0;
        if (tail.empty()) {
          const bool product =
              std::holds_alternative<Aggregation>(spec.aggregation) &&
              std::get<Aggregation>(spec.aggregation) == Aggregation::Product;
          agg = b.constant(Rational(product ? 1 : 0));
        } else if (const auto* fam =
                       std::get_if<CircuitFamily>(&spec.aggregation)) {
          agg = splice(b, fam->circuit(tail.size()), tail)[0];
        } else {
          switch (std::get<Aggregation>(spec.aggregation)) {
            case Aggregation::Sum:
              agg = b.add(tail);
              break;
            case Aggregation::Product:
              agg = b.mul(tail);
              break;
            case Aggregation::Mean:
              agg = b.mul({b.constant(Rational(1, tail.size())), b.add(tail)});
              break;
          }
        }
        emit_matrix_terms(b, spec.neighbor_weights, agg, terms);
      }
      terms.push_back(b.constant(spec.bias));
      b.output(b.add(terms));
      return std::move(b).build();
    };
    // Each weight costs Const, Proj and Mul; the aggregation sits below
    // Proj -> Mul -> Add -> Output.
    auto agg_size = [custom](std::size_t arity) -> std::size_t {
      return custom && arity > 1 ? custom->size_bound(arity - 1) : 3;
    };
    auto agg_depth = [custom](std::size_t arity) -> std::size_t {
      return custom && arity > 1 ? custom->depth_bound(arity - 1) : 2;
    };
    auto size = [dim, agg_size](std::size_t arity) {
      return arity + 6 * dim * dim + agg_size(arity) + 3;
    };
    auto depth = [agg_depth](std::size_t arity) { return agg_depth(arity) + 4; };
    std::string name = "ac-layer-" + std::to_string(li + 1);
    out.push_back(CGnnLayer{
        CircuitFamily(name, dim, gen, size, depth, acts),
        spec.activation});
  }
  return CGnn(dim, std::move(out));
}

AcGnnLayer parse_combine(std::string_view text, unsigned dim) {
  AcGnnLayer layer;
  bool have_bias = false;
  for (const auto& line : content_lines(text)) {
    auto w = split_words(line);
    if (w.size() != 2) throw ParseError("malformed combine line '" + line + "'");
    VecK row = parse_veck(w[1]);
    if (row.dim() != dim) {
      throw ParseError("combine row '" + line + "' must have " +
                       std::to_string(dim) + " entries");
    }
    if (w[0] == "self") {
      layer.self_weights.push_back(row.components());
    } else if (w[0] == "neigh") {
      layer.neighbor_weights.push_back(row.components());
    } else if (w[0] == "bias") {
      layer.bias = row;
      have_bias = true;
    } else {
      throw ParseError("unknown combine entry '" + w[0] + "'");
    }
  }
  if (layer.self_weights.size() != dim || layer.neighbor_weights.size() != dim ||
      !have_bias) {
    throw ParseError("combine file needs " + std::to_string(dim) +
                     " self rows, " + std::to_string(dim) +
                     " neigh rows and a bias");
  }
  return layer;
}

namespace {

std::string substitute_arity(const std::string& tmpl, std::size_t n) {
  auto pos = tmpl.find("{n}");
  if (pos == std::string::npos) {
    throw ParseError("family template '" + tmpl + "' lacks '{n}'");
  }
  std::string out = tmpl;
  out.replace(pos, 3, std::to_string(n));
  return out;
}

}  // namespace

CGnn parse_cgnn(std::string_view text, const std::filesystem::path& base_dir) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty C-GNN description");
  auto header = split_words(lines[0]);
  if (header.size() != 5 || header[0] != "cgnn" || header[1] != "dim" ||
      header[3] != "depth") {
    throw ParseError("C-GNN must start with 'cgnn dim <k> depth <d>'");
  }
  unsigned dim = 0;
  std::size_t depth = 0;
  try {
    dim = static_cast<unsigned>(std::stoul(header[2]));
    depth = std::stoul(header[4]);
  } catch (const std::exception&) {
    throw ParseError("malformed C-GNN header");
  }
  if (lines.size() != depth + 1) {
    throw ParseError("C-GNN declares depth " + std::to_string(depth) +
                     " but has " + std::to_string(lines.size() - 1) +
                     " layer lines");
  }
  std::vector<CGnnLayer> layers;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto w = split_words(lines[i]);
    if (w.size() == 5 && w[0] == "layer" && w[1] == "builtin") {
      AcGnnLayer spec = parse_combine(read_text_file(base_dir / w[3]), dim);
      spec.aggregation = parse_aggregation(w[2]);
      spec.activation = w[4];
      if (!is_registered_activation(spec.activation)) {
        throw ParseError("unknown activation '" + spec.activation + "'");
      }
      layers.push_back(from_ac_gnn(dim, {spec}).layers()[0]);
    } else if (w.size() == 4 && w[0] == "layer" && w[1] == "family") {
      std::string tmpl = (base_dir / w[2]).string();
      substitute_arity(tmpl, 1);
      if (!is_registered_activation(w[3])) {
        throw ParseError("unknown activation '" + w[3] + "'");
      }
      auto gen = [tmpl](std::size_t n) {
        return read_circuit_file(substitute_arity(tmpl, n));
      };
      layers.push_back(
          CGnnLayer{family_from_generator(w[2], dim, gen), w[3]});
    } else {
      throw ParseError("malformed layer line '" + lines[i] + "'");
    }
  }
  return CGnn(dim, std::move(layers));
}

CGnn read_cgnn_file(const std::filesystem::path& path) {
  return parse_cgnn(read_text_file(path), path.parent_path());
}

std::filesystem::path write_cgnn_files(const CGnn& net,
                                       const std::filesystem::path& dir,
                                       std::string_view stem,
                                       std::span<const std::size_t> arities) {
  std::filesystem::create_directories(dir);
  std::ostringstream desc;
  desc << "cgnn dim " << net.dim() << " depth " << net.depth() << "\n";
  for (std::size_t i = 0; i < net.depth(); ++i) {
    const auto& layer = net.layers()[i];
    std::string tmpl =
        std::string(stem) + "_layer" + std::to_string(i + 1) + "_{n}.circ";
    for (std::size_t n : arities) {
      write_text_file(dir / substitute_arity(tmpl, n),
                      format_circuit(layer.family.circuit(n)));
    }
    desc << "layer family " << tmpl << " " << layer.activation << "\n";
  }
  auto path = dir / (std::string(stem) + ".cgnn");
  write_text_file(path, desc.str());
  return path;
}

}  // namespace gnncirc
