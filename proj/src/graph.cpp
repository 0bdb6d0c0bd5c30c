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

#include "gnncirc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

#include "gnncirc/circuit_io.hpp"
#include "gnncirc/errors.hpp"
#include "gnncirc/normal_form.hpp"

namespace gnncirc {

LabeledGraph::LabeledGraph(
    std::size_t n, unsigned dim,
    const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    std::vector<VecK> features)
    : dim_(dim), adjacency_(n), features_(std::move(features)) {
  if (dim == 0) throw Error("graph dimension must be at least 1");
  if (features_.size() != n) {
    throw Error("graph has " + std::to_string(n) + " vertices but " +
                std::to_string(features_.size()) + " features");
  }
  for (const auto& f : features_) {
    if (f.dim() != dim) throw Error("feature dimension mismatch");
    if (f.backend() != features_.front().backend()) {
      throw Error("features mix exact and float backends");
    }
  }
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self loop on vertex " + std::to_string(u + 1));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw Error("duplicate edge");
    }
  }
}

Backend LabeledGraph::backend() const {
  return features_.empty() ? Backend::Exact : features_.front().backend();
}

bool LabeledGraph::adjacent(std::size_t u, std::size_t v) const {
  const auto& adj = adjacency_.at(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<std::size_t, std::size_t>> LabeledGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < size(); ++u) {
    for (std::size_t v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

LabeledGraph LabeledGraph::with_features(std::vector<VecK> features) const {
  return LabeledGraph(size(), dim_, edges(), std::move(features));
}

std::vector<VecK> encode_graph(const LabeledGraph& g) {
  const Backend b = g.backend();
  std::vector<VecK> blocks;
  blocks.reserve(g.size() * g.size() + g.size());
  const VecK zero = VecK::zeros(g.dim(), b), one = VecK::ones(g.dim(), b);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      blocks.push_back(g.adjacent(i, j) ? one : zero);
    }
  }
  for (const auto& f : g.features()) blocks.push_back(f);
  return blocks;
}

std::vector<VecK> decode_features(std::span<const VecK> blocks, std::size_t n) {
  if (blocks.size() != n && blocks.size() != n * n + n) {
    throw Error("decode_features: " + std::to_string(blocks.size()) +
                " blocks do not match " + std::to_string(n) + " vertices");
  }
  return std::vector<VecK>(blocks.end() - static_cast<std::ptrdiff_t>(n),
                           blocks.end());
}

GateNumbering number_gates(const Circuit& c) {
  const Measure m = measure(c);
  std::vector<std::pair<std::size_t, GateId>> order;
  for (GateId g = 0; g < c.size(); ++g) {
    if (!c.gate(g).is_source()) order.emplace_back(m.gate_depth[g], g);
  }
  std::sort(order.begin(), order.end());
  GateNumbering nr;
  long next = 1;
  for (auto [d, g] : order) nr.emplace(g, Rational(next++));
  return nr;
}

std::vector<std::size_t> CircuitGraph::output_vertices(const Circuit& c) const {
  std::vector<std::size_t> out;
  for (GateId o : c.outputs()) out.push_back(gate_vertex.at(o));
  return out;
}

CircuitGraph circuit_to_labeled_graph(const Circuit& c, const GateNumbering& nr,
                                      std::span<const VecK> inputs) {
  if (!is_path_length_normal(c)) {
    throw Error("circuit_to_labeled_graph: circuit is not path-length normal");
  }
  if (inputs.size() != c.inputs().size()) {
    throw Error("circuit_to_labeled_graph: expected " +
                std::to_string(c.inputs().size()) + " inputs");
  }
  const Backend b = inputs.empty() ? Backend::Exact : inputs.front().backend();
  std::vector<GateId> order(c.inputs().begin(), c.inputs().end());
  std::vector<std::pair<Rational, GateId>> numbered;
  for (GateId g = 0; g < c.size(); ++g) {
    const Gate& gate = c.gate(g);
    if (gate.op() == GateOp::Const) {
      order.push_back(g);
    } else if (!gate.is_source()) {
      auto it = nr.find(g);
      if (it == nr.end()) {
        throw Error("circuit_to_labeled_graph: gate g" + std::to_string(g) +
                    " has no number");
      }
      numbered.emplace_back(it->second, g);
    }
  }
  std::sort(numbered.begin(), numbered.end());
  for (auto& [num, g] : numbered) order.push_back(g);

  std::map<GateId, std::size_t> gate_vertex;
  for (std::size_t v = 0; v < order.size(); ++v) gate_vertex[order[v]] = v;

  std::vector<VecK> features;
  std::vector<std::string> warnings;
  for (std::size_t v = 0; v < order.size(); ++v) {
    const Gate& gate = c.gate(order[v]);
    if (gate.op() == GateOp::Input) {
      const VecK& x = inputs[std::get<InputGate>(gate.kind).ordinal];
      if (x.dim() != c.dim()) throw Error("input dimension mismatch");
      for (const auto& [g, num] : nr) {
        if (x.is_broadcast_of(Scalar(num).to_backend(b))) {
          warnings.push_back("input " +
                             std::to_string(std::get<InputGate>(gate.kind).ordinal + 1) +
                             " value equals the number of gate g" +
                             std::to_string(g));
        }
      }
      features.push_back(x);
    } else if (gate.op() == GateOp::Const) {
      features.push_back(std::get<ConstGate>(gate.kind).value.to_backend(b));
    } else {
      features.push_back(
          VecK::broadcast(Scalar(nr.at(order[v])).to_backend(b), c.dim()));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (GateId g = 0; g < c.size(); ++g) {
    for (GateId p : c.gate(g).preds) {
      edges.emplace_back(gate_vertex.at(p), gate_vertex.at(g));
    }
  }
  return CircuitGraph{LabeledGraph(order.size(), c.dim(), edges, std::move(features)),
                      std::move(order), std::move(gate_vertex),
                      std::move(warnings)};
}

namespace {

std::size_t parse_index(const std::string& s, std::size_t n) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0 ||
      v > n) {
    throw ParseError("vertex index '" + s + "' out of range 1.." +
                     std::to_string(n));
  }
  return v - 1;
}

}  // namespace

LabeledGraph parse_graph(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty graph description");
  auto header = split_words(lines[0]);
  if (header.size() != 4 || header[0] != "graph" || header[2] != "dim") {
    throw ParseError("graph must start with 'graph <n> dim <k>'");
  }
  std::size_t n = 0;
  unsigned k = 0;
  try {
    n = std::stoul(header[1]);
    k = static_cast<unsigned>(std::stoul(header[3]));
  } catch (const std::exception&) {
    throw ParseError("malformed graph header");
  }
  if (k == 0) throw ParseError("graph dimension must be at least 1");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::optional<VecK>> feats(n);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto w = split_words(lines[li]);
    if (w.size() == 3 && w[0] == "edge") {
      edges.emplace_back(parse_index(w[1], n), parse_index(w[2], n));
    } else if (w.size() == 3 && w[0] == "feat") {
      VecK f = parse_veck(w[2]);
      if (f.dim() != k) throw ParseError("feature dimension mismatch");
      feats[parse_index(w[1], n)] = std::move(f);
    } else {
      throw ParseError("malformed graph line '" + lines[li] + "'");
    }
  }
  Backend b = Backend::Exact;
  for (const auto& f : feats) {
    if (f) b = f->backend();
  }
  std::vector<VecK> features;
  for (auto& f : feats) features.push_back(f ? *f : VecK::zeros(k, b));
  try {
    return LabeledGraph(n, k, edges, std::move(features));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string format_graph(const LabeledGraph& g) {
  std::ostringstream out;
  out << "graph " << g.size() << " dim " << g.dim() << "\n";
  for (auto [u, v] : g.edges()) out << "edge " << u + 1 << " " << v + 1 << "\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    out << "feat " << v + 1 << " " << g.features()[v].str() << "\n";
  }
  return out.str();
}

}  // namespace gnncirc
