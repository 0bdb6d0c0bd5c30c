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

#include "gnncirc/circuit_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gnncirc/errors.hpp"

namespace gnncirc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("malformed " + std::string(what) + " '" + std::string(s) +
                     "'");
  }
  return v;
}

std::uint64_t parse_gate_ref(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != 'g') {
    throw ParseError("malformed gate reference '" + std::string(s) + "'");
  }
  return parse_uint(s.substr(1), "gate id");
}

std::size_t parse_ordinal(std::string_view s) {
  auto v = parse_uint(s, "ordinal");
  if (v == 0) throw ParseError("ordinals are 1-based");
  return static_cast<std::size_t>(v - 1);
}

GateKind parse_kind(std::string_view token) {
  auto colon = token.find(':');
  std::string_view head = token.substr(0, colon);
  std::string_view arg =
      colon == std::string_view::npos ? std::string_view() : token.substr(colon + 1);
  auto need_arg = [&](bool want) {
    if (want == (colon == std::string_view::npos)) {
      throw ParseError("malformed gate kind '" + std::string(token) + "'");
    }
  };
  if (head == "INPUT") {
    need_arg(true);
    return InputGate{parse_ordinal(arg)};
  }
  if (head == "OUTPUT") {
    need_arg(true);
    return OutputGate{parse_ordinal(arg)};
  }
  if (head == "CONST") {
    need_arg(true);
    return ConstGate{parse_veck(arg)};
  }
  if (head == "PROJ") {
    need_arg(true);
    auto comma = arg.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("PROJ needs two indices");
    }
    return ProjGate{
        static_cast<unsigned>(parse_uint(arg.substr(0, comma), "index")),
        static_cast<unsigned>(parse_uint(arg.substr(comma + 1), "index"))};
  }
  if (head == "ADD") {
    need_arg(false);
    return AddGate{};
  }
  if (head == "MUL") {
    need_arg(false);
    return MulGate{};
  }
  if (head == "ACT") {
    need_arg(true);
    if (arg.empty()) throw ParseError("ACT needs a name");
    return ActivationGate{std::string(arg)};
  }
  throw ParseError("unknown gate kind '" + std::string(token) + "'");
}

std::string kind_text(const GateKind& kind) {
  if (const auto* k = std::get_if<InputGate>(&kind)) {
    return "INPUT:" + std::to_string(k->ordinal + 1);
  }
  if (const auto* k = std::get_if<OutputGate>(&kind)) {
    return "OUTPUT:" + std::to_string(k->ordinal + 1);
  }
  if (const auto* k = std::get_if<ConstGate>(&kind)) {
    return "CONST:" + k->value.str();
  }
  return kind_label(kind);
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return fnv1a(h, std::string_view(reinterpret_cast<const char*>(&v), sizeof v));
}

}  // namespace

std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

Circuit parse_circuit(std::string_view text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty circuit description");
  auto header = split_words(lines[0]);
  if (header.size() != 2 || header[0] != "dim") {
    throw ParseError("circuit must start with 'dim <k>'");
  }
  auto dim = parse_uint(header[1], "dimension");
  if (dim == 0) throw ParseError("dimension must be at least 1");

  struct Pending {
    std::uint64_t id;
    GateKind kind;
    std::vector<std::uint64_t> preds;
  };
  std::vector<Pending> pending;
  std::map<std::uint64_t, GateId> dense;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    std::string_view head = line, tail;
    auto arrow = line.find("<-");
    if (arrow != std::string_view::npos) {
      head = trim(line.substr(0, arrow));
      tail = trim(line.substr(arrow + 2));
    }
    auto words = split_words(head);
    if (words.size() != 2) {
      throw ParseError("line " + std::to_string(li + 1) +
                       ": expected 'g<ID> <KIND>'");
    }
    Pending p{parse_gate_ref(words[0]), parse_kind(words[1]), {}};
    if (arrow != std::string_view::npos) {
      if (tail.empty()) {
        throw ParseError("line " + std::to_string(li + 1) +
                         ": empty predecessor list");
      }
      std::size_t start = 0;
      while (true) {
        auto comma = tail.find(',', start);
        p.preds.push_back(parse_gate_ref(tail.substr(
            start, comma == std::string_view::npos ? std::string_view::npos
                                                   : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    if (!dense.emplace(p.id, static_cast<GateId>(pending.size())).second) {
      throw ParseError("duplicate gate id g" + std::to_string(p.id));
    }
    pending.push_back(std::move(p));
  }

  CircuitBuilder b(static_cast<unsigned>(dim));
  for (auto& p : pending) {
    std::vector<GateId> preds;
    for (auto id : p.preds) {
      auto it = dense.find(id);
      if (it == dense.end()) {
        throw ParseError("reference to undefined gate g" + std::to_string(id));
      }
      preds.push_back(it->second);
    }
    b.raw(std::move(p.kind), std::move(preds));
  }
  return std::move(b).build();
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "dim " << c.dim() << "\n";
  for (GateId g = 0; g < c.size(); ++g) {
    const Gate& gate = c.gate(g);
    out << "g" << g << " " << kind_text(gate.kind);
    if (!gate.preds.empty()) {
      out << " <- ";
      for (std::size_t i = 0; i < gate.preds.size(); ++i) {
        if (i) out << ",";
        out << "g" << gate.preds[i];
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write '" + path.string() + "'");
  out << text;
}

Circuit read_circuit_file(const std::filesystem::path& path) {
  return parse_circuit(read_text_file(path));
}

std::vector<VecK> parse_input_list(std::string_view text, unsigned dim) {
  std::vector<VecK> out;
  text = trim(text);
  if (text.empty()) return out;
  if (text.find(';') == std::string_view::npos && dim == 1) {
    VecK flat = parse_veck(text);
    for (const auto& s : flat.components()) out.push_back(VecK({s}));
    return out;
  }
  std::size_t start = 0;
  while (true) {
    auto semi = text.find(';', start);
    auto piece = trim(text.substr(
        start, semi == std::string_view::npos ? std::string_view::npos
                                              : semi - start));
    VecK v = parse_veck(piece);
    if (v.dim() != dim) {
      throw ParseError("input '" + std::string(piece) + "' has dimension " +
                       std::to_string(v.dim()) + ", expected " +
                       std::to_string(dim));
    }
    out.push_back(std::move(v));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

std::uint64_t structural_hash(const Circuit& c) {
  require_valid(c, "structural_hash");
  std::vector<std::uint64_t> h(c.size());
  for (GateId g : c.topological_order()) {
    const Gate& gate = c.gate(g);
    std::uint64_t v = fnv1a(14695981039346656037ULL, kind_text(gate.kind));
    for (GateId p : gate.preds) v = mix(v, h[p]);
    h[g] = v;
  }
  std::uint64_t out = mix(fnv1a(14695981039346656037ULL, "circuit"), c.dim());
  out = mix(out, c.inputs().size());
  for (GateId o : c.outputs()) out = mix(out, h[o]);
  return out;
}

}  // namespace gnncirc
