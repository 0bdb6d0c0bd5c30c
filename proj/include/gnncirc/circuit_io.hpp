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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

// Text format, one gate per line after a `dim <k>` header:
//   g<ID> <KIND> [<- g<ID>,...]
// with KIND one of INPUT:<ord>, OUTPUT:<ord>, CONST:<v1,...,vk>,
// PROJ:<i>,<j>, ADD, MUL, ACT:<name>. Ordinals and projection indices are
// 1-based. `#` starts a comment. Ids are arbitrary distinct integers and
// are renumbered densely in order of appearance.
Circuit parse_circuit(std::string_view text);
std::string format_circuit(const Circuit& c);

Circuit read_circuit_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Parses "a,b;c,d" (vectors separated by ';' or whitespace-free lists of
// scalars when every vector has one component: "6,9,5").
std::vector<VecK> parse_input_list(std::string_view text, unsigned dim);

// Id-independent hash of the DAG reachable from the outputs, sensitive to
// gate kinds, constants, predecessor order and input/output ordinals.
std::uint64_t structural_hash(const Circuit& c);

// Splits into trimmed non-empty lines with comments removed.
std::vector<std::string> content_lines(std::string_view text);
std::vector<std::string> split_words(std::string_view line);

}  // namespace gnncirc
