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

#include <string>
#include <vector>

#include "gnncirc/circuit.hpp"

namespace gnncirc {

// Input and Const gates are the sources of a circuit. Path lengths are
// measured from sources, so constants are aligned like inputs.

// All source-to-output paths share one length and every gate other than
// inputs and outputs has exactly one successor.
bool is_path_length_normal(const Circuit& c);

// Expands the circuit into a tree over its (shared) input gates, copying
// every other gate once per path to an output, and pads short paths with
// unary Add gates right after their source. Gates that reach no output are
// dropped; all input gates are kept.
Circuit to_path_length_normal_form(const Circuit& c);

// Path-length normal and every depth stratum above the sources holds a
// single gate type (ADD, MUL, OUTPUT, each ACT:<name>, each PROJ:<i>,<j>).
bool is_function_layer_form(const Circuit& c);

// Problems found when checking that every wire is consumed exactly one
// depth level after it is produced. Empty for path-length normal circuits.
std::vector<std::string> liveness_audit(const Circuit& c);

}  // namespace gnncirc
