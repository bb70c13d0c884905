// Copyright 2026 The trsim Authors
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
#include <string>
#include <vector>

namespace trsim {

/// Computational-basis bitstring. Element k is the state of qubit k.
/// Qubit 0 is the most significant bit of the dense basis index; this
/// convention is fixed project-wide.
using BitString = std::vector<uint8_t>;

/// Parses a string of '0'/'1' characters. Throws on any other character.
BitString parse_bits(const std::string& text);

/// Renders a bitstring as a '0'/'1' string.
std::string format_bits(const BitString& bits);

/// Dense basis index of a bitstring (qubit 0 = MSB).
uint64_t bits_to_index(const BitString& bits);

/// Inverse of bits_to_index for a register of `num_qubits` qubits.
BitString index_to_bits(uint64_t index, int num_qubits);

}  // namespace trsim
