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

#include "trsim/bitstring.hpp"

#include <stdexcept>

namespace trsim {

BitString parse_bits(const std::string& text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring must contain only '0'/'1', got \"" +
                                  text + "\"");
    }
    bits.push_back(static_cast<uint8_t>(c - '0'));
  }
  return bits;
}

std::string format_bits(const BitString& bits) {
  std::string text;
  text.reserve(bits.size());
  for (uint8_t b : bits) text.push_back(b ? '1' : '0');
  return text;
}

uint64_t bits_to_index(const BitString& bits) {
  uint64_t index = 0;
  for (uint8_t b : bits) index = (index << 1) | (b & 1u);
  return index;
}

BitString index_to_bits(uint64_t index, int num_qubits) {
  BitString bits(static_cast<size_t>(num_qubits));
  for (int k = 0; k < num_qubits; ++k) {
    bits[static_cast<size_t>(k)] =
        static_cast<uint8_t>((index >> (num_qubits - 1 - k)) & 1u);
  }
  return bits;
}

}  // namespace trsim
