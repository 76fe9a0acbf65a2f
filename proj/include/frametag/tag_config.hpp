// Copyright 2026 The Frametag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRAMETAG_TAG_CONFIG_HPP_
#define FRAMETAG_TAG_CONFIG_HPP_

#include <cstdint>

#include "frametag/errors.hpp"

namespace frametag {

/// Geometry of the tagged-word encoding.
///
/// An address word uses the low `addr_bits` bits; the top `spare_bits` bits
/// carry the tag: flag at bit 63, tag field of width `spare_bits - 1`
/// immediately below it. The slot exponent is pinned to `spare_bits - 1` so
/// that a within-slot offset always fits the tag field exactly.
struct TagConfig {
  std::uint32_t addr_bits = 48;   // significant address bits
  std::uint32_t spare_bits = 16;  // tag bits including the flag
  std::uint64_t header_size = 16; // bytes of per-object metadata header

  constexpr std::uint32_t slot_exp() const { return spare_bits - 1; }
  constexpr std::uint64_t slot_size() const {
    return std::uint64_t{1} << slot_exp();
  }
  constexpr std::uint64_t addr_limit() const {
    return std::uint64_t{1} << addr_bits;
  }
  constexpr std::uint64_t addr_mask() const { return addr_limit() - 1; }

  /// 16-bit spare bits: 15-bit tag field, 2^15-byte slots.
  static constexpr TagConfig classic() { return TagConfig{48, 16, 16}; }
  /// Top-byte tagging: 7-bit tag field, 2^7-byte slots.
  static constexpr TagConfig tbi() { return TagConfig{48, 8, 16}; }

  void validate() const {
    if (spare_bits < 2 || spare_bits > 16)
      throw UsageError("TagConfig: spare_bits must be in [2, 16]");
    if (addr_bits < 12 || addr_bits + spare_bits > 64)
      throw UsageError("TagConfig: addr_bits out of range");
    if (header_size < 16 || (header_size & (header_size - 1)) != 0)
      throw UsageError("TagConfig: header_size must be a power of two >= 16");
  }

  bool operator==(const TagConfig&) const = default;
};

}  // namespace frametag

#endif  // FRAMETAG_TAG_CONFIG_HPP_
