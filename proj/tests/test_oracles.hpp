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

#ifndef FRAMETAG_TESTS_TEST_ORACLES_HPP_
#define FRAMETAG_TESTS_TEST_ORACLES_HPP_

// Independent reference computations the tests check the library against.
// Everything here is deliberately brute force and shares no helpers with
// the implementation.

#include <cstdint>

namespace test_oracles {

// Smallest N with lo>>N == hi>>N, found by linear scan.
inline std::uint32_t scan_wrapper_exp(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint32_t n = 0; n < 64; ++n)
    if ((lo >> n) == (hi >> n)) return n;
  return 64;
}

// Frame base of the scan result, without reusing the library's masking.
inline std::uint64_t scan_wrapper_base(std::uint64_t lo, std::uint64_t hi) {
  const std::uint32_t n = scan_wrapper_exp(lo, hi);
  return (lo >> n) << n;
}

// Does the frame with exponent `exp` based at `base` contain [lo, hi]?
inline bool frame_contains(std::uint64_t base, std::uint32_t exp,
                           std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t size = std::uint64_t{1} << exp;
  return base % size == 0 && base <= lo && hi <= base + (size - 1);
}

// Bit packing recomputed from first principles: shift each piece into
// place independently of the encoder.
inline std::uint64_t pack_word(std::uint64_t addr, bool flag,
                               std::uint64_t field,
                               std::uint32_t spare_bits) {
  std::uint64_t v = addr;
  v |= field << (64u - spare_bits);
  if (flag) v |= std::uint64_t{1} << 63;
  return v;
}

// Same-frame test by shifted comparison instead of XOR.
inline bool same_frame(std::uint64_t a, std::uint64_t b, std::uint32_t exp) {
  return (a >> exp) == (b >> exp);
}

// In-slot metadata derivation by division rather than masking.
inline std::uint64_t slot_md(std::uint64_t addr, std::uint32_t slot_exp,
                             std::uint64_t offset) {
  const std::uint64_t slot = std::uint64_t{1} << slot_exp;
  return (addr / slot) * slot + offset;
}

}  // namespace test_oracles

#endif  // FRAMETAG_TESTS_TEST_ORACLES_HPP_
