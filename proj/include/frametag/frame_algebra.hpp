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

#ifndef FRAMETAG_FRAME_ALGEBRA_HPP_
#define FRAMETAG_FRAME_ALGEBRA_HPP_

#include <bit>
#include <cstdint>
#include <utility>

#include "frametag/errors.hpp"
#include "frametag/tag_config.hpp"

namespace frametag {

/// A raw simulated address, in bytes. Valid values are < 2^addr_bits.
using AddressWord = std::uint64_t;

/// A 64-bit word that may carry a frame tag in its spare bits.
///
/// Layout: bit 63 is the flag; the tag field of width `spare_bits - 1` sits
/// immediately below it; the address occupies the low `addr_bits` bits. Any
/// bits between the address and the tag field are zero in well-formed words.
struct TaggedWord {
  std::uint64_t value = 0;
  bool operator==(const TaggedWord&) const = default;
};

enum class TagKind : std::uint8_t { Untagged = 0, SmallFramed, LargeFramed };

/// Decoded form of the spare bits.
///
/// SmallFramed words carry the byte offset from the slot base to the object
/// header; LargeFramed words carry N = log2(wrapper frame size); Untagged
/// words pass through every check.
struct FrameTag {
  TagKind kind = TagKind::Untagged;
  std::uint64_t offset = 0;       // SmallFramed: header offset within the slot
  std::uint32_t wrapper_exp = 0;  // LargeFramed: N

  static constexpr FrameTag untagged() { return {}; }
  static constexpr FrameTag small_framed(std::uint64_t offset) {
    return {TagKind::SmallFramed, offset, 0};
  }
  static constexpr FrameTag large_framed(std::uint32_t n) {
    return {TagKind::LargeFramed, 0, n};
  }

  bool operator==(const FrameTag&) const = default;
};

/// A power-of-two block aligned to its own size.
struct WrapperFrame {
  std::uint32_t exp = 0;  // frame size is 2^exp
  AddressWord base = 0;   // aligned to 2^exp

  constexpr std::uint64_t size() const { return std::uint64_t{1} << exp; }
  constexpr AddressWord last() const { return base + size() - 1; }

  bool operator==(const WrapperFrame&) const = default;
};

namespace detail {

constexpr std::uint64_t kFlagBit = std::uint64_t{1} << 63;

constexpr std::uint64_t low_mask(std::uint32_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

constexpr AddressWord clear_low_bits(AddressWord a, std::uint32_t bits) {
  return a & ~low_mask(bits);
}

}  // namespace detail

/// Smallest frame containing the inclusive byte range [lo, hi].
///
/// The exponent is the bit length of lo XOR hi: the lowest N at which both
/// bounds share the same frame index, so no frame of size 2^(N-1) contains
/// the range.
constexpr WrapperFrame wrapper_frame(AddressWord lo, AddressWord hi,
                                     const TagConfig& cfg) {
  if (lo > hi) throw UsageError("wrapper_frame: lo > hi");
  if (hi >= cfg.addr_limit())
    throw UsageError("wrapper_frame: bound beyond the address space");
  const auto exp = static_cast<std::uint32_t>(std::bit_width(lo ^ hi));
  return WrapperFrame{exp, detail::clear_low_bits(lo, exp)};
}

/// Tag for an object whose extent (header plus payload) is [range_lo,
/// range_hi] with the header at range_lo.
///
/// A wrapper frame no larger than a slot lies inside exactly one slot, so
/// the slot base derived from any in-range address is stable and the tag
/// can carry the within-slot header offset. Anything larger carries N.
constexpr FrameTag categorize(AddressWord range_lo, AddressWord range_hi,
                              AddressWord md_addr, const TagConfig& cfg) {
  if (md_addr != range_lo)
    throw UsageError("categorize: header must sit at the extent base");
  const WrapperFrame frame = wrapper_frame(range_lo, range_hi, cfg);
  if (frame.exp <= cfg.slot_exp())
    return FrameTag::small_framed(md_addr & detail::low_mask(cfg.slot_exp()));
  return FrameTag::large_framed(frame.exp);
}

/// Packs an address and tag into one word.
constexpr TaggedWord encode(AddressWord addr, const FrameTag& tag,
                            const TagConfig& cfg) {
  if (addr >= cfg.addr_limit())
    throw UsageError("encode: address beyond the address space");
  const std::uint32_t field_shift = 64 - cfg.spare_bits;
  switch (tag.kind) {
    case TagKind::Untagged:
      return TaggedWord{addr};
    case TagKind::SmallFramed:
      if (tag.offset >= cfg.slot_size())
        throw EncodeError("encode: offset does not fit the tag field");
      return TaggedWord{addr | (tag.offset << field_shift) | detail::kFlagBit};
    case TagKind::LargeFramed:
      if (tag.wrapper_exp <= cfg.slot_exp() || tag.wrapper_exp > cfg.addr_bits)
        throw EncodeError("encode: wrapper exponent out of range");
      return TaggedWord{addr |
                        (std::uint64_t{tag.wrapper_exp} << field_shift)};
  }
  throw UsageError("encode: bad tag kind");
}

/// Exact inverse of encode.
///
/// Rejects words whose flag is clear but whose field names a frame no larger
/// than a slot (no legal large frame is that small), whose field exceeds
/// addr_bits, or that set bits between the address and the tag field.
constexpr std::pair<AddressWord, FrameTag> decode(TaggedWord w,
                                                  const TagConfig& cfg) {
  const std::uint32_t field_shift = 64 - cfg.spare_bits;
  const AddressWord addr = w.value & cfg.addr_mask();
  const std::uint64_t field = (w.value & ~detail::kFlagBit) >> field_shift;
  const bool flag = (w.value & detail::kFlagBit) != 0;
  if ((w.value & ~cfg.addr_mask() &
       detail::low_mask(field_shift)) != 0)
    throw DecodeError("decode: nonzero bits between address and tag field");
  if (flag) return {addr, FrameTag::small_framed(field)};
  if (field == 0) return {addr, FrameTag::untagged()};
  if (field <= cfg.slot_exp() || field > cfg.addr_bits)
    throw DecodeError("decode: malformed wrapper exponent");
  return {addr, FrameTag::large_framed(static_cast<std::uint32_t>(field))};
}

/// Address bits only. Idempotent; total even on malformed words.
constexpr AddressWord strip(TaggedWord w, const TagConfig& cfg) {
  return w.value & cfg.addr_mask();
}

/// Header address of a small-framed word: slot base plus the tagged offset.
///
/// Constant across every address within the object's extent, because a
/// small-framed extent never leaves its slot.
constexpr AddressWord derive_small_md(TaggedWord w, const TagConfig& cfg) {
  const auto [addr, tag] = decode(w, cfg);
  if (tag.kind != TagKind::SmallFramed)
    throw UsageError("derive_small_md: word is not small-framed");
  return detail::clear_low_bits(addr, cfg.slot_exp()) + tag.offset;
}

/// XOR membership test at address arithmetic: true iff the source address
/// and the arithmetic result lie in the same reference frame (the slot for
/// small-framed words, the wrapper frame for large-framed ones). Untagged
/// words always pass.
constexpr bool in_frame(TaggedWord src, AddressWord result_addr,
                        const TagConfig& cfg) {
  const auto [addr, tag] = decode(src, cfg);
  if (tag.kind == TagKind::Untagged) return true;
  const std::uint32_t k =
      tag.kind == TagKind::SmallFramed ? cfg.slot_exp() : tag.wrapper_exp;
  return ((addr ^ result_addr) >> k) == 0;
}

}  // namespace frametag

#endif  // FRAMETAG_FRAME_ALGEBRA_HPP_
