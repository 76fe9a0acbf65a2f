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

#ifndef FRAMETAG_SIM_HEAP_HPP_
#define FRAMETAG_SIM_HEAP_HPP_

#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "frametag/errors.hpp"
#include "frametag/frame_algebra.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/type_registry.hpp"

namespace frametag {

enum class Placement : std::uint8_t { Bump, RandomizedGaps };

struct HeapConfig {
  AddressWord arena_lo = 0;
  AddressWord arena_hi = 0;  // inclusive
  Placement placement = Placement::Bump;
  std::uint64_t seed = 0;

  /// Arena spanning the second quarter of the configured address space.
  static HeapConfig standard(const TagConfig& cfg,
                             Placement placement = Placement::Bump,
                             std::uint64_t seed = 0) {
    HeapConfig h;
    h.arena_lo = AddressWord{1} << (cfg.addr_bits - 2);
    h.arena_hi = (AddressWord{1} << (cfg.addr_bits - 1)) - 1;
    h.placement = placement;
    h.seed = seed;
    return h;
  }
};

enum class LiveState : std::uint8_t { Live = 1, Freed = 2 };

/// Per-object metadata record stored in simulated memory immediately below
/// the payload.
struct ObjectHeader {
  std::uint64_t payload_size = 0;
  TypeId type_id = 0;
  LiveState state = LiveState::Live;
};

struct AllocationRecord {
  std::uint64_t object_id = 0;
  AddressWord md_addr = 0;
  AddressWord payload_base = 0;  // md_addr + header_size
  std::uint64_t payload_size = 0;
  FrameTag tag;
  bool live = true;

  AddressWord payload_end() const { return payload_base + payload_size; }
  AddressWord extent_last() const { return payload_end() - 1; }
};

/// Sparse simulated address space with a header-attaching allocator.
///
/// Objects are placed at their natural alignment only; the allocator never
/// rounds an extent up to its wrapper-frame size and never pads the payload.
/// Freed extents are quarantined for the life of the heap, so headers stay
/// readable for best-effort use-after-free verdicts and live extents can
/// never overlap.
///
/// Single-writer: mutations must be serialized by the owner; reads between
/// mutations are safe.
class SimHeap {
 public:
  SimHeap(const TagConfig& cfg, const HeapConfig& heap_cfg)
      : cfg_(cfg), heap_cfg_(heap_cfg), cursor_(heap_cfg.arena_lo),
        rng_(heap_cfg.seed) {
    cfg_.validate();
    if (heap_cfg.arena_lo > heap_cfg.arena_hi ||
        heap_cfg.arena_hi >= cfg.addr_limit())
      throw UsageError("heap: arena outside the address space");
  }

  static constexpr std::uint64_t kPageSize = 4096;
  static constexpr std::uint64_t kMaxAlign = 4096;
  static constexpr std::uint64_t kMaxGap = 65535;

  const AllocationRecord& alloc(std::uint64_t size, TypeId type_id,
                                std::uint64_t align = 16) {
    if (size == 0) throw UsageError("alloc: size must be >= 1");
    if (align == 0 || align > kMaxAlign || (align & (align - 1)) != 0)
      throw UsageError("alloc: alignment must be a power of two <= 4096");

    AddressWord at = cursor_;
    if (heap_cfg_.placement == Placement::RandomizedGaps)
      at += rng_() % (kMaxGap + 1);
    // Place the header so the payload lands on the requested alignment.
    const AddressWord payload = align_up(at + cfg_.header_size, align);
    const AddressWord md = payload - cfg_.header_size;
    const std::uint64_t total = cfg_.header_size + size;
    if (md < heap_cfg_.arena_lo || md + total - 1 > heap_cfg_.arena_hi ||
        md + total < md)
      throw OutOfSpaceError("alloc: arena exhausted");
    if (md < cursor_)
      throw InternalFault("alloc: placement regressed into a live extent");

    write_header(md, ObjectHeader{size, type_id, LiveState::Live});

    AllocationRecord rec;
    rec.object_id = records_.size();
    rec.md_addr = md;
    rec.payload_base = payload;
    rec.payload_size = size;
    rec.tag = categorize(md, md + total - 1, md, cfg_);
    rec.live = true;
    records_.push_back(rec);
    md_index_.emplace(md, rec.object_id);
    cursor_ = md + total;
    payload_bytes_ += size;
    return records_.back();
  }

  /// Flips the header to Freed and quarantines the extent. Returns false on
  /// a double free.
  bool free_object(std::uint64_t object_id) {
    AllocationRecord& rec = mutable_record(object_id);
    auto header = read_header(rec.md_addr);
    if (!header || header->state == LiveState::Freed) return false;
    header->state = LiveState::Freed;
    write_header(rec.md_addr, *header);
    rec.live = false;
    return true;
  }

  /// Header stored at md_addr, or nullopt when the address is not a header
  /// base the allocator ever produced.
  std::optional<ObjectHeader> read_header(AddressWord md_addr) const {
    if (!md_index_.contains(md_addr)) return std::nullopt;
    std::uint8_t raw[13];
    read_bytes(md_addr, raw, sizeof raw);
    ObjectHeader h;
    std::uint64_t size = 0;
    for (int i = 7; i >= 0; --i) size = (size << 8) | raw[i];
    h.payload_size = size;
    h.type_id = static_cast<TypeId>(raw[8]) |
                (static_cast<TypeId>(raw[9]) << 8) |
                (static_cast<TypeId>(raw[10]) << 16) |
                (static_cast<TypeId>(raw[11]) << 24);
    h.state = static_cast<LiveState>(raw[12]);
    return h;
  }

  const AllocationRecord& record(std::uint64_t object_id) const {
    if (object_id >= records_.size()) throw UsageError("heap: unknown object");
    return records_[object_id];
  }

  const AllocationRecord* record_by_md(AddressWord md_addr) const {
    auto it = md_index_.find(md_addr);
    return it == md_index_.end() ? nullptr : &records_[it->second];
  }

  const std::vector<AllocationRecord>& records() const { return records_; }

  std::uint64_t payload_bytes() const { return payload_bytes_; }
  std::uint64_t header_bytes() const {
    return records_.size() * cfg_.header_size;
  }
  std::uint64_t pages_touched() const { return pages_.size(); }
  const TagConfig& config() const { return cfg_; }
  const HeapConfig& heap_config() const { return heap_cfg_; }

 private:
  static AddressWord align_up(AddressWord a, std::uint64_t align) {
    return (a + align - 1) & ~(align - 1);
  }

  AllocationRecord& mutable_record(std::uint64_t object_id) {
    if (object_id >= records_.size()) throw UsageError("heap: unknown object");
    return records_[object_id];
  }

  void write_header(AddressWord md, const ObjectHeader& h) {
    std::uint8_t raw[13];
    for (int i = 0; i < 8; ++i)
      raw[i] = static_cast<std::uint8_t>(h.payload_size >> (8 * i));
    for (int i = 0; i < 4; ++i)
      raw[8 + i] = static_cast<std::uint8_t>(h.type_id >> (8 * i));
    raw[12] = static_cast<std::uint8_t>(h.state);
    write_bytes(md, raw, sizeof raw);
  }

  void write_bytes(AddressWord addr, const std::uint8_t* src,
                   std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<std::uint8_t>& page = pages_[(addr + i) / kPageSize];
      if (page.empty()) page.resize(kPageSize, 0);
      page[(addr + i) % kPageSize] = src[i];
    }
  }

  void read_bytes(AddressWord addr, std::uint8_t* dst, std::uint64_t n) const {
    for (std::uint64_t i = 0; i < n; ++i) {
      auto it = pages_.find((addr + i) / kPageSize);
      dst[i] = it == pages_.end() ? 0 : it->second[(addr + i) % kPageSize];
    }
  }

  TagConfig cfg_;
  HeapConfig heap_cfg_;
  AddressWord cursor_;
  std::mt19937_64 rng_;
  std::vector<AllocationRecord> records_;
  std::unordered_map<AddressWord, std::uint64_t> md_index_;
  std::unordered_map<std::uint64_t, std::vector<std::uint8_t>> pages_;
  std::uint64_t payload_bytes_ = 0;
};

}  // namespace frametag

#endif  // FRAMETAG_SIM_HEAP_HPP_
