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

#ifndef FRAMETAG_SHADOW_TABLE_HPP_
#define FRAMETAG_SHADOW_TABLE_HPP_

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "frametag/errors.hpp"
#include "frametag/frame_algebra.hpp"
#include "frametag/tag_config.hpp"

namespace frametag {

struct TableStats {
  std::uint64_t live_entries = 0;
  std::uint64_t peak_entries = 0;
  std::uint64_t resident_bytes = 0;
  std::uint64_t peak_resident_bytes = 0;
};

/// Disjoint metadata store for large-framed objects.
///
/// One record per slot hosting at least one large frame; each record maps
/// wrapper exponents in (slot_exp, addr_bits] to the metadata address of the
/// frame based at that slot. A frame base aligned to 2^N with N > slot_exp
/// always coincides with a slot base, so the record is found at
/// frame_base >> slot_exp.
///
/// Resident-byte accounting models one word per division plus a word of
/// record overhead: a materialized slot record costs
/// 8 * (addr_bits - slot_exp + 1) bytes, released when its last division is
/// removed. The count of materialized records grows with the number of
/// distinct slots hosting large frames, never with object size.
class ShadowTable {
 public:
  explicit ShadowTable(const TagConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    divisions_ = cfg_.addr_bits - cfg_.slot_exp();
  }

  /// Records the metadata address for the frame (base, N). Two live objects
  /// can never share a wrapper frame, so a collision with a live entry is an
  /// internal fault.
  void insert(AddressWord base, std::uint32_t n, AddressWord md_addr) {
    check_frame(base, n);
    SlotRecord& rec = slots_[base >> cfg_.slot_exp()];
    if (rec.md.empty()) {
      rec.md.assign(divisions_, 0);
      stats_.resident_bytes += record_bytes();
      if (stats_.resident_bytes > stats_.peak_resident_bytes)
        stats_.peak_resident_bytes = stats_.resident_bytes;
    }
    const std::uint32_t idx = n - cfg_.slot_exp() - 1;
    if (rec.present & (std::uint64_t{1} << idx))
      throw InternalFault("shadow table: live entry collision");
    rec.present |= std::uint64_t{1} << idx;
    rec.md[idx] = md_addr;
    ++stats_.live_entries;
    if (stats_.live_entries > stats_.peak_entries)
      stats_.peak_entries = stats_.live_entries;
  }

  /// Metadata address for the frame of size 2^N containing `addr`, if one is
  /// registered. Constant across every address within the frame.
  std::optional<AddressWord> lookup(AddressWord addr, std::uint32_t n) const {
    if (n <= cfg_.slot_exp() || n > cfg_.addr_bits)
      throw UsageError("shadow table: exponent out of range");
    const AddressWord base = detail::clear_low_bits(addr, n);
    auto it = slots_.find(base >> cfg_.slot_exp());
    if (it == slots_.end()) return std::nullopt;
    const std::uint32_t idx = n - cfg_.slot_exp() - 1;
    if (!(it->second.present & (std::uint64_t{1} << idx))) return std::nullopt;
    return it->second.md[idx];
  }

  void remove(AddressWord base, std::uint32_t n) {
    check_frame(base, n);
    auto it = slots_.find(base >> cfg_.slot_exp());
    const std::uint32_t idx = n - cfg_.slot_exp() - 1;
    if (it == slots_.end() || !(it->second.present & (std::uint64_t{1} << idx)))
      throw UsageError("shadow table: removing an absent entry");
    it->second.present &= ~(std::uint64_t{1} << idx);
    --stats_.live_entries;
    if (it->second.present == 0) {
      slots_.erase(it);
      stats_.resident_bytes -= record_bytes();
    }
  }

  const TableStats& stats() const { return stats_; }
  std::uint64_t slot_records() const { return slots_.size(); }
  std::uint64_t record_bytes() const { return 8 * (divisions_ + 1); }
  const TagConfig& config() const { return cfg_; }

 private:
  struct SlotRecord {
    std::uint64_t present = 0;      // one bit per division
    std::vector<AddressWord> md;    // indexed by N - slot_exp - 1
  };

  void check_frame(AddressWord base, std::uint32_t n) const {
    if (n <= cfg_.slot_exp() || n > cfg_.addr_bits)
      throw UsageError("shadow table: exponent out of range");
    if ((base & detail::low_mask(n)) != 0)
      throw UsageError("shadow table: base not aligned to its frame");
  }

  TagConfig cfg_;
  std::uint32_t divisions_ = 0;
  std::unordered_map<std::uint64_t, SlotRecord> slots_;
  TableStats stats_;
};

}  // namespace frametag

#endif  // FRAMETAG_SHADOW_TABLE_HPP_
