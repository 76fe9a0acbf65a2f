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

#ifndef FRAMETAG_MONITOR_HPP_
#define FRAMETAG_MONITOR_HPP_

#include <cstdint>
#include <optional>
#include <utility>

#include "frametag/errors.hpp"
#include "frametag/frame_algebra.hpp"
#include "frametag/shadow_table.hpp"
#include "frametag/sim_heap.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/type_registry.hpp"
#include "frametag/verdict.hpp"

namespace frametag {

struct MonitorPolicy {
  enum class OnViolation : std::uint8_t { Abort, RecordAndContinue };
  OnViolation on_violation = OnViolation::RecordAndContinue;
  bool arithmetic_check = true;
};

/// Inline reference monitor over the simulated heap.
///
/// Every check derives the object's metadata from the word alone: a
/// small-framed word reaches its header through the slot base plus the
/// tagged offset, a large-framed word through the shadow table, and the
/// lower bound is the derived header address plus the header size. Untagged
/// words bypass every check, modelling interop with uninstrumented code
/// (a documented false-negative surface).
class Monitor {
 public:
  Monitor(const TagConfig& cfg, const HeapConfig& heap_cfg,
          TypeRegistry types = {},
          MonitorPolicy policy = {})
      : cfg_(cfg), heap_(cfg, heap_cfg), table_(cfg),
        types_(std::move(types)), policy_(policy) {}

  /// Allocates, registers large frames in the shadow table, and returns a
  /// word addressing the payload whose tag locates the header.
  TaggedWord on_alloc(std::uint64_t size, TypeId type_id,
                      std::uint64_t align = 16) {
    const AllocationRecord& rec = heap_.alloc(size, type_id, align);
    if (rec.tag.kind == TagKind::LargeFramed) {
      const WrapperFrame frame =
          wrapper_frame(rec.md_addr, rec.extent_last(), cfg_);
      table_.insert(frame.base, frame.exp, rec.md_addr);
    }
    return encode(rec.payload_base, rec.tag, cfg_);
  }

  /// Address arithmetic with the in-frame check. The tag is preserved
  /// verbatim on the result even when the check fires, so downstream
  /// behaviour of escaped words can be studied under record-and-continue.
  std::pair<TaggedWord, Verdict> on_arith(TaggedWord w,
                                          std::int64_t delta) const {
    const auto [addr, tag] = decode(w, cfg_);
    const AddressWord result = addr + static_cast<AddressWord>(delta);
    const bool wrapped = delta >= 0 ? result < addr : result > addr;
    if (wrapped || result >= cfg_.addr_limit())
      throw UsageError("on_arith: result leaves the address space");
    Verdict verdict = Verdict::pass();
    if (policy_.arithmetic_check && !in_frame(w, result, cfg_))
      verdict = Verdict::fail(Outcome::InFrameViolation, result);
    return {encode(result, tag, cfg_), verdict};
  }

  enum class AccessKind : std::uint8_t { Load, Store };

  /// Bounds and liveness check at dereference, using the tag-cleaned
  /// address.
  Verdict on_access(TaggedWord w, std::uint64_t width, AccessKind) const {
    if (width == 0) throw UsageError("on_access: width must be >= 1");
    const auto [addr, tag] = decode(w, cfg_);
    if (tag.kind == TagKind::Untagged) return Verdict::pass();

    const auto located = locate(addr, tag, width);
    if (!located.header) return located.failure;
    const AllocationRecord* rec = heap_.record_by_md(located.md);
    const std::optional<std::uint64_t> id =
        rec ? std::optional<std::uint64_t>{rec->object_id} : std::nullopt;
    if (located.header->state == LiveState::Freed)
      return Verdict::fail(Outcome::UseAfterFree, addr, width, id);
    const AddressWord lower = located.md + cfg_.header_size;
    if (addr < lower || width > located.header->payload_size ||
        addr + width > lower + located.header->payload_size)
      return Verdict::fail(Outcome::OutOfBounds, addr, width, id);
    return id ? Verdict::pass(*id) : Verdict::pass();
  }

  /// Cast check: maps the word to the type at its offset within the object
  /// and tests structural compatibility with the target.
  Verdict on_cast(TaggedWord w, TypeId target) const {
    const auto [addr, tag] = decode(w, cfg_);
    if (tag.kind == TagKind::Untagged)
      throw UsageError("on_cast: word is untagged");
    if (target >= types_.size()) throw UsageError("on_cast: unknown target");

    const auto located = locate(addr, tag, 1);
    if (!located.header) return located.failure;
    const AllocationRecord* rec = heap_.record_by_md(located.md);
    const std::optional<std::uint64_t> id =
        rec ? std::optional<std::uint64_t>{rec->object_id} : std::nullopt;
    if (located.header->state == LiveState::Freed)
      return Verdict::fail(Outcome::UseAfterFree, addr, 0, id);
    const AddressWord payload_base = located.md + cfg_.header_size;
    if (addr < payload_base ||
        addr - payload_base >= located.header->payload_size)
      return Verdict::fail(Outcome::CastError, addr, 0, id);
    const auto found = types_.type_at_offset(located.header->type_id,
                                             addr - payload_base);
    if (!found || !types_.cast_compatible(*found, target))
      return Verdict::fail(Outcome::CastError, addr, 0, id);
    return id ? Verdict::pass(*id) : Verdict::pass();
  }

  /// Release through a word: valid only at the payload base of a live
  /// object. Removes the shadow entry of a large-framed object, so a later
  /// use of a stale large-framed word surfaces as MissingMetadata rather
  /// than UseAfterFree.
  Verdict on_free(TaggedWord w) {
    const auto [addr, tag] = decode(w, cfg_);
    if (tag.kind == TagKind::Untagged)
      throw UsageError("on_free: word is untagged");

    const auto located = locate(addr, tag, 1);
    if (!located.header) return located.failure;
    const AllocationRecord* rec = heap_.record_by_md(located.md);
    const std::optional<std::uint64_t> id =
        rec ? std::optional<std::uint64_t>{rec->object_id} : std::nullopt;
    if (located.header->state == LiveState::Freed)
      return Verdict::fail(Outcome::DoubleFree, addr, 0, id);
    if (addr != located.md + cfg_.header_size)
      return Verdict::fail(Outcome::OutOfBounds, addr, 0, id);
    if (tag.kind == TagKind::LargeFramed) {
      const WrapperFrame frame =
          wrapper_frame(located.md, rec->extent_last(), cfg_);
      table_.remove(frame.base, frame.exp);
    }
    heap_.free_object(rec->object_id);
    return Verdict::pass(rec->object_id);
  }

  SimHeap& heap() { return heap_; }
  const SimHeap& heap() const { return heap_; }
  ShadowTable& table() { return table_; }
  const ShadowTable& table() const { return table_; }
  TypeRegistry& types() { return types_; }
  const TypeRegistry& types() const { return types_; }
  const TagConfig& config() const { return cfg_; }
  const MonitorPolicy& policy() const { return policy_; }

 private:
  struct Located {
    std::optional<ObjectHeader> header;
    AddressWord md = 0;
    Verdict failure;
  };

  /// Derives the metadata address from the word and reads the header.
  Located locate(AddressWord addr, const FrameTag& tag,
                 std::uint64_t width) const {
    AddressWord md = 0;
    if (tag.kind == TagKind::SmallFramed) {
      md = detail::clear_low_bits(addr, cfg_.slot_exp()) + tag.offset;
    } else {
      const auto entry = table_.lookup(addr, tag.wrapper_exp);
      if (!entry)
        return {std::nullopt, 0,
                Verdict::fail(Outcome::MissingMetadata, addr, width)};
      md = *entry;
    }
    auto header = heap_.read_header(md);
    if (!header)
      return {std::nullopt, md,
              Verdict::fail(Outcome::MissingMetadata, addr, width)};
    return {header, md, Verdict::pass()};
  }

  TagConfig cfg_;
  SimHeap heap_;
  ShadowTable table_;
  TypeRegistry types_;
  MonitorPolicy policy_;
};

}  // namespace frametag

#endif  // FRAMETAG_MONITOR_HPP_
