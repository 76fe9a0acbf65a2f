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

#ifndef FRAMETAG_ORACLE_HPP_
#define FRAMETAG_ORACLE_HPP_

// Ground truth for the trace machine. This module must stay independent of
// the tag encoding: no tagged words, no frames, no slots — only exact
// interval bookkeeping over raw addresses, so its verdicts can stand against
// the monitor's.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "frametag/errors.hpp"
#include "frametag/type_registry.hpp"
#include "frametag/verdict.hpp"

namespace frametag {

enum class DiscrepancyClass : std::uint8_t {
  TrueDetection,
  FpOutAndBack,
  FpOnePastEnd,
  FalseNegative,
  Bug,
};

constexpr std::string_view to_string(DiscrepancyClass c) {
  switch (c) {
    case DiscrepancyClass::TrueDetection: return "true-detection";
    case DiscrepancyClass::FpOutAndBack: return "fp-out-and-back";
    case DiscrepancyClass::FpOnePastEnd: return "fp-one-past-end";
    case DiscrepancyClass::FalseNegative: return "false-negative";
    case DiscrepancyClass::Bug: return "bug";
  }
  return "?";
}

struct Discrepancy {
  std::uint64_t event_index = 0;
  Outcome monitor = Outcome::Ok;
  Outcome oracle = Outcome::Ok;
  DiscrepancyClass classification = DiscrepancyClass::Bug;
};

/// Trace history relevant to classifying one event.
struct ClassifyContext {
  bool arithmetic_event = false;
  // Arithmetic landed exactly one byte past the intended referent's payload
  // (legal to form, illegal to use).
  bool one_past_end = false;
  // The word's derivation chain already tripped a flagged in-frame
  // violation, i.e. the monitor detected the escape when it happened.
  bool chain_flagged = false;
};

/// Sorts one (monitor, oracle) verdict pair into the discrepancy taxonomy.
/// Returns nullopt when both sides agree the event is clean.
inline std::optional<DiscrepancyClass> classify(Outcome monitor,
                                                Outcome oracle,
                                                const ClassifyContext& ctx) {
  const bool m = monitor != Outcome::Ok;
  const bool o = oracle != Outcome::Ok;
  if (!m && !o) return std::nullopt;
  if (m && o) return DiscrepancyClass::TrueDetection;
  if (m) {
    // Only the in-frame check can fire on an event the oracle accepts, and
    // only at arithmetic: the excursion either is a legal one-past-the-end
    // step or leaves and may come back untouched.
    if (!ctx.arithmetic_event || monitor != Outcome::InFrameViolation)
      return DiscrepancyClass::Bug;
    return ctx.one_past_end ? DiscrepancyClass::FpOnePastEnd
                            : DiscrepancyClass::FpOutAndBack;
  }
  // Oracle-only flag: a dereference through a word whose escape was already
  // flagged at arithmetic was detected there; anything else is a genuine
  // miss.
  return ctx.chain_flagged ? DiscrepancyClass::TrueDetection
                           : DiscrepancyClass::FalseNegative;
}

/// Exact interval map of every allocation with intended-referent tracking.
///
/// Accesses are judged against the object a word was derived from, not
/// against whatever object happens to contain the address.
class ReferentOracle {
 public:
  struct ObjectInfo {
    std::uint64_t object_id = 0;
    std::uint64_t base = 0;
    std::uint64_t size = 0;
    TypeId type = 0;
    bool live = true;

    std::uint64_t end() const { return base + size; }  // exclusive
  };

  void register_object(std::uint64_t object_id, std::uint64_t payload_base,
                       std::uint64_t payload_size, TypeId type) {
    if (payload_size == 0) throw UsageError("oracle: empty object");
    if (objects_.contains(object_id))
      throw UsageError("oracle: duplicate object id");
    // The allocator quarantines freed extents, so any overlap at all is a
    // broken run.
    auto next = intervals_.upper_bound(payload_base);
    if (next != intervals_.end() && payload_base + payload_size > next->first)
      throw InternalFault("oracle: overlapping allocation");
    if (next != intervals_.begin()) {
      auto prev = std::prev(next);
      const ObjectInfo& p = objects_.at(prev->second);
      if (p.base + p.size > payload_base)
        throw InternalFault("oracle: overlapping allocation");
    }
    objects_.emplace(object_id,
                     ObjectInfo{object_id, payload_base, payload_size, type});
    intervals_.emplace(payload_base, object_id);
  }

  /// Binds a trace variable to the object its word was derived from.
  /// Arithmetic must propagate the referent; casts never change it.
  void set_referent(const std::string& var, std::uint64_t object_id) {
    if (!objects_.contains(object_id))
      throw UsageError("oracle: unknown object");
    referents_[var] = object_id;
  }

  std::uint64_t referent(const std::string& var) const {
    auto it = referents_.find(var);
    if (it == referents_.end())
      throw UsageError("oracle: variable has no referent");
    return it->second;
  }

  const ObjectInfo& object(std::uint64_t object_id) const {
    auto it = objects_.find(object_id);
    if (it == objects_.end()) throw UsageError("oracle: unknown object");
    return it->second;
  }

  /// Ground truth for a dereference of `width` bytes at `addr` through a
  /// word derived from `var`'s referent.
  Outcome truth_access(const std::string& var, std::uint64_t addr,
                       std::uint64_t width) const {
    const ObjectInfo& obj = object(referent(var));
    if (!obj.live) return Outcome::UseAfterFree;
    if (addr < obj.base || width > obj.size || addr + width > obj.end())
      return Outcome::OutOfBounds;
    return Outcome::Ok;
  }

  /// Pointer arithmetic alone is always legal; only uses are judged.
  static constexpr Outcome truth_arith() { return Outcome::Ok; }

  Outcome truth_cast(const std::string& var, std::uint64_t addr,
                     TypeId target, const TypeRegistry& types) const {
    const ObjectInfo& obj = object(referent(var));
    if (!obj.live) return Outcome::UseAfterFree;
    if (addr < obj.base || addr - obj.base >= obj.size)
      return Outcome::CastError;
    const auto found = types.type_at_offset(obj.type, addr - obj.base);
    if (!found || !types.cast_compatible(*found, target))
      return Outcome::CastError;
    return Outcome::Ok;
  }

  /// Ground truth for a free through `var`'s word at `addr`; marks the
  /// referent dead on success.
  Outcome truth_free(const std::string& var, std::uint64_t addr) {
    ObjectInfo& obj = objects_.at(referent(var));
    if (!obj.live) return Outcome::DoubleFree;
    if (addr != obj.base) return Outcome::OutOfBounds;
    obj.live = false;
    return Outcome::Ok;
  }

  /// Free named by object rather than by a wandering word.
  Outcome truth_free_object(std::uint64_t object_id) {
    auto it = objects_.find(object_id);
    if (it == objects_.end()) throw UsageError("oracle: unknown object");
    ObjectInfo& obj = it->second;
    if (!obj.live) return Outcome::DoubleFree;
    obj.live = false;
    return Outcome::Ok;
  }

  /// Live object containing `addr`, if any. Diagnostic only: verdicts never
  /// depend on it.
  std::optional<std::uint64_t> live_object_at(std::uint64_t addr) const {
    auto next = intervals_.upper_bound(addr);
    if (next == intervals_.begin()) return std::nullopt;
    const ObjectInfo& obj = objects_.at(std::prev(next)->second);
    if (obj.live && addr >= obj.base && addr < obj.end())
      return obj.object_id;
    return std::nullopt;
  }

  bool live(std::uint64_t object_id) const { return object(object_id).live; }

 private:
  std::unordered_map<std::uint64_t, ObjectInfo> objects_;
  std::map<std::uint64_t, std::uint64_t> intervals_;  // payload base -> id
  std::unordered_map<std::string, std::uint64_t> referents_;
};

}  // namespace frametag

#endif  // FRAMETAG_ORACLE_HPP_
