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

#ifndef FRAMETAG_VM_HPP_
#define FRAMETAG_VM_HPP_

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "frametag/errors.hpp"
#include "frametag/frame_algebra.hpp"
#include "frametag/monitor.hpp"
#include "frametag/oracle.hpp"
#include "frametag/report.hpp"
#include "frametag/sim_heap.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/trace.hpp"
#include "frametag/type_registry.hpp"
#include "frametag/verdict.hpp"

namespace frametag {

struct RunOptions {
  TagConfig config = TagConfig::classic();
  MonitorPolicy policy;
  Placement placement = Placement::Bump;
  std::uint64_t seed = 0;
  std::optional<HeapConfig> heap;  // overrides placement/seed when set
};

/// Executes a parsed program through the monitor and the oracle in
/// lockstep.
///
/// The oracle never sees a tagged word: alongside each variable's word the
/// machine tracks the raw address by plain arithmetic over the allocation
/// log, and hands only that to the oracle. The two address paths are
/// cross-checked at every assignment.
class TraceVm {
 public:
  TraceVm(const TraceProgram& program, const RunOptions& options)
      : program_(program), options_(options),
        monitor_(options.config,
                 options.heap ? *options.heap
                              : HeapConfig::standard(options.config,
                                                     options.placement,
                                                     options.seed),
                 builtin_registry(), options.policy) {}

  RunReport run() {
    for (const Statement& st : program_.statements) {
      execute(st);
      if (aborted_) break;
    }
    return finish();
  }

 private:
  struct VarState {
    TaggedWord word;
    AddressWord raw = 0;
    std::uint64_t referent = 0;
    // An in-frame violation was flagged somewhere on this word's derivation
    // chain; used to credit later oracle-only flags to that detection.
    bool chain_flagged = false;
  };

  static TypeRegistry builtin_registry() {
    TypeRegistry reg;
    for (const BuiltinType& t : kBuiltinTypes)
      reg.register_primitive(std::string(t.name), t.size);
    return reg;
  }

  void execute(const Statement& st) {
    switch (st.kind) {
      case StmtKind::Typedef: return do_typedef(st);
      case StmtKind::Alloc: return do_alloc(st);
      case StmtKind::Free: return do_free(st);
      case StmtKind::Let: return do_let(st);
      case StmtKind::Add: return do_add(st);
      case StmtKind::Load: return do_access(st, Monitor::AccessKind::Load);
      case StmtKind::Store: return do_access(st, Monitor::AccessKind::Store);
      case StmtKind::Cast: return do_cast(st);
    }
  }

  TypeId type_by_name(const Statement& st, const std::string& name) const {
    const auto id = monitor_.types().find(name);
    if (!id) throw TraceError(st.line, "unknown type '" + name + "'");
    return *id;
  }

  void do_typedef(const Statement& st) {
    try {
      if (st.prim) {
        monitor_.types().register_primitive(st.name, st.size);
      } else {
        std::vector<TypeRegistry::Field> fields;
        fields.reserve(st.fields.size());
        for (const TypedefField& f : st.fields)
          fields.push_back({f.offset, type_by_name(st, f.type_name)});
        monitor_.types().register_aggregate(st.name, st.size,
                                            std::move(fields));
      }
    } catch (const UsageError& e) {
      throw TraceError(st.line, e.what());
    }
  }

  void do_alloc(const Statement& st) {
    const TypeId type =
        st.type_name.empty() ? TypeId{0} : type_by_name(st, st.type_name);
    TaggedWord word;
    try {
      word = monitor_.on_alloc(st.size, type, st.align);
    } catch (const OutOfSpaceError& e) {
      throw TraceError(st.line, e.what());
    } catch (const UsageError& e) {
      throw TraceError(st.line, e.what());
    }
    const AllocationRecord& rec = monitor_.heap().records().back();
    objects_.emplace(st.name, rec.object_id);
    object_names_.emplace(rec.object_id, st.name);
    canonical_.emplace(rec.object_id, word);
    oracle_.register_object(rec.object_id, rec.payload_base, rec.payload_size,
                            type);
    record(st, Outcome::Ok, Outcome::Ok, ClassifyContext{}, rec.object_id);
  }

  // let and add are the two arithmetic forms; both go through the monitor's
  // in-frame check and both propagate the intended referent.
  void do_let(const Statement& st) {
    const std::uint64_t object = objects_.at(st.object);
    if (st.offset >
        static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw TraceError(st.line, "offset too large");
    arith(st, canonical_.at(object), object,
          /*src_flagged=*/false, oracle_.object(object).base, st.offset);
    oracle_.set_referent(st.var, object);
  }

  void do_add(const Statement& st) {
    const VarState src = vars_.at(st.src);  // copy: dest may alias src
    arith(st, src.word, src.referent, src.chain_flagged, src.raw, st.delta);
    oracle_.set_referent(st.var, src.referent);
  }

  void arith(const Statement& st, TaggedWord base, std::uint64_t referent,
             bool src_flagged, AddressWord src_raw, std::int64_t delta) {
    TaggedWord word;
    Verdict verdict;
    try {
      std::tie(word, verdict) = monitor_.on_arith(base, delta);
    } catch (const UsageError& e) {
      throw TraceError(st.line, e.what());
    }
    const AddressWord raw = src_raw + static_cast<AddressWord>(delta);
    if (strip(word, options_.config) != raw)
      throw InternalFault("vm: tagged and raw address paths diverged");

    vars_[st.var] =
        VarState{word, raw, referent, src_flagged || !verdict.ok()};

    const auto& obj = oracle_.object(referent);
    ClassifyContext ctx;
    ctx.arithmetic_event = true;
    ctx.one_past_end = raw == obj.end();
    record(st, verdict.outcome, ReferentOracle::truth_arith(), ctx, referent);
  }

  void do_access(const Statement& st, Monitor::AccessKind kind) {
    const VarState& vs = vars_.at(st.var);
    const Verdict verdict = monitor_.on_access(vs.word, st.width, kind);
    const Outcome truth = oracle_.truth_access(st.var, vs.raw, st.width);
    ClassifyContext ctx;
    ctx.chain_flagged = vs.chain_flagged;
    record(st, verdict.outcome, truth, ctx, vs.referent);
  }

  void do_cast(const Statement& st) {
    const VarState& vs = vars_.at(st.var);
    const TypeId target = type_by_name(st, st.type_name);
    const Verdict verdict = monitor_.on_cast(vs.word, target);
    const Outcome truth =
        oracle_.truth_cast(st.var, vs.raw, target, monitor_.types());
    ClassifyContext ctx;
    ctx.chain_flagged = vs.chain_flagged;
    record(st, verdict.outcome, truth, ctx, vs.referent);
  }

  void do_free(const Statement& st) {
    Verdict verdict;
    Outcome truth = Outcome::Ok;
    ClassifyContext ctx;
    std::uint64_t referent = 0;
    if (auto it = vars_.find(st.target); it != vars_.end()) {
      verdict = monitor_.on_free(it->second.word);
      truth = oracle_.truth_free(st.target, it->second.raw);
      ctx.chain_flagged = it->second.chain_flagged;
      referent = it->second.referent;
    } else {
      const std::uint64_t object = objects_.at(st.target);
      verdict = monitor_.on_free(canonical_.at(object));
      truth = oracle_.truth_free_object(object);
      referent = object;
    }
    record(st, verdict.outcome, truth, ctx, referent);
  }

  void record(const Statement& st, Outcome monitor, Outcome oracle,
              const ClassifyContext& ctx,
              std::optional<std::uint64_t> referent) {
    EventRecord ev;
    ev.index = report_.events.size();
    ev.line = st.line;
    ev.text = st.text;
    ev.kind = st.kind;
    ev.monitor = monitor;
    ev.oracle = oracle;
    ev.referent = referent;
    ev.expected = st.expected;
    ev.expect_failed = st.expected && *st.expected != monitor;
    ev.classification = classify(monitor, oracle, ctx);

    RunCounters& c = report_.counters;
    ++c.events;
    switch (st.kind) {
      case StmtKind::Alloc: ++c.allocs; break;
      case StmtKind::Free: ++c.frees; break;
      case StmtKind::Let:
      case StmtKind::Add: ++c.ariths; break;
      case StmtKind::Load: ++c.loads; break;
      case StmtKind::Store: ++c.stores; break;
      case StmtKind::Cast: ++c.casts; break;
      case StmtKind::Typedef: break;
    }
    if (monitor != Outcome::Ok) ++c.monitor_flags;
    if (oracle != Outcome::Ok) ++c.oracle_flags;
    if (ev.expect_failed) ++c.expect_failures;
    if (ev.classification) {
      switch (*ev.classification) {
        case DiscrepancyClass::TrueDetection: ++c.true_detections; break;
        case DiscrepancyClass::FpOutAndBack: ++c.fp_out_and_back; break;
        case DiscrepancyClass::FpOnePastEnd: ++c.fp_one_past_end; break;
        case DiscrepancyClass::FalseNegative: ++c.false_negatives; break;
        case DiscrepancyClass::Bug: ++c.bugs; break;
      }
      report_.discrepancies.push_back(
          Discrepancy{ev.index, monitor, oracle, *ev.classification});
    }
    report_.events.push_back(std::move(ev));

    if (monitor != Outcome::Ok &&
        options_.policy.on_violation == MonitorPolicy::OnViolation::Abort) {
      report_.aborted_at_event = report_.events.back().index;
      aborted_ = true;
    }
  }

  RunReport finish() {
    report_.config = options_.config;
    report_.policy = options_.policy;
    report_.placement = options_.heap ? options_.heap->placement
                                      : options_.placement;
    report_.seed = options_.heap ? options_.heap->seed : options_.seed;

    const TagConfig& cfg = options_.config;
    for (const AllocationRecord& rec : monitor_.heap().records()) {
      AllocationLogEntry e;
      e.object_id = rec.object_id;
      e.name = object_names_.at(rec.object_id);
      e.md_addr = rec.md_addr;
      e.payload_base = rec.payload_base;
      e.payload_size = rec.payload_size;
      e.tag_kind = rec.tag.kind;
      e.offset = rec.tag.offset;
      e.wrapper_exp = rec.tag.wrapper_exp;
      e.live = rec.live;
      const std::uint64_t extent = cfg.header_size + rec.payload_size;
      e.small_sized_large_framed =
          rec.tag.kind == TagKind::LargeFramed && extent <= cfg.slot_size();
      report_.allocations.push_back(std::move(e));

      if (rec.tag.kind == TagKind::SmallFramed)
        ++report_.counters.small_framed;
      else if (rec.tag.kind == TagKind::LargeFramed)
        ++report_.counters.large_framed;
      if (report_.allocations.back().small_sized_large_framed)
        ++report_.counters.small_sized_large_framed;
    }

    report_.table = monitor_.table().stats();
    report_.table_slot_records = monitor_.table().slot_records();
    report_.table_record_bytes = monitor_.table().record_bytes();
    report_.memory.header_bytes = monitor_.heap().header_bytes();
    report_.memory.payload_bytes = monitor_.heap().payload_bytes();
    report_.memory.table_resident_bytes = report_.table.resident_bytes;
    report_.memory.overhead_ratio =
        report_.memory.payload_bytes == 0
            ? 0.0
            : static_cast<double>(report_.memory.header_bytes +
                                  report_.memory.table_resident_bytes) /
                  static_cast<double>(report_.memory.payload_bytes);
    report_.generated_unix_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    return std::move(report_);
  }

  const TraceProgram& program_;
  RunOptions options_;
  Monitor monitor_;
  ReferentOracle oracle_;
  RunReport report_;
  bool aborted_ = false;

  std::unordered_map<std::string, std::uint64_t> objects_;
  std::unordered_map<std::uint64_t, std::string> object_names_;
  std::unordered_map<std::uint64_t, TaggedWord> canonical_;
  std::unordered_map<std::string, VarState> vars_;
};

inline RunReport run(const TraceProgram& program,
                     const RunOptions& options = {}) {
  return TraceVm(program, options).run();
}

}  // namespace frametag

#endif  // FRAMETAG_VM_HPP_
