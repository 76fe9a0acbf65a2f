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

#ifndef FRAMETAG_REPORT_HPP_
#define FRAMETAG_REPORT_HPP_

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frametag/frame_algebra.hpp"
#include "frametag/monitor.hpp"
#include "frametag/oracle.hpp"
#include "frametag/shadow_table.hpp"
#include "frametag/sim_heap.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/trace.hpp"
#include "frametag/verdict.hpp"

namespace frametag {

struct EventRecord {
  std::uint64_t index = 0;
  int line = 0;
  std::string text;
  StmtKind kind = StmtKind::Alloc;
  Outcome monitor = Outcome::Ok;
  Outcome oracle = Outcome::Ok;
  std::optional<DiscrepancyClass> classification;
  std::optional<std::uint64_t> referent;
  std::optional<Outcome> expected;
  bool expect_failed = false;
};

struct RunCounters {
  std::uint64_t events = 0;
  std::uint64_t allocs = 0;
  std::uint64_t frees = 0;
  std::uint64_t ariths = 0;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t casts = 0;

  std::uint64_t small_framed = 0;
  std::uint64_t large_framed = 0;
  // Extent no bigger than a slot, yet still large-framed: it straddles a
  // slot boundary.
  std::uint64_t small_sized_large_framed = 0;

  std::uint64_t monitor_flags = 0;
  std::uint64_t oracle_flags = 0;
  std::uint64_t true_detections = 0;
  std::uint64_t fp_out_and_back = 0;
  std::uint64_t fp_one_past_end = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t bugs = 0;
  std::uint64_t expect_failures = 0;
};

struct MemoryAccounting {
  std::uint64_t header_bytes = 0;
  std::uint64_t table_resident_bytes = 0;
  std::uint64_t payload_bytes = 0;
  double overhead_ratio = 0.0;  // (header + table) / payload; 0 when empty
};

struct AllocationLogEntry {
  std::uint64_t object_id = 0;
  std::string name;
  AddressWord md_addr = 0;
  AddressWord payload_base = 0;
  std::uint64_t payload_size = 0;
  TagKind tag_kind = TagKind::Untagged;
  std::uint64_t offset = 0;        // small-framed
  std::uint32_t wrapper_exp = 0;   // large-framed
  bool small_sized_large_framed = false;
  bool live = true;
};

struct RunReport {
  TagConfig config;
  MonitorPolicy policy;
  Placement placement = Placement::Bump;
  std::uint64_t seed = 0;

  std::vector<EventRecord> events;
  std::vector<Discrepancy> discrepancies;
  std::vector<AllocationLogEntry> allocations;
  RunCounters counters;
  MemoryAccounting memory;
  TableStats table;
  std::uint64_t table_slot_records = 0;
  std::uint64_t table_record_bytes = 0;
  std::optional<std::uint64_t> aborted_at_event;
  std::uint64_t generated_unix_ms = 0;  // excluded from determinism checks

  bool clean() const {
    return counters.expect_failures == 0 && counters.bugs == 0;
  }
};

namespace detail {

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const RunReport& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["config"] = {
      {"addr_bits", r.config.addr_bits},
      {"spare_bits", r.config.spare_bits},
      {"slot_exp", r.config.slot_exp()},
      {"header_size", r.config.header_size},
      {"policy", r.policy.on_violation == MonitorPolicy::OnViolation::Abort
                     ? "abort"
                     : "record"},
      {"arithmetic_check", r.policy.arithmetic_check},
      {"placement",
       r.placement == Placement::Bump ? "bump" : "randomized-gaps"},
      {"seed", r.seed},
  };
  j["generated_unix_ms"] = r.generated_unix_ms;
  j["aborted_at_event"] =
      r.aborted_at_event ? json(*r.aborted_at_event) : json(nullptr);

  j["counters"] = {
      {"events", r.counters.events},
      {"allocs", r.counters.allocs},
      {"frees", r.counters.frees},
      {"ariths", r.counters.ariths},
      {"loads", r.counters.loads},
      {"stores", r.counters.stores},
      {"casts", r.counters.casts},
      {"small_framed", r.counters.small_framed},
      {"large_framed", r.counters.large_framed},
      {"small_sized_large_framed", r.counters.small_sized_large_framed},
      {"monitor_flags", r.counters.monitor_flags},
      {"oracle_flags", r.counters.oracle_flags},
      {"true_detections", r.counters.true_detections},
      {"fp_out_and_back", r.counters.fp_out_and_back},
      {"fp_one_past_end", r.counters.fp_one_past_end},
      {"false_negatives", r.counters.false_negatives},
      {"bugs", r.counters.bugs},
      {"expect_failures", r.counters.expect_failures},
  };
  j["memory"] = {
      {"header_bytes", r.memory.header_bytes},
      {"table_resident_bytes", r.memory.table_resident_bytes},
      {"payload_bytes", r.memory.payload_bytes},
      {"overhead_ratio", r.memory.overhead_ratio},
  };
  j["table"] = {
      {"live_entries", r.table.live_entries},
      {"peak_entries", r.table.peak_entries},
      {"resident_bytes", r.table.resident_bytes},
      {"peak_resident_bytes", r.table.peak_resident_bytes},
      {"slot_records", r.table_slot_records},
      {"record_bytes", r.table_record_bytes},
  };

  j["allocations"] = json::array();
  for (const AllocationLogEntry& a : r.allocations) {
    json e = {
        {"object_id", a.object_id},
        {"name", a.name},
        {"md_addr", detail::hex(a.md_addr)},
        {"payload_base", detail::hex(a.payload_base)},
        {"payload_size", a.payload_size},
        {"tag",
         a.tag_kind == TagKind::SmallFramed
             ? "small"
             : (a.tag_kind == TagKind::LargeFramed ? "large" : "untagged")},
        {"small_sized_large_framed", a.small_sized_large_framed},
        {"live", a.live},
    };
    if (a.tag_kind == TagKind::SmallFramed)
      e["offset"] = a.offset;
    else if (a.tag_kind == TagKind::LargeFramed)
      e["wrapper_exp"] = a.wrapper_exp;
    j["allocations"].push_back(std::move(e));
  }

  j["events"] = json::array();
  for (const EventRecord& e : r.events) {
    json ev = {
        {"index", e.index},
        {"line", e.line},
        {"text", e.text},
        {"kind", std::string(to_string(e.kind))},
        {"monitor", std::string(to_string(e.monitor))},
        {"oracle", std::string(to_string(e.oracle))},
        {"class", e.classification
                      ? json(std::string(to_string(*e.classification)))
                      : json(nullptr)},
        {"referent",
         e.referent ? json(*e.referent) : json(nullptr)},
        {"expected", e.expected
                         ? json(std::string(to_string(*e.expected)))
                         : json(nullptr)},
        {"expect_failed", e.expect_failed},
    };
    j["events"].push_back(std::move(ev));
  }

  j["discrepancies"] = json::array();
  for (const Discrepancy& d : r.discrepancies) {
    j["discrepancies"].push_back({
        {"event_index", d.event_index},
        {"monitor", std::string(to_string(d.monitor))},
        {"oracle", std::string(to_string(d.oracle))},
        {"class", std::string(to_string(d.classification))},
    });
  }
  return j;
}

inline std::string to_json_text(const RunReport& r) {
  return to_json(r).dump(2) + "\n";
}

/// Human-oriented aligned-column summary.
inline std::string summarize(const RunReport& r) {
  std::ostringstream os;
  const auto row = [&os](const std::string& k, const std::string& v) {
    os << "  " << std::left << std::setw(28) << k << v << "\n";
  };
  os << "run summary\n";
  row("config", "addr_bits=" + std::to_string(r.config.addr_bits) +
                    " spare_bits=" + std::to_string(r.config.spare_bits) +
                    " slot=2^" + std::to_string(r.config.slot_exp()));
  row("policy", r.policy.on_violation == MonitorPolicy::OnViolation::Abort
                    ? "abort"
                    : "record");
  row("placement", r.placement == Placement::Bump ? "bump" : "randomized-gaps");
  row("seed", std::to_string(r.seed));
  row("events", std::to_string(r.counters.events));
  row("allocations",
      std::to_string(r.counters.allocs) + " (" +
          std::to_string(r.counters.small_framed) + " small-framed, " +
          std::to_string(r.counters.large_framed) + " large-framed, " +
          std::to_string(r.counters.small_sized_large_framed) +
          " small-sized-but-large-framed)");
  row("monitor flags", std::to_string(r.counters.monitor_flags));
  row("oracle flags", std::to_string(r.counters.oracle_flags));
  row("true detections", std::to_string(r.counters.true_detections));
  row("fp out-and-back", std::to_string(r.counters.fp_out_and_back));
  row("fp one-past-end", std::to_string(r.counters.fp_one_past_end));
  row("false negatives", std::to_string(r.counters.false_negatives));
  row("bugs", std::to_string(r.counters.bugs));
  row("expect failures", std::to_string(r.counters.expect_failures));
  row("header bytes", std::to_string(r.memory.header_bytes));
  row("table resident bytes", std::to_string(r.memory.table_resident_bytes));
  row("payload bytes", std::to_string(r.memory.payload_bytes));
  {
    std::ostringstream ratio;
    ratio << std::setprecision(6) << std::fixed << r.memory.overhead_ratio;
    row("overhead ratio", ratio.str());
  }
  if (r.aborted_at_event)
    row("aborted at event", std::to_string(*r.aborted_at_event));
  return os.str();
}

}  // namespace frametag

#endif  // FRAMETAG_REPORT_HPP_
