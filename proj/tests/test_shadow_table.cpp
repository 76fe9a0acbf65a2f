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

#include "frametag/shadow_table.hpp"

#include <random>

#include <catch2/catch.hpp>

#include "frametag/sim_heap.hpp"
#include "test_oracles.hpp"

using namespace frametag;

namespace {
const TagConfig kClassic = TagConfig::classic();
}

TEST_CASE("insert, lookup, remove") {
  ShadowTable table(kClassic);
  const AddressWord base = 0x700012340000;
  const AddressWord md = 0x700012347FF0;
  table.insert(base, 16, md);

  SECTION("lookup recomputes the slot index independently") {
    // slot_index = base >> 15 by the library; check against division.
    CHECK(base / kClassic.slot_size() == (base >> 15));
    CHECK(table.lookup(0x70001234A5A5, 16) == md);
  }
  SECTION("lookup is constant across the whole frame") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 1000; ++i)
      CHECK(table.lookup(base + rng() % (1u << 16), 16) == md);
    // One byte beyond misses.
    CHECK_FALSE(table.lookup(base + (1u << 16), 16).has_value());
  }
  SECTION("remove then reinsert") {
    table.remove(base, 16);
    CHECK_FALSE(table.lookup(base, 16).has_value());
    CHECK(table.stats().live_entries == 0);
    CHECK_NOTHROW(table.insert(base, 16, md));
  }
  SECTION("second live insert at the same frame faults") {
    CHECK_THROWS_AS(table.insert(base, 16, md), InternalFault);
  }
  SECTION("remove of an absent entry is a usage error") {
    CHECK_THROWS_AS(table.remove(base, 17), UsageError);
    CHECK_THROWS_AS(table.remove(base + (1u << 16), 16), UsageError);
  }
  SECTION("argument validation") {
    CHECK_THROWS_AS(table.insert(base, 15, md), UsageError);   // == slot_exp
    CHECK_THROWS_AS(table.insert(base, 49, md), UsageError);   // > addr_bits
    CHECK_THROWS_AS(table.insert(base + 8, 16, md), UsageError);  // unaligned
    CHECK_THROWS_AS(table.lookup(base, 15), UsageError);
  }
}

TEST_CASE("two frames with different exponents share a slot record") {
  ShadowTable table(kClassic);
  const AddressWord base = 0x700000000000;  // aligned far beyond 2^17
  table.insert(base, 16, 0x1000);
  table.insert(base, 17, 0x2000);
  CHECK(table.slot_records() == 1);
  CHECK(table.stats().live_entries == 2);
  CHECK(table.lookup(base + 100, 16) == 0x1000);
  CHECK(table.lookup(base + 100, 17) == 0x2000);
  CHECK(table.stats().resident_bytes == table.record_bytes());

  table.remove(base, 16);
  CHECK(table.stats().resident_bytes == table.record_bytes());
  table.remove(base, 17);
  CHECK(table.stats().resident_bytes == 0);
  CHECK(table.slot_records() == 0);
}

TEST_CASE("stats track peaks and residency") {
  ShadowTable table(kClassic);
  table.insert(0x0, 16, 0x10);
  table.insert(0x10000, 16, 0x20);  // different slot
  CHECK(table.stats().live_entries == 2);
  CHECK(table.stats().peak_entries == 2);
  CHECK(table.stats().resident_bytes == 2 * table.record_bytes());
  table.remove(0x0, 16);
  CHECK(table.stats().live_entries == 1);
  CHECK(table.stats().peak_entries == 2);
  CHECK(table.stats().peak_resident_bytes == 2 * table.record_bytes());
}

TEST_CASE("uniqueness: fuzzed live objects never collide") {
  // Wrapper frames of simultaneously live objects are distinct because each
  // object spans its frame's midpoint; confirmed here over a fuzzed heap.
  ShadowTable table(kClassic);
  SimHeap heap(kClassic, HeapConfig::standard(
                             kClassic, Placement::RandomizedGaps, /*seed=*/5));
  std::mt19937_64 rng(37);
  std::uint64_t inserted = 0;
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t size = 1 + rng() % 8192;
    const AllocationRecord rec = heap.alloc(size, 0, 16);
    if (rec.tag.kind != TagKind::LargeFramed) continue;
    const WrapperFrame frame =
        wrapper_frame(rec.md_addr, rec.extent_last(), kClassic);
    CHECK_NOTHROW(table.insert(frame.base, frame.exp, rec.md_addr));
    ++inserted;
  }
  CHECK(inserted > 100);
  CHECK(table.stats().live_entries == inserted);
}
