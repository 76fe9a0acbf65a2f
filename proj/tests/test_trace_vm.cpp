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

#include "frametag/vm.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch.hpp>

#include "frametag/report.hpp"
#include "frametag/trace.hpp"

using namespace frametag;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry :
       std::filesystem::directory_iterator(FRAMETAG_TRACE_DIR))
    if (entry.path().extension() == ".trace") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  REQUIRE(!files.empty());
  return files;
}

}  // namespace

TEST_CASE("parser accepts the statement forms") {
  const auto program = parse(
      "# comment\n"
      "typedef pair struct 0:int32 4:int32 size=8\n"
      "alloc a 0x40 type=pair align=32\n"
      "let p = ptr a + 4\n"
      "add q = p + 0x10\n"
      "add r = q - 8\n"
      "load r 2\n"
      "store r 4\n"
      "cast p pair\n"
      "expect ok\n"
      "free a\n");
  REQUIRE(program.statements.size() == 9);
  CHECK(program.statements[0].kind == StmtKind::Typedef);
  CHECK(program.statements[1].size == 0x40);
  CHECK(program.statements[1].align == 32);
  CHECK(program.statements[2].offset == 4);
  CHECK(program.statements[3].delta == 16);
  CHECK(program.statements[4].delta == -8);
  CHECK(program.statements[7].expected == Outcome::Ok);  // binds to the cast
  CHECK_FALSE(program.statements[6].expected.has_value());
}

TEST_CASE("parser rejects malformed programs with line numbers") {
  const auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("alloc a 8\nload p 1\n") == 2);       // undefined variable
  CHECK(line_of("frobnicate x\n") == 1);              // unknown statement
  CHECK(line_of("alloc a 12x\n") == 1);               // malformed integer
  CHECK(line_of("alloc a 8\nalloc a 8\n") == 2);      // duplicate object
  CHECK(line_of("expect ok\n") == 1);                 // nothing to bind
  CHECK(line_of("alloc a 8\nexpect what\n") == 2);    // unknown outcome
  CHECK(line_of("typedef t struct 0:int32\n") == 1);  // missing size=
  CHECK(line_of("alloc a 8\ncast a int32\n") == 2);   // object is not a var
  CHECK(line_of("let p = ptr a\n") == 1);             // undefined object
  CHECK(line_of("alloc a 8\nlet p = ptr a\nexpect ok\nexpect ok\n") == 4);
}

TEST_CASE("empty program yields an empty report") {
  const RunReport r = run(parse(""), {});
  CHECK(r.events.empty());
  CHECK(r.counters.events == 0);
  CHECK(r.memory.payload_bytes == 0);
  CHECK(r.memory.overhead_ratio == 0.0);
}

TEST_CASE("the overrun example flags at the store") {
  const auto program = parse(
      "alloc a 10\n"
      "let p = ptr a\n"
      "add q = p + 8\n"
      "store q 4\n"
      "store q 2\n");
  const RunReport r = run(program, {});
  REQUIRE(r.events.size() == 5);
  CHECK(r.events[3].monitor == Outcome::OutOfBounds);
  CHECK(r.events[3].oracle == Outcome::OutOfBounds);
  CHECK(r.events[3].classification == DiscrepancyClass::TrueDetection);
  CHECK(r.events[4].monitor == Outcome::Ok);
  CHECK(r.counters.false_negatives == 0);
  CHECK(r.counters.bugs == 0);
}

TEST_CASE("bundled corpus passes every expect under both tag widths") {
  for (const auto& path : corpus_files()) {
    const TraceProgram program = parse(slurp(path));
    for (const TagConfig cfg : {TagConfig::classic(), TagConfig::tbi()}) {
      RunOptions opt;
      opt.config = cfg;
      const RunReport r = run(program, opt);
      INFO(path.filename().string()
           << " spare_bits=" << cfg.spare_bits);
      CHECK(r.counters.expect_failures == 0);
      CHECK(r.counters.bugs == 0);
      CHECK(r.counters.false_negatives == 0);
    }
  }
}

TEST_CASE("corpus exhibits both documented false-positive classes") {
  std::uint64_t out_and_back = 0;
  std::uint64_t one_past_end = 0;
  for (const auto& path : corpus_files()) {
    const RunReport r = run(parse(slurp(path)), {});
    out_and_back += r.counters.fp_out_and_back;
    one_past_end += r.counters.fp_one_past_end;
  }
  CHECK(out_and_back >= 1);
  CHECK(one_past_end >= 1);
}

TEST_CASE("abort policy stops at the first violation") {
  const auto program = parse(
      "alloc a 10\n"
      "let p = ptr a\n"
      "add q = p + 8\n"
      "store q 4\n"
      "store q 2\n");
  RunOptions opt;
  opt.policy.on_violation = MonitorPolicy::OnViolation::Abort;
  const RunReport r = run(program, opt);
  REQUIRE(r.aborted_at_event.has_value());
  CHECK(*r.aborted_at_event == 3);
  CHECK(r.events.size() == 4);  // the trailing store never ran
}

TEST_CASE("the in-frame check closes the cross-slot false-negative hole") {
  // Two identical extents fill adjacent slots, so the same in-slot offset
  // names both headers. Hopping one slot lands on the neighbor's payload
  // base, where derivation finds a live header and the bounds pass.
  const auto program = parse(
      "alloc a 32752\n"
      "alloc b 32752\n"
      "let p = ptr a\n"
      "add q = p + 32768\n"
      "load q 16\n");

  RunOptions lax;
  lax.policy.arithmetic_check = false;
  const RunReport miss = run(program, lax);
  CHECK(miss.events[3].monitor == Outcome::Ok);  // nothing flags the hop
  CHECK(miss.events[4].monitor == Outcome::Ok);  // hijacked capability
  CHECK(miss.events[4].oracle == Outcome::OutOfBounds);
  CHECK(miss.counters.false_negatives == 1);

  const RunReport checked = run(program, {});
  CHECK(checked.events[3].monitor == Outcome::InFrameViolation);
  CHECK(checked.events[4].classification ==
        DiscrepancyClass::TrueDetection);  // credited to the arithmetic flag
  CHECK(checked.counters.false_negatives == 0);
}

TEST_CASE("memory accounting identity") {
  const auto program = parse(
      "alloc a 100\n"
      "alloc big 40000\n"
      "alloc c 7\n"
      "free c\n");
  const RunReport r = run(program, {});
  // Recompute from the allocation log.
  std::uint64_t payload = 0;
  std::set<std::uint64_t> slots;
  for (const AllocationLogEntry& a : r.allocations) {
    payload += a.payload_size;
    if (a.tag_kind == TagKind::LargeFramed && a.live) {
      const std::uint64_t base =
          a.md_addr & ~((std::uint64_t{1} << a.wrapper_exp) - 1);
      slots.insert(base >> r.config.slot_exp());
    }
  }
  const std::uint64_t headers = 16 * r.allocations.size();
  const std::uint64_t table = slots.size() * r.table_record_bytes;
  CHECK(r.memory.header_bytes == headers);
  CHECK(r.memory.payload_bytes == payload);
  CHECK(r.memory.table_resident_bytes == table);
  CHECK(r.memory.overhead_ratio ==
        static_cast<double>(headers + table) / static_cast<double>(payload));
}

TEST_CASE("reports are byte-identical modulo the timestamp") {
  const auto program = parse(slurp(corpus_files().front()));
  RunOptions opt;
  opt.placement = Placement::RandomizedGaps;
  opt.seed = 42;
  RunReport a = run(program, opt);
  RunReport b = run(program, opt);
  a.generated_unix_ms = 0;
  b.generated_unix_ms = 0;
  CHECK(to_json_text(a) == to_json_text(b));
}

TEST_CASE("free works through variables as well as object names") {
  const auto program = parse(
      "alloc a 32\n"
      "let p = ptr a\n"
      "add q = p + 1\n"
      "free q\n"    // not the payload base
      "free p\n"    // proper free through the word
      "load p 1\n"  // stale word
      "free a\n");  // double free by name
  const RunReport r = run(program, {});
  CHECK(r.events[3].monitor == Outcome::OutOfBounds);
  CHECK(r.events[3].oracle == Outcome::OutOfBounds);
  CHECK(r.events[4].monitor == Outcome::Ok);
  CHECK(r.events[5].monitor == Outcome::UseAfterFree);
  CHECK(r.events[6].monitor == Outcome::DoubleFree);
  CHECK(r.counters.bugs == 0);
  CHECK(r.counters.false_negatives == 0);
}

TEST_CASE("a narrow 24-bit address space works end to end") {
  RunOptions opt;
  opt.config = TagConfig{24, 8, 16};
  opt.config.validate();
  const auto program = parse(
      "alloc a 100\n"
      "let p = ptr a\n"
      "store p 100\n"
      "add q = p + 100\n"
      "load q 1\n"
      "free a\n");
  const RunReport r = run(program, opt);
  CHECK(r.counters.false_negatives == 0);
  CHECK(r.counters.bugs == 0);
  CHECK(r.events[2].monitor == Outcome::Ok);
  // load at one-past-the-end is out of bounds on both sides.
  CHECK(r.events[4].oracle == Outcome::OutOfBounds);
  CHECK(r.events[4].monitor != Outcome::Ok);
}

TEST_CASE("trace-level faults carry line numbers") {
  // Arena exhaustion surfaces as a trace error on the alloc's line.
  const auto program = parse("alloc a 1\nalloc huge 0x400000000000\n");
  try {
    run(program, {});
    FAIL("expected a trace error");
  } catch (const TraceError& e) {
    CHECK(e.line == 2);
  }
}
