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

#ifndef FRAMETAG_STUDY_HPP_
#define FRAMETAG_STUDY_HPP_

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "frametag/fuzz.hpp"
#include "frametag/tag_config.hpp"
#include "frametag/trace.hpp"
#include "frametag/vm.hpp"

namespace frametag {

/// Tag-width trade-off study: how often objects become large-framed, and
/// what the shadow table costs, as the spare bits shrink.
struct StudyParams {
  SizeDist sizes{};
  std::uint64_t seeds = 10;
  std::uint64_t objects = 1000;
  std::vector<std::uint32_t> spare_bits_list{16, 8};
  std::uint32_t addr_bits = 48;
};

struct StudyRow {
  std::uint32_t spare_bits = 0;
  std::uint64_t seed = 0;
  std::uint64_t objects = 0;
  double large_framed_fraction = 0.0;
  double small_sized_large_framed_fraction = 0.0;
  std::uint64_t table_resident_bytes = 0;
  double overhead_ratio = 0.0;
};

/// Runs one allocation-only workload per seed under each configuration.
/// The generated program is independent of the tag width, so every
/// configuration sees the identical sequence of extents.
inline std::vector<StudyRow> tag_width_study(const StudyParams& params) {
  FuzzParams fuzz;
  fuzz.n_objects = params.objects;
  fuzz.n_events = 0;
  fuzz.size_dist = params.sizes;
  fuzz.placement = Placement::RandomizedGaps;
  fuzz.straddlers = false;
  fuzz.typed = false;

  std::vector<StudyRow> rows;
  for (std::uint32_t spare : params.spare_bits_list) {
    for (std::uint64_t seed = 0; seed < params.seeds; ++seed) {
      const TraceProgram program = parse(fuzz_trace(seed, fuzz));
      RunOptions options;
      options.config = TagConfig{params.addr_bits, spare, 16};
      options.placement = Placement::RandomizedGaps;
      options.seed = seed;
      const RunReport report = run(program, options);

      StudyRow row;
      row.spare_bits = spare;
      row.seed = seed;
      row.objects = report.counters.allocs;
      const double n = static_cast<double>(report.counters.allocs);
      row.large_framed_fraction =
          n == 0 ? 0.0 : static_cast<double>(report.counters.large_framed) / n;
      row.small_sized_large_framed_fraction =
          n == 0 ? 0.0
                 : static_cast<double>(
                       report.counters.small_sized_large_framed) /
                       n;
      row.table_resident_bytes = report.memory.table_resident_bytes;
      row.overhead_ratio = report.memory.overhead_ratio;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string study_csv(const std::vector<StudyRow>& rows) {
  std::string out =
      "spare_bits,seed,objects,large_framed_fraction,"
      "small_sized_large_framed_fraction,table_resident_bytes,"
      "overhead_ratio\n";
  char buf[256];
  for (const StudyRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%u,%llu,%llu,%.6f,%.6f,%llu,%.6f\n",
                  r.spare_bits, static_cast<unsigned long long>(r.seed),
                  static_cast<unsigned long long>(r.objects),
                  r.large_framed_fraction,
                  r.small_sized_large_framed_fraction,
                  static_cast<unsigned long long>(r.table_resident_bytes),
                  r.overhead_ratio);
    out += buf;
  }
  return out;
}

}  // namespace frametag

#endif  // FRAMETAG_STUDY_HPP_
