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

#ifndef FRAMETAG_FUZZ_HPP_
#define FRAMETAG_FUZZ_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frametag/errors.hpp"
#include "frametag/sim_heap.hpp"

namespace frametag {

struct SizeDist {
  enum class Kind : std::uint8_t { Uniform, Fixed };
  Kind kind = Kind::Uniform;
  std::uint64_t lo = 1;
  std::uint64_t hi = 4096;

  /// Accepts "uniform:<lo>:<hi>" or "fixed:<n>".
  static SizeDist parse(const std::string& text) {
    SizeDist d;
    if (text.starts_with("uniform:")) {
      const std::string rest = text.substr(8);
      const std::size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw UsageError("size dist: expected uniform:<lo>:<hi>");
      d.kind = Kind::Uniform;
      d.lo = std::stoull(rest.substr(0, colon));
      d.hi = std::stoull(rest.substr(colon + 1));
      if (d.lo == 0 || d.lo > d.hi)
        throw UsageError("size dist: bad uniform range");
    } else if (text.starts_with("fixed:")) {
      d.kind = Kind::Fixed;
      d.lo = d.hi = std::stoull(text.substr(6));
      if (d.lo == 0) throw UsageError("size dist: fixed size must be >= 1");
    } else {
      throw UsageError("size dist: expected uniform:<lo>:<hi> or fixed:<n>");
    }
    return d;
  }

  std::string to_string() const {
    if (kind == Kind::Fixed) return "fixed:" + std::to_string(lo);
    return "uniform:" + std::to_string(lo) + ":" + std::to_string(hi);
  }
};

/// Relative weights for the event generator. A zero weight removes the
/// event kind entirely, e.g. zero `uaf` and `free_live` yields a program
/// with no free statements at all.
struct OpMix {
  std::uint32_t in_bounds = 6;
  std::uint32_t oob = 3;
  std::uint32_t out_and_back = 2;
  std::uint32_t one_past_end = 2;
  std::uint32_t uaf = 1;
  std::uint32_t free_live = 1;
  std::uint32_t cast = 2;
};

struct FuzzParams {
  std::uint64_t n_objects = 48;
  std::uint64_t n_events = 400;  // statement budget for the event section
  SizeDist size_dist{};
  Placement placement = Placement::RandomizedGaps;
  OpMix mix{};
  bool straddlers = true;  // force one allocation bigger than any slot
  bool typed = true;       // emit typedefs and typed allocations
  bool vary_align = true;  // sprinkle align=32/64 over the allocations
};

/// Deterministic trace generator: identical (seed, params) produce
/// byte-identical programs. The output never depends on a tag configuration,
/// so one program can be replayed under several of them.
///
/// Escaped words are dereferenced but never freed: a free through a word
/// that left its frame could release a bystander object and leave the
/// ground truth describing a different machine.
class FuzzGenerator {
 public:
  FuzzGenerator(std::uint64_t seed, const FuzzParams& params)
      : params_(params), rng_(seed), seed_(seed) {}

  std::string generate() {
    out_.str("");
    out_ << "# fuzz seed=" << seed_ << " objects=" << params_.n_objects
         << " events=" << params_.n_events
         << " sizes=" << params_.size_dist.to_string() << " placement="
         << (params_.placement == Placement::Bump ? "bump" : "gaps") << "\n";
    emit_typedefs();
    emit_allocs();
    emit_events();
    return out_.str();
  }

 private:
  // The hop is bigger than any slot (slot_exp <= 15), so stepping a whole
  // hop from inside a small frame always crosses it.
  static constexpr std::int64_t kFrameHop = 1 << 16;

  std::uint64_t draw(std::uint64_t lo, std::uint64_t hi) {
    return lo + rng_() % (hi - lo + 1);
  }

  std::uint64_t draw_size() {
    if (params_.size_dist.kind == SizeDist::Kind::Fixed)
      return params_.size_dist.lo;
    return draw(params_.size_dist.lo, params_.size_dist.hi);
  }

  void emit_typedefs() {
    if (!params_.typed || params_.mix.cast == 0) return;
    out_ << "typedef pair32 struct 0:int32 4:int32 size=8\n";
    out_ << "typedef quad struct 0:pair32 8:pair32 size=16\n";
  }

  void emit_allocs() {
    sizes_.resize(params_.n_objects);
    typed_.assign(params_.n_objects, false);
    live_.assign(params_.n_objects, true);
    for (std::uint64_t i = 0; i < params_.n_objects; ++i) {
      std::uint64_t size = draw_size();
      if (params_.straddlers && i == 0) size = 65536;
      sizes_[i] = size;
      out_ << "alloc o" << i << " " << size;
      if (params_.typed && params_.mix.cast > 0 && size >= 16 &&
          draw(0, 2) == 0) {
        out_ << " type=quad";
        typed_[i] = true;
      } else if (params_.typed && params_.mix.cast > 0 && size >= 8 &&
                 draw(0, 2) == 0) {
        out_ << " type=pair32";
        typed_[i] = true;
      }
      if (params_.vary_align && draw(0, 7) == 0)
        out_ << " align=" << (16u << draw(0, 2));
      out_ << "\n";
    }
  }

  enum class Ev : std::uint8_t {
    InBounds,
    Oob,
    OutAndBack,
    OnePastEnd,
    Uaf,
    FreeLive,
    Cast,
  };

  void emit_events() {
    if (params_.n_events == 0) return;
    std::vector<std::pair<Ev, std::uint32_t>> weighted = {
        {Ev::InBounds, params_.mix.in_bounds},
        {Ev::Oob, params_.mix.oob},
        {Ev::OutAndBack, params_.mix.out_and_back},
        {Ev::OnePastEnd, params_.mix.one_past_end},
        {Ev::Uaf, params_.mix.uaf},
        {Ev::FreeLive, params_.mix.free_live},
        {Ev::Cast, params_.mix.cast},
    };
    std::erase_if(weighted, [](const auto& w) { return w.second == 0; });
    if (weighted.empty()) return;

    // One of each enabled kind up front guarantees the mix, then the
    // weighted remainder.
    for (const auto& [ev, weight] : weighted) emit_event(ev);
    std::uint32_t total = 0;
    for (const auto& [ev, weight] : weighted) total += weight;
    while (emitted_ < params_.n_events) {
      std::uint32_t pick = static_cast<std::uint32_t>(draw(0, total - 1));
      for (const auto& [ev, weight] : weighted) {
        if (pick < weight) {
          emit_event(ev);
          break;
        }
        pick -= weight;
      }
    }
  }

  // Objects are picked from the live set; the generator keeps at least two
  // alive so every kind stays available.
  std::int64_t pick_live(bool typed_only = false) {
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t i = 0; i < params_.n_objects; ++i)
      if (live_[i] && (!typed_only || typed_[i])) candidates.push_back(i);
    if (candidates.empty()) return -1;
    return static_cast<std::int64_t>(candidates[draw(0, candidates.size() - 1)]);
  }

  std::uint64_t live_count() const {
    std::uint64_t n = 0;
    for (bool b : live_) n += b;
    return n;
  }

  std::string fresh(const char* stem) {
    return std::string(stem) + std::to_string(counter_++);
  }

  void stmt(const std::string& s) {
    out_ << s << "\n";
    ++emitted_;
  }

  void emit_event(Ev ev) {
    switch (ev) {
      case Ev::InBounds: {
        const std::int64_t i = pick_live();
        if (i < 0) return;
        const std::uint64_t size = sizes_[i];
        const std::uint64_t off = draw(0, size - 1);
        const std::uint64_t width = draw(1, std::min<std::uint64_t>(8, size - off));
        const std::string p = fresh("p");
        stmt("let " + p + " = ptr o" + std::to_string(i) + " + " +
             std::to_string(off));
        stmt((draw(0, 1) ? "load " : "store ") + p + " " +
             std::to_string(width));
        break;
      }
      case Ev::Oob: {
        const std::int64_t i = pick_live();
        if (i < 0) return;
        const std::uint64_t size = sizes_[i];
        const std::uint64_t off = size - std::min<std::uint64_t>(size - 1, draw(0, 3)) - 1;
        const std::uint64_t width = (size - off) + draw(1, 4);
        const std::string p = fresh("p");
        stmt("let " + p + " = ptr o" + std::to_string(i) + " + " +
             std::to_string(off));
        stmt((draw(0, 1) ? "load " : "store ") + p + " " +
             std::to_string(width));
        break;
      }
      case Ev::OutAndBack: {
        const std::int64_t i = pick_live();
        if (i < 0) return;
        const std::string p = fresh("p");
        const std::string q = fresh("q");
        stmt("let " + p + " = ptr o" + std::to_string(i));
        stmt("add " + q + " = " + p + " + " + std::to_string(kFrameHop));
        if (draw(0, 2) == 0) {
          // Dereference while out: the escape was flagged at arithmetic.
          stmt("load " + q + " 1");
        } else {
          const std::string r = fresh("r");
          stmt("add " + r + " = " + q + " - " + std::to_string(kFrameHop));
          stmt("load " + r + " 1");
        }
        break;
      }
      case Ev::OnePastEnd: {
        const std::int64_t i = pick_live();
        if (i < 0) return;
        const std::uint64_t size = sizes_[i];
        const std::string p = fresh("p");
        const std::string q = fresh("q");
        stmt("let " + p + " = ptr o" + std::to_string(i));
        stmt("add " + q + " = " + p + " + " + std::to_string(size));
        if (draw(0, 1)) {
          const std::string r = fresh("r");
          stmt("add " + r + " = " + q + " - " + std::to_string(size));
          stmt("load " + r + " 1");
        }
        break;
      }
      case Ev::Uaf: {
        if (live_count() <= 2) return;
        const std::int64_t i = pick_live();
        if (i < 0) return;
        const std::string p = fresh("p");
        stmt("let " + p + " = ptr o" + std::to_string(i));
        stmt("free o" + std::to_string(i));
        live_[i] = false;
        stmt("load " + p + " 1");
        if (draw(0, 3) == 0) stmt("free o" + std::to_string(i));
        break;
      }
      case Ev::FreeLive: {
        if (live_count() <= 2) return;
        const std::int64_t i = pick_live();
        if (i < 0) return;
        stmt("free o" + std::to_string(i));
        live_[i] = false;
        break;
      }
      case Ev::Cast: {
        const std::int64_t i = pick_live(/*typed_only=*/true);
        if (i < 0) return;
        const std::string p = fresh("p");
        static constexpr std::uint64_t kOffsets[] = {0, 4, 2, 8};
        static const char* const kTargets[] = {"int32", "pair32", "quad",
                                               "int64"};
        const std::uint64_t off = kOffsets[draw(0, 3)];
        stmt("let " + p + " = ptr o" + std::to_string(i) + " + " +
             std::to_string(off));
        stmt("cast " + p + " " + kTargets[draw(0, 3)]);
        break;
      }
    }
  }

  FuzzParams params_;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
  std::ostringstream out_;
  std::vector<std::uint64_t> sizes_;
  std::vector<bool> typed_;
  std::vector<bool> live_;
  std::uint64_t counter_ = 0;
  std::uint64_t emitted_ = 0;
};

inline std::string fuzz_trace(std::uint64_t seed, const FuzzParams& params) {
  return FuzzGenerator(seed, params).generate();
}

}  // namespace frametag

#endif  // FRAMETAG_FUZZ_HPP_
