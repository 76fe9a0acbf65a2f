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

#ifndef FRAMETAG_VERDICT_HPP_
#define FRAMETAG_VERDICT_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

namespace frametag {

enum class Outcome : std::uint8_t {
  Ok = 0,
  OutOfBounds,
  UseAfterFree,
  DoubleFree,
  InFrameViolation,
  CastError,
  MissingMetadata,
};

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Ok: return "ok";
    case Outcome::OutOfBounds: return "oob";
    case Outcome::UseAfterFree: return "uaf";
    case Outcome::DoubleFree: return "double-free";
    case Outcome::InFrameViolation: return "inframe-violation";
    case Outcome::CastError: return "cast-error";
    case Outcome::MissingMetadata: return "missing-metadata";
  }
  return "?";
}

constexpr std::optional<Outcome> outcome_from_token(std::string_view token) {
  for (auto o : {Outcome::Ok, Outcome::OutOfBounds, Outcome::UseAfterFree,
                 Outcome::DoubleFree, Outcome::InFrameViolation,
                 Outcome::CastError, Outcome::MissingMetadata}) {
    if (to_string(o) == token) return o;
  }
  return std::nullopt;
}

/// Result of one monitored event. An Ok verdict carries no offending
/// address.
struct Verdict {
  Outcome outcome = Outcome::Ok;
  std::optional<std::uint64_t> object_id;  // when known
  std::uint64_t addr = 0;                  // offending address, if any
  std::uint64_t width = 0;                 // access width, if any

  bool ok() const { return outcome == Outcome::Ok; }

  static Verdict pass() { return Verdict{}; }
  static Verdict pass(std::uint64_t object_id) {
    Verdict v;
    v.object_id = object_id;
    return v;
  }
  static Verdict fail(Outcome outcome, std::uint64_t addr,
                      std::uint64_t width = 0,
                      std::optional<std::uint64_t> object_id = std::nullopt) {
    return Verdict{outcome, object_id, addr, width};
  }
};

}  // namespace frametag

#endif  // FRAMETAG_VERDICT_HPP_
