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

#include "frametag/oracle.hpp"

#include <catch2/catch.hpp>

using namespace frametag;

TEST_CASE("truth_access judges against the intended referent") {
  ReferentOracle oracle;
  oracle.register_object(0, 0x1000, 16, 0);
  oracle.register_object(1, 0x1010, 16, 0);  // adjacent neighbor
  oracle.set_referent("p", 0);

  CHECK(oracle.truth_access("p", 0x1000, 1) == Outcome::Ok);
  CHECK(oracle.truth_access("p", 0x100F, 1) == Outcome::Ok);
  CHECK(oracle.truth_access("p", 0x1008, 8) == Outcome::Ok);
  // One byte too far, even though it lands inside the live neighbor.
  CHECK(oracle.truth_access("p", 0x1010, 1) == Outcome::OutOfBounds);
  CHECK(oracle.truth_access("p", 0x1008, 9) == Outcome::OutOfBounds);
  CHECK(oracle.truth_access("p", 0xFFF, 1) == Outcome::OutOfBounds);

  CHECK(oracle.live_object_at(0x1010) == 1);
  CHECK_FALSE(oracle.live_object_at(0x2000).has_value());

  CHECK(oracle.truth_free("p", 0x1000) == Outcome::Ok);
  CHECK(oracle.truth_access("p", 0x1000, 1) == Outcome::UseAfterFree);
  CHECK_THROWS_AS(oracle.truth_access("q", 0x1000, 1), UsageError);
}

TEST_CASE("truth_free mirrors the free contract") {
  ReferentOracle oracle;
  oracle.register_object(0, 0x2000, 32, 0);
  oracle.set_referent("p", 0);
  CHECK(oracle.truth_free("p", 0x2001) == Outcome::OutOfBounds);
  CHECK(oracle.live(0));
  CHECK(oracle.truth_free("p", 0x2000) == Outcome::Ok);
  CHECK(oracle.truth_free("p", 0x2000) == Outcome::DoubleFree);
  CHECK(oracle.truth_free_object(0) == Outcome::DoubleFree);
}

TEST_CASE("truth_cast walks the layout from the known base") {
  TypeRegistry types;
  const TypeId i32 = types.register_primitive("int32", 4);
  const TypeId i64 = types.register_primitive("int64", 8);
  const TypeId pair = types.register_aggregate("pair", 8, {{0, i32}, {4, i32}});

  ReferentOracle oracle;
  oracle.register_object(0, 0x3000, 8, pair);
  oracle.set_referent("p", 0);
  CHECK(oracle.truth_cast("p", 0x3000, pair, types) == Outcome::Ok);
  CHECK(oracle.truth_cast("p", 0x3000, i32, types) == Outcome::Ok);
  CHECK(oracle.truth_cast("p", 0x3004, i32, types) == Outcome::Ok);
  CHECK(oracle.truth_cast("p", 0x3002, i32, types) == Outcome::CastError);
  CHECK(oracle.truth_cast("p", 0x3000, i64, types) == Outcome::CastError);
  CHECK(oracle.truth_cast("p", 0x3008, i32, types) == Outcome::CastError);
}

TEST_CASE("overlapping registrations fault") {
  ReferentOracle oracle;
  oracle.register_object(0, 0x1000, 16, 0);
  CHECK_THROWS_AS(oracle.register_object(1, 0x100F, 4, 0), InternalFault);
  CHECK_THROWS_AS(oracle.register_object(2, 0xFF8, 16, 0), InternalFault);
  CHECK_NOTHROW(oracle.register_object(3, 0x1010, 4, 0));
}

TEST_CASE("classify sorts verdict pairs into the taxonomy") {
  const ClassifyContext plain{};
  ClassifyContext arith;
  arith.arithmetic_event = true;
  ClassifyContext one_past = arith;
  one_past.one_past_end = true;
  ClassifyContext flagged_chain;
  flagged_chain.chain_flagged = true;

  SECTION("agreement") {
    CHECK_FALSE(classify(Outcome::Ok, Outcome::Ok, plain).has_value());
    CHECK(classify(Outcome::OutOfBounds, Outcome::OutOfBounds, plain) ==
          DiscrepancyClass::TrueDetection);
    // Categories may differ; both sides flagged is a detection.
    CHECK(classify(Outcome::MissingMetadata, Outcome::UseAfterFree, plain) ==
          DiscrepancyClass::TrueDetection);
  }
  SECTION("monitor-only arithmetic flags are the two documented FP classes") {
    CHECK(classify(Outcome::InFrameViolation, Outcome::Ok, arith) ==
          DiscrepancyClass::FpOutAndBack);
    CHECK(classify(Outcome::InFrameViolation, Outcome::Ok, one_past) ==
          DiscrepancyClass::FpOnePastEnd);
  }
  SECTION("monitor-only flags outside arithmetic are bugs") {
    CHECK(classify(Outcome::OutOfBounds, Outcome::Ok, plain) ==
          DiscrepancyClass::Bug);
    ClassifyContext arith_wrong = arith;
    CHECK(classify(Outcome::OutOfBounds, Outcome::Ok, arith_wrong) ==
          DiscrepancyClass::Bug);
  }
  SECTION("oracle-only flags: detected at arithmetic or a genuine miss") {
    CHECK(classify(Outcome::Ok, Outcome::OutOfBounds, flagged_chain) ==
          DiscrepancyClass::TrueDetection);
    CHECK(classify(Outcome::Ok, Outcome::OutOfBounds, plain) ==
          DiscrepancyClass::FalseNegative);
    CHECK(classify(Outcome::Ok, Outcome::UseAfterFree, plain) ==
          DiscrepancyClass::FalseNegative);
  }
}
