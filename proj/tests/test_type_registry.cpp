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

#include "frametag/type_registry.hpp"

#include <vector>

#include <catch2/catch.hpp>

using namespace frametag;

namespace {

// Small registry used across the cases: int32, int64, float32,
// pair {0:int32, 4:int32}, outer {0:pair, 8:int64}.
struct Fixture {
  TypeRegistry reg;
  TypeId i32, i64, f32, pair, outer;
  Fixture() {
    i32 = reg.register_primitive("int32", 4);
    i64 = reg.register_primitive("int64", 8);
    f32 = reg.register_primitive("float32", 4);
    pair = reg.register_aggregate("pair", 8, {{0, i32}, {4, i32}});
    outer = reg.register_aggregate("outer", 16, {{0, pair}, {8, i64}});
  }
};

}  // namespace

TEST_CASE("registration and validation") {
  Fixture f;
  CHECK(f.reg.at(f.pair).size == 8);
  CHECK(f.reg.find("outer") == f.outer);
  CHECK_FALSE(f.reg.find("missing").has_value());

  // Field at offset 6 with size 4 does not fit a total of 8.
  CHECK_THROWS_AS(
      f.reg.register_aggregate("bad", 8, {{0, f.i32}, {6, f.i32}}),
      UsageError);
  // Overlap.
  CHECK_THROWS_AS(
      f.reg.register_aggregate("bad2", 12, {{0, f.i64}, {4, f.i32}}),
      UsageError);
  // Unsorted.
  CHECK_THROWS_AS(
      f.reg.register_aggregate("bad3", 12, {{4, f.i32}, {0, f.i32}}),
      UsageError);
  // Forward reference.
  CHECK_THROWS_AS(f.reg.register_aggregate("bad4", 8, {{0, TypeId{99}}}),
                  UsageError);
  CHECK_THROWS_AS(f.reg.register_primitive("pair", 8), UsageError);
}

TEST_CASE("type_at_offset walks the layout") {
  Fixture f;
  CHECK(f.reg.type_at_offset(f.pair, 0) == f.pair);
  CHECK(f.reg.type_at_offset(f.pair, 4) == f.i32);
  CHECK_FALSE(f.reg.type_at_offset(f.pair, 2).has_value());
  CHECK_FALSE(f.reg.type_at_offset(f.pair, 8).has_value());

  // Nested: offset 4 descends into pair's second field.
  CHECK(f.reg.type_at_offset(f.outer, 4) == f.i32);
  CHECK(f.reg.type_at_offset(f.outer, 8) == f.i64);
  CHECK_FALSE(f.reg.type_at_offset(f.outer, 9).has_value());

  // Wherever a type is found, it fits inside the enclosing one.
  for (TypeId t : {f.pair, f.outer}) {
    for (std::uint64_t off = 0; off < f.reg.at(t).size + 4; ++off) {
      const auto found = f.reg.type_at_offset(t, off);
      if (found)
        CHECK(off + f.reg.at(*found).size <= f.reg.at(t).size);
    }
  }
}

TEST_CASE("cast_compatible is the structural prefix rule") {
  Fixture f;
  SECTION("identity and primitives") {
    CHECK(f.reg.cast_compatible(f.pair, f.pair));
    CHECK(f.reg.cast_compatible(f.i32, f.f32));  // same size primitives
    CHECK_FALSE(f.reg.cast_compatible(f.i32, f.i64));
    CHECK_FALSE(f.reg.cast_compatible(f.i64, f.i32));
  }
  SECTION("prefix casts narrow, never widen") {
    CHECK(f.reg.cast_compatible(f.pair, f.i32));  // int32 is pair's prefix
    CHECK_FALSE(f.reg.cast_compatible(f.i32, f.pair));
    CHECK(f.reg.cast_compatible(f.outer, f.pair));
    CHECK(f.reg.cast_compatible(f.outer, f.i32));
    CHECK_FALSE(f.reg.cast_compatible(f.pair, f.outer));
    CHECK_FALSE(f.reg.cast_compatible(f.pair, f.i64));  // layout mismatch
  }
  SECTION("reflexive and transitive over the registered set") {
    std::vector<TypeId> all = {f.i32, f.i64, f.f32, f.pair, f.outer};
    for (TypeId a : all) CHECK(f.reg.cast_compatible(a, a));
    for (TypeId a : all)
      for (TypeId b : all)
        for (TypeId c : all)
          if (f.reg.cast_compatible(a, b) && f.reg.cast_compatible(b, c))
            CHECK(f.reg.cast_compatible(a, c));
  }
}
