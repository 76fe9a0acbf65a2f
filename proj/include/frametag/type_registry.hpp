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

#ifndef FRAMETAG_TYPE_REGISTRY_HPP_
#define FRAMETAG_TYPE_REGISTRY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "frametag/errors.hpp"

namespace frametag {

using TypeId = std::uint32_t;

/// Structural type registry backing the cast checks.
///
/// Types are appended before a run and immutable afterwards: primitives with
/// a byte size, and aggregates as an ordered list of (offset, type) fields.
/// No forward references, unions, bitfields, or recursion.
class TypeRegistry {
 public:
  enum class Kind : std::uint8_t { Primitive, Aggregate };

  struct Field {
    std::uint64_t offset;
    TypeId type;
  };

  struct Descriptor {
    std::string name;
    Kind kind;
    std::uint64_t size;
    std::vector<Field> fields;  // empty for primitives
  };

  TypeId register_primitive(std::string name, std::uint64_t size) {
    if (size == 0) throw UsageError("type: primitive size must be >= 1");
    return add(Descriptor{std::move(name), Kind::Primitive, size, {}});
  }

  TypeId register_aggregate(std::string name, std::uint64_t total_size,
                            std::vector<Field> fields) {
    if (fields.empty()) throw UsageError("type: aggregate needs fields");
    std::uint64_t cursor = 0;
    for (const Field& f : fields) {
      if (f.type >= types_.size())
        throw UsageError("type: field references an unregistered type");
      if (f.offset < cursor)
        throw UsageError("type: fields must be sorted and non-overlapping");
      const std::uint64_t end = f.offset + types_[f.type].size;
      if (end > total_size)
        throw UsageError("type: field extends past the total size");
      cursor = end;
    }
    return add(
        Descriptor{std::move(name), Kind::Aggregate, total_size, std::move(fields)});
  }

  const Descriptor& at(TypeId id) const {
    if (id >= types_.size()) throw UsageError("type: unknown id");
    return types_[id];
  }

  std::optional<TypeId> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return types_.size(); }

  /// Innermost type beginning exactly at `offset` within `t`; offset 0
  /// names the type itself.
  std::optional<TypeId> type_at_offset(TypeId t, std::uint64_t offset) const {
    const Descriptor& d = at(t);
    if (offset == 0) return t;
    if (d.kind == Kind::Primitive) return std::nullopt;
    for (const Field& f : d.fields) {
      if (offset < f.offset) break;
      if (offset < f.offset + at(f.type).size)
        return type_at_offset(f.type, offset - f.offset);
    }
    return std::nullopt;
  }

  /// Conservative cast rule: identical types, primitives of equal size, or
  /// a target whose flattened layout is an initial segment of the found
  /// type's layout. Never admits a size-widening cast.
  bool cast_compatible(TypeId found, TypeId target) const {
    if (found == target) return true;
    const Descriptor& f = at(found);
    const Descriptor& t = at(target);
    if (t.size > f.size) return false;
    const std::vector<Leaf> found_leaves = flatten(found);
    const std::vector<Leaf> target_leaves = flatten(target);
    if (target_leaves.size() > found_leaves.size()) return false;
    for (std::size_t i = 0; i < target_leaves.size(); ++i) {
      const Leaf& a = target_leaves[i];
      const Leaf& b = found_leaves[i];
      if (a.offset != b.offset) return false;
      if (a.type != b.type && a.size != b.size) return false;
    }
    return true;
  }

 private:
  struct Leaf {
    std::uint64_t offset;
    TypeId type;
    std::uint64_t size;
  };

  TypeId add(Descriptor d) {
    if (by_name_.contains(d.name))
      throw UsageError("type: duplicate name '" + d.name + "'");
    const auto id = static_cast<TypeId>(types_.size());
    by_name_.emplace(d.name, id);
    types_.push_back(std::move(d));
    return id;
  }

  std::vector<Leaf> flatten(TypeId t) const {
    std::vector<Leaf> out;
    flatten_into(t, 0, out);
    return out;
  }

  void flatten_into(TypeId t, std::uint64_t base, std::vector<Leaf>& out) const {
    const Descriptor& d = at(t);
    if (d.kind == Kind::Primitive) {
      out.push_back(Leaf{base, t, d.size});
      return;
    }
    for (const Field& f : d.fields) flatten_into(f.type, base + f.offset, out);
  }

  std::vector<Descriptor> types_;
  std::unordered_map<std::string, TypeId> by_name_;
};

}  // namespace frametag

#endif  // FRAMETAG_TYPE_REGISTRY_HPP_
