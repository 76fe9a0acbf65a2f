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

#ifndef FRAMETAG_TRACE_HPP_
#define FRAMETAG_TRACE_HPP_

// Line-oriented trace language.
//
//   typedef <name> prim <size>
//   typedef <name> struct <off>:<type> [<off>:<type> ...] size=<total>
//   alloc <id> <size> [type=<name>] [align=<n>]
//   free <id-or-var>
//   let <var> = ptr <id> [+ <off>]
//   add <var2> = <var> + <delta>        (also: - <delta>)
//   load <var> <width>
//   store <var> <width>
//   cast <var> <typename>
//   expect ok|oob|uaf|double-free|inframe-violation|cast-error|missing-metadata
//
// `#` starts a comment. Integers are unsigned decimal or 0x-hex. An expect
// binds to the immediately preceding checkable statement.

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "frametag/errors.hpp"
#include "frametag/verdict.hpp"

namespace frametag {

enum class StmtKind : std::uint8_t {
  Typedef,
  Alloc,
  Free,
  Let,
  Add,
  Load,
  Store,
  Cast,
};

constexpr std::string_view to_string(StmtKind k) {
  switch (k) {
    case StmtKind::Typedef: return "typedef";
    case StmtKind::Alloc: return "alloc";
    case StmtKind::Free: return "free";
    case StmtKind::Let: return "let";
    case StmtKind::Add: return "add";
    case StmtKind::Load: return "load";
    case StmtKind::Store: return "store";
    case StmtKind::Cast: return "cast";
  }
  return "?";
}

struct TypedefField {
  std::uint64_t offset = 0;
  std::string type_name;
};

struct Statement {
  StmtKind kind = StmtKind::Alloc;
  int line = 0;
  std::string text;  // trimmed source line

  std::string name;        // typedef/alloc: defined name
  bool prim = false;       // typedef
  std::uint64_t size = 0;  // typedef/alloc
  std::vector<TypedefField> fields;

  std::string type_name;    // alloc [type=], cast target
  std::uint64_t align = 16; // alloc

  std::string target;  // free: id or var

  std::string var;            // let/add dest, load/store/cast var
  std::string object;         // let source object
  std::uint64_t offset = 0;   // let
  std::string src;            // add source var
  std::int64_t delta = 0;     // add
  std::uint64_t width = 0;    // load/store

  std::optional<Outcome> expected;  // from a following expect line
};

struct TraceProgram {
  std::vector<Statement> statements;
};

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline bool valid_ident(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::uint64_t parse_uint(const std::string& tok, int line) {
  if (tok.empty()) throw ParseError(line, "malformed integer ''");
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(tok, &pos, tok.starts_with("0x") || tok.starts_with("0X")
                                   ? 16
                                   : 10);
  } catch (const std::exception&) {
    throw ParseError(line, "malformed integer '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(line, "malformed integer '" + tok + "'");
  return v;
}

}  // namespace detail

/// Built-in primitive types every run registers before executing a program.
struct BuiltinType {
  std::string_view name;
  std::uint64_t size;
};
inline constexpr BuiltinType kBuiltinTypes[] = {
    {"int8", 1}, {"int16", 2}, {"int32", 4}, {"int64", 8}};

inline TraceProgram parse(std::string_view text) {
  TraceProgram program;
  std::unordered_set<std::string> objects;
  std::unordered_set<std::string> vars;
  std::unordered_set<std::string> types;
  for (const BuiltinType& t : kBuiltinTypes) types.emplace(t.name);

  int checkable = -1;  // index of the last statement an expect may bind to
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::vector<std::string> tok = detail::tokenize(line);
    if (tok.empty()) continue;

    const auto require = [&](bool cond, const std::string& msg) {
      if (!cond) throw ParseError(line_no, msg);
    };
    const auto known_var = [&](const std::string& v) {
      require(vars.contains(v), "undefined variable '" + v + "'");
    };

    Statement st;
    st.line = line_no;
    {
      std::string trimmed;
      for (std::size_t i = 0; i < tok.size(); ++i)
        trimmed += (i ? " " : "") + tok[i];
      st.text = trimmed;
    }

    const std::string& op = tok[0];
    if (op == "typedef") {
      require(tok.size() >= 4, "typedef needs a name, a kind and a body");
      st.kind = StmtKind::Typedef;
      st.name = tok[1];
      require(detail::valid_ident(st.name), "bad type name '" + st.name + "'");
      require(!types.contains(st.name), "duplicate type '" + st.name + "'");
      if (tok[2] == "prim") {
        require(tok.size() == 4, "typedef prim takes exactly one size");
        st.prim = true;
        st.size = detail::parse_uint(tok[3], line_no);
        require(st.size >= 1, "primitive size must be >= 1");
      } else if (tok[2] == "struct") {
        st.prim = false;
        bool have_size = false;
        for (std::size_t i = 3; i < tok.size(); ++i) {
          if (tok[i].starts_with("size=")) {
            require(i + 1 == tok.size(), "size= must come last");
            st.size = detail::parse_uint(tok[i].substr(5), line_no);
            have_size = true;
            break;
          }
          const std::size_t colon = tok[i].find(':');
          require(colon != std::string::npos,
                  "expected <offset>:<type>, got '" + tok[i] + "'");
          TypedefField f;
          f.offset = detail::parse_uint(tok[i].substr(0, colon), line_no);
          f.type_name = tok[i].substr(colon + 1);
          require(types.contains(f.type_name),
                  "undefined type '" + f.type_name + "'");
          st.fields.push_back(std::move(f));
        }
        require(have_size, "typedef struct needs size=<total>");
        require(!st.fields.empty(), "typedef struct needs fields");
      } else {
        throw ParseError(line_no, "typedef kind must be prim or struct");
      }
      types.insert(st.name);
      program.statements.push_back(std::move(st));
      continue;  // not checkable
    }

    if (op == "alloc") {
      require(tok.size() >= 3, "alloc needs an id and a size");
      st.kind = StmtKind::Alloc;
      st.name = tok[1];
      require(detail::valid_ident(st.name), "bad object id '" + st.name + "'");
      require(!objects.contains(st.name),
              "duplicate object '" + st.name + "'");
      st.size = detail::parse_uint(tok[2], line_no);
      require(st.size >= 1, "allocation size must be >= 1");
      for (std::size_t i = 3; i < tok.size(); ++i) {
        if (tok[i].starts_with("type=")) {
          st.type_name = tok[i].substr(5);
          require(types.contains(st.type_name),
                  "undefined type '" + st.type_name + "'");
        } else if (tok[i].starts_with("align=")) {
          st.align = detail::parse_uint(tok[i].substr(6), line_no);
        } else {
          throw ParseError(line_no, "unknown alloc option '" + tok[i] + "'");
        }
      }
      objects.insert(st.name);
    } else if (op == "free") {
      require(tok.size() == 2, "free takes one id or variable");
      st.kind = StmtKind::Free;
      st.target = tok[1];
      require(vars.contains(st.target) || objects.contains(st.target),
              "undefined variable '" + st.target + "'");
    } else if (op == "let") {
      // let <var> = ptr <id> [+ <off>]
      require(tok.size() >= 5 && tok[2] == "=" && tok[3] == "ptr",
              "expected: let <var> = ptr <id> [+ <off>]");
      st.kind = StmtKind::Let;
      st.var = tok[1];
      require(detail::valid_ident(st.var), "bad variable '" + st.var + "'");
      st.object = tok[4];
      require(objects.contains(st.object),
              "undefined object '" + st.object + "'");
      if (tok.size() == 7) {
        require(tok[5] == "+", "expected '+' before the offset");
        st.offset = detail::parse_uint(tok[6], line_no);
      } else {
        require(tok.size() == 5, "trailing tokens after let");
      }
      vars.insert(st.var);
    } else if (op == "add") {
      // add <var2> = <var> +|- <delta>
      require(tok.size() == 6 && tok[2] == "=" && (tok[4] == "+" || tok[4] == "-"),
              "expected: add <var2> = <var> +|- <delta>");
      st.kind = StmtKind::Add;
      st.var = tok[1];
      require(detail::valid_ident(st.var), "bad variable '" + st.var + "'");
      st.src = tok[3];
      known_var(st.src);
      const std::uint64_t magnitude = detail::parse_uint(tok[5], line_no);
      require(magnitude <= static_cast<std::uint64_t>(
                               std::numeric_limits<std::int64_t>::max()),
              "delta too large");
      st.delta = tok[4] == "+" ? static_cast<std::int64_t>(magnitude)
                               : -static_cast<std::int64_t>(magnitude);
      vars.insert(st.var);
    } else if (op == "load" || op == "store") {
      require(tok.size() == 3, "expected: load|store <var> <width>");
      st.kind = op == "load" ? StmtKind::Load : StmtKind::Store;
      st.var = tok[1];
      known_var(st.var);
      st.width = detail::parse_uint(tok[2], line_no);
      require(st.width >= 1, "access width must be >= 1");
    } else if (op == "cast") {
      require(tok.size() == 3, "expected: cast <var> <typename>");
      st.kind = StmtKind::Cast;
      st.var = tok[1];
      known_var(st.var);
      st.type_name = tok[2];
      require(types.contains(st.type_name),
              "undefined type '" + st.type_name + "'");
    } else if (op == "expect") {
      require(tok.size() == 2, "expect takes one outcome token");
      const auto outcome = outcome_from_token(tok[1]);
      require(outcome.has_value(), "unknown outcome '" + tok[1] + "'");
      require(checkable >= 0, "expect has no preceding checkable statement");
      Statement& bound = program.statements[checkable];
      require(!bound.expected.has_value(),
              "statement already carries an expect");
      bound.expected = *outcome;
      continue;
    } else {
      throw ParseError(line_no, "unknown statement '" + op + "'");
    }

    program.statements.push_back(std::move(st));
    checkable = static_cast<int>(program.statements.size()) - 1;
  }
  return program;
}

}  // namespace frametag

#endif  // FRAMETAG_TRACE_HPP_
