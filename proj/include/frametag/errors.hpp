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

#ifndef FRAMETAG_ERRORS_HPP_
#define FRAMETAG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace frametag {

// Caller violated a documented precondition.
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// A tag that cannot be packed into the configured spare bits.
struct EncodeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A word whose bit pattern decodes to no legal tag.
struct DecodeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The simulated arena cannot satisfy an allocation.
struct OutOfSpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant, e.g. two live objects sharing a wrapper
// frame. Never expected on any valid execution; kept throwable as a test
// hook.
struct InternalFault : std::logic_error {
  using std::logic_error::logic_error;
};

// Trace text rejected by the parser.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
};

// A parsed statement that cannot execute against the current machine state.
struct TraceError : std::runtime_error {
  int line;
  TraceError(int line_no, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
};

}  // namespace frametag

#endif  // FRAMETAG_ERRORS_HPP_
