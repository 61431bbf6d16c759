// Copyright 2026 The QSANN Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsann {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes, ranges or settings supplied by the caller.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Qubit, parameter or sample index outside its valid range.
class IndexError : public Error {
  public:
    using Error::Error;
};

class EmptySequenceError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// NaN or infinity showed up in a loss or gradient.
class NumericError : public Error {
  public:
    using Error::Error;
};

} // namespace qsann
