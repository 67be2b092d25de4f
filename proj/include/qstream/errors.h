// Copyright 2026 The qstream Authors
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

#ifndef QSTREAM_ERRORS_H
#define QSTREAM_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qstream {

/// Base class for domain errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
   public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {
    }
};

class ParseError : public Error {
   public:
    ParseError(const std::string &msg, size_t line, size_t column);
    size_t line;
    size_t column;
};

/// CRC mismatch, bad magic, conflicting cache entries.
class IntegrityError : public Error {
   public:
    using Error::Error;
};

/// Bad bounds, unlowered gates, parameter violations.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// An internal postcondition did not hold.
class InvariantError : public Error {
   public:
    using Error::Error;
};

}  // namespace qstream

#endif
