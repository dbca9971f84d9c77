// Copyright 2026 The Fieldcast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIELDCAST_ERRORS_HPP
#define FIELDCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fieldcast {

// Base for everything thrown by the library. Each subclass maps to one CLI
// exit status (see tools/cli.cpp and --help).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Files that cannot be opened, read or written.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration: bad key, bad type, out-of-range value. Messages
// always name the offending key.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Dataset content that violates an invariant (range, ordering, size).
class DataError : public Error {
public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Dimension mismatches between networks, batches and parameter vectors.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Optimizer failures: non-finite values, exhausted fallbacks.
class TrainError : public Error {
public:
  explicit TrainError(const std::string& msg) : Error(msg) {}
};

}  // namespace fieldcast

#endif  // FIELDCAST_ERRORS_HPP
