// Copyright 2026 The edgesearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESEARCH_ERROR_H_
#define EDGESEARCH_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgesearch {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required file or directory is missing or unreadable.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller supplied an argument outside the documented domain.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// No interest can be derived: empty history and no configured default.
class InterestUnavailable : public Error {
 public:
  using Error::Error;
};

// Internal invariant broken by a malformed intermediate structure.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgesearch

#endif  // EDGESEARCH_ERROR_H_
