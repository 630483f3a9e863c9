// Copyright 2026 The asterm Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace asterm {

enum class ErrorKind {
  Parse,
  Semantic,
  Modeling,
  Resource,
  InvalidArgument,
  Unsupported,
  Io,
};

/// Base class of every error raised by the library. The C API maps the kind
/// onto its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message,
             std::vector<std::string> expected = {});

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

class SemanticError : public Error {
 public:
  explicit SemanticError(const std::string& what)
      : Error(ErrorKind::Semantic, what) {}
};

/// A reachable assignment leaves the declared range of its target, or a
/// conditional location has no (or more than one) enabled guard.
class ModelingError : public Error {
 public:
  explicit ModelingError(const std::string& what)
      : Error(ErrorKind::Modeling, what) {}
};

/// Node cap, product budget, round budget or response size exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::Resource, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::InvalidArgument, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorKind::Unsupported, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace asterm
