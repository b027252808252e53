// Copyright 2026 The nlifact Authors.
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

#include <stdexcept>
#include <string>

namespace nlifact {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map it to a stable machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("invalid-argument", message) {}
};

class BackendUnavailable : public Error {
 public:
  explicit BackendUnavailable(const std::string& message)
      : Error("backend-unavailable", message) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message)
      : Error("protocol-error", message) {}
};

class EmptyDecomposition : public Error {
 public:
  explicit EmptyDecomposition(const std::string& message)
      : Error("empty-decomposition", message) {}
};

class UndefinedCorrelation : public Error {
 public:
  explicit UndefinedCorrelation(const std::string& message)
      : Error("undefined-correlation", message) {}
};

class IngestError : public Error {
 public:
  explicit IngestError(const std::string& message)
      : Error("ingest-error", message) {}
};

}  // namespace nlifact
