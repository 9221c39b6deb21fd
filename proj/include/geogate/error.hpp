// Copyright 2026 The geogate Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace geogate {

/// Base class of every error raised by the library. `category()` is a stable
/// machine-readable tag used by the command-line runner for exit reporting.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept = 0;
  virtual int exit_code() const noexcept = 0;
};

#define GEOGATE_DEFINE_ERROR(Name, tag, code)                           \
  class Name : public Error {                                           \
   public:                                                              \
    using Error::Error;                                                 \
    const char* category() const noexcept override { return tag; }      \
    int exit_code() const noexcept override { return code; }            \
  };

GEOGATE_DEFINE_ERROR(InvalidArgument, "invalid-argument", 2)
GEOGATE_DEFINE_ERROR(NumericFailure, "numeric-failure", 3)
GEOGATE_DEFINE_ERROR(NoSolution, "no-solution", 4)
GEOGATE_DEFINE_ERROR(InfiniteDetuning, "infinite-detuning", 5)
GEOGATE_DEFINE_ERROR(UnreachableAmplitude, "unreachable-amplitude", 6)
GEOGATE_DEFINE_ERROR(ConfigError, "config-error", 7)
GEOGATE_DEFINE_ERROR(IoError, "io-error", 8)

#undef GEOGATE_DEFINE_ERROR

}  // namespace geogate
