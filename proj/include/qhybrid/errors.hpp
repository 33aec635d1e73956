// Copyright 2026 The qhybrid Authors. All Rights Reserved.
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

namespace qhybrid {

/// Base of every error raised by the library. Each subclass maps to one
/// failure category so callers (the CLI in particular) can pick exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dimension or size out of the supported range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Qubit or parameter-slot index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Input vector too close to zero to normalize.
class ZeroVectorError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class LabelError : public Error {
  public:
    using Error::Error;
};

/// Backward pass invoked with a trace recorded against different parameters.
class TraceError : public Error {
  public:
    using Error::Error;
};

/// Malformed binary container (magic, version or dtype mismatch, truncation).
class FormatError : public Error {
  public:
    using Error::Error;
};

class ManifestError : public Error {
  public:
    using Error::Error;
};

class SplitError : public Error {
  public:
    using Error::Error;
};

} // namespace qhybrid
