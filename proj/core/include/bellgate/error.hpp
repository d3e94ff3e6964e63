// Copyright 2026 The Bellgate Authors
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

namespace bellgate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad label, wrong dimension, out-of-range parameter).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// Malformed or out-of-range experiment configuration. `field()` is the dotted path of the culprit.
class ConfigError : public Error {
   public:
    ConfigError(std::string field, const std::string &message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {
    }
    const std::string &field() const noexcept {
        return field_;
    }

   private:
    std::string field_;
};

/// A computation could not produce a usable result (zero success probability, failed fit, ...).
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// Post-selection left no probability mass.
class NoSuccessError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace bellgate
