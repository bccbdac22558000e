// Copyright 2026 The ccrkit Authors.
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

namespace ccr {

/// Base of every error thrown by the toolkit. The C API maps each subclass
/// onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad timestamp, unknown trial, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Study definition cannot produce a valid plan (empty gold pool, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value cannot be written losslessly to the requested format.
class SerializationError : public Error {
 public:
  using Error::Error;
};

/// Statistic undefined for the given data (zero variance, degenerate fit, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Operation called in a way its contract forbids.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccr
