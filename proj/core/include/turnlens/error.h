// Copyright (c) 2026 The TurnLens Authors. All Rights Reserved.
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

namespace turnlens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent input data: malformed documents, broken files,
/// id mismatches, missing labels. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Binary feature file could not be decoded (bad magic, version, truncation).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

/// A precondition on numeric input was violated (single-class training set,
/// non-finite features, empty sequences).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace turnlens
