// Copyright 2026 The Desense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DESENSE_ERROR_H_
#define DESENSE_ERROR_H_

#include <stdexcept>
#include <string>

namespace desense {

// Base of every error raised by the library. The subclasses map onto the
// CLI exit codes: config 1, data 2, numerical 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

// Invalid experiment configuration, unknown names, bad arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 1; }
};

// Missing or malformed input files and datasets violating their invariants.
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

// Shape mismatches, non-finite values, failed factorizations.
class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

}  // namespace desense

#endif  // DESENSE_ERROR_H_
