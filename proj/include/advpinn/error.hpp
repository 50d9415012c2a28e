// Copyright 2026 The advpinn Authors.
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

namespace advpinn {

/// Base class for every fault raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (configs, problem definitions, arguments).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = -1, int column = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                          : what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Numerical breakdown: non-finite parameters, losses or gradients.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A reference solver could not produce a solution.
class OracleError : public Error {
public:
    using Error::Error;
};

} // namespace advpinn
