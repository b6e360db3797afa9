// Copyright 2026 The qbd Authors. All Rights Reserved.
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

#ifndef QBD_ERRORS_HPP_
#define QBD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qbd {

// Invalid parameter or argument (bad q, nu, precision, window, time, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two grid objects that must share a window (and parameters) do not.
class WindowMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A Bessel cache or grid window does not cover the exponents a computation
// needs.
class CoverageError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Series evaluation would need more bits than the configured cap allows.
class PrecisionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbd

#endif  // QBD_ERRORS_HPP_
