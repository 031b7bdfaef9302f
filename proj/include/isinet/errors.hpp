// Copyright 2026 The isinet Authors
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

#ifndef ISINET_ERRORS_HPP_
#define ISINET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace isinet {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible dimensions between masks, flow fields or label grids.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data: bad magic, truncated payload, counts that do not
// add up, unparsable documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input carrying invalid values (non-finite flow,
// out-of-range scores, out-of-vocabulary pixels).
class DataError : public Error {
 public:
  using Error::Error;
};

// An evaluation was requested over an empty evaluable set.
class NoDataError : public DataError {
 public:
  using DataError::DataError;
};

// A class id that the active vocabulary does not define.
class VocabularyError : public DataError {
 public:
  using DataError::DataError;
};

// Caller broke an API contract (mismatched frame/flow counts,
// non-contiguous frame windows).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid generator configuration (overlapping objects, out-of-frame
// trajectories).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace isinet

#endif  // ISINET_ERRORS_HPP_
