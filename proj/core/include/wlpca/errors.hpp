// Copyright 2026 The wlpca Authors
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

#ifndef WLPCA_ERRORS_HPP_
#define WLPCA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace wlpca {

// Base class for every error raised by the library. Argument validation
// failures use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The token stream was empty, or nothing survived vocabulary filtering.
class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

// No word-context pairs to build statistics from.
class EmptyCooc : public Error {
 public:
  using Error::Error;
};

// A cell with n_w = 0 or P_D(c) = 0 was queried directly. Such cells carry
// zero weight and are skipped by every objective.
class DegenerateCell : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class UndefinedSimilarity : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlpca

#endif  // WLPCA_ERRORS_HPP_
