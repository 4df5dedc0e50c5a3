// Copyright 2026 The posform Authors
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

namespace posform {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different spaces, or a vector/matrix has the wrong shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation (not in the cone,
/// unnormalized, unknown label, non-integer shift, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Normalizing an element whose pairing with the order unit vanishes.
class ZeroStateError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an outcome of (numerically) zero probability.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A probability ratio whose reference compatibility vanishes: the boundary
/// condition (or post-selection) is incompatible with the setup.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

/// Valid request outside what is implemented (e.g. witness search for d != 2).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace posform
