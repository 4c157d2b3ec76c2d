// Copyright 2026 The Coordlab Authors
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

#ifndef COORDLAB_ERROR_H_
#define COORDLAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace coordlab {

// Base of every error raised by the library. The CLI maps the subclasses
// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidActionError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

class InvalidGameError : public Error {
 public:
  using Error::Error;
};

// Raised when an outcome has zero probability under the observer's model.
class ImpossibleObservationError : public Error {
 public:
  using Error::Error;
};

class UninitializedBeliefError : public Error {
 public:
  using Error::Error;
};

// Work would exceed a configured size limit.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// The request is well formed but outside what the component handles.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace coordlab

#endif  // COORDLAB_ERROR_H_
