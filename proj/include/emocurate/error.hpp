// emocurate/error.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace emocurate {

/// Base of every error thrown by the library. The CLI maps the three
/// subclasses below onto exit codes 1, 2 and 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad category, bad score, parse failure).
class InputError : public Error {
 public:
  using Error::Error;
};

class UnknownCategoryError : public InputError {
 public:
  explicit UnknownCategoryError(const std::string& token)
      : InputError("unknown emotion category '" + token + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class EmptyCorpusError : public InputError {
 public:
  EmptyCorpusError() : InputError("empty corpus: no clips to process") {}
};

/// Durations required but absent for some clips.
class MissingDurationError : public InputError {
 public:
  explicit MissingDurationError(std::vector<std::string> ids)
      : InputError(make_message(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& video_ids() const { return ids_; }

 private:
  static std::string make_message(const std::vector<std::string>& ids) {
    std::string msg = "missing duration for " + std::to_string(ids.size()) + " clip(s):";
    for (const auto& id : ids) msg += " " + id;
    return msg;
  }
  std::vector<std::string> ids_;
};

/// The retention policy cannot be satisfied by the corpus.
class PolicyInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during estimation.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Cronbach's alpha has no value for the given item matrix.
class UndefinedAlphaError : public Error {
 public:
  using Error::Error;
};

}  // namespace emocurate
