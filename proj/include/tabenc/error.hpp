// Copyright 2026 The tabenc Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABENC_ERROR_HPP_
#define TABENC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tabenc {

/// Base class for all library-specific failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An encoded vector is not a valid codeword (e.g. two activations in a
/// one-hot block, or a binary code beyond the vocabulary).
class MalformedCodeError : public Error {
 public:
  explicit MalformedCodeError(const std::string& msg) : Error(msg) {}
};

/// Inversion requested for an encoder that cannot recover its input
/// (hashed encodings, degenerate bases).
class NotInvertibleError : public Error {
 public:
  explicit NotInvertibleError(const std::string& msg) : Error(msg) {}
};

/// A serialized record carries an unknown format version.
class VersionMismatchError : public Error {
 public:
  explicit VersionMismatchError(const std::string& msg) : Error(msg) {}
};

/// A serialized record cannot be parsed or is structurally incomplete.
class CorruptPayloadError : public Error {
 public:
  explicit CorruptPayloadError(const std::string& msg) : Error(msg) {}
};

}  // namespace tabenc

#endif  // TABENC_ERROR_HPP_
