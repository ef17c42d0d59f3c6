// Copyright 2026 The PSRO Lab Authors
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

#ifndef PSRO_ERRORS_H_
#define PSRO_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace psro {

enum class ErrorKind {
  kInvalidDimension,
  kShape,
  kIndex,
  kState,
  kLookup,
  kSize,
  kConfig,
  kIo,
  kAlignment,
  kVerification,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so that the CLI can
// report it in a machine-parseable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace psro

#endif  // PSRO_ERRORS_H_
