// Copyright 2026 The mpgate Authors
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

#ifndef MPGATE_ERROR_HPP_
#define MPGATE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mpgate {

enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidCut,
  kInvalidWeight,
  kInvalidDomain,
  kOutOfDomain,
  kParse,
  kInconsistent,
  kIo,
  kDepthExceeded,
  kLengthMismatch,
};

const char* error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// C API can map it to a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpgate

#endif  // MPGATE_ERROR_HPP_
