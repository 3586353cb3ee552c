// Copyright 2026 The L3C-cpp Authors. All Rights Reserved.
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

#ifndef L3C_ERROR_H_
#define L3C_ERROR_H_

#include <stdexcept>
#include <string>

namespace l3c {

enum class ErrorCode {
  kInvalidArgument,
  kShapeMismatch,
  kMissingTensor,
  kUnexpectedTensor,
  kVersionMismatch,
  kBadMagic,
  kTruncated,
  kCorruptStream,
  kChecksumMismatch,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kMissingTensor: return "missing tensor";
    case ErrorCode::kUnexpectedTensor: return "unexpected tensor";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kCorruptStream: return "corrupt stream";
    case ErrorCode::kChecksumMismatch: return "checksum mismatch";
    case ErrorCode::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace l3c

#endif  // L3C_ERROR_H_
