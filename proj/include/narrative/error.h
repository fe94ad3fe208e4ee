// Copyright 2026 The Narrative Miner Authors.
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

#ifndef NARRATIVE_ERROR_H_
#define NARRATIVE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace narrative {

enum class ErrorCode {
  kInvalidArgument,
  kUnknownPredicate,
  kEndpointNotEvent,
  kMissingNode,
  kMissingNarrative,
  kSelfLoopRejected,
  kCycleDetected,
  kUnknownViewpoint,
  kDuplicateId,
  kParseError,
  kFileUnreadable,
  kBackendUnavailable,
  kUnparseableAnswer,
  kEmptyTimeline,
  kDimensionMismatch,
  kZeroVector,
  kInvalidParams,
  kInvalidThreshold,
  kEmptyViewpointCollection,
  kNoDocumentsDetected,
  kSourceUnavailable,
  kAlreadyBound,
  kMissingPlaceholder,
  kLocked,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures of an external service (LLM, embedding, KG source).
bool IsBackendFailure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace narrative

#endif  // NARRATIVE_ERROR_H_
