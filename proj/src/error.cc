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

#include "narrative/error.h"

namespace narrative {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownPredicate: return "UnknownPredicate";
    case ErrorCode::kEndpointNotEvent: return "EndpointNotEvent";
    case ErrorCode::kMissingNode: return "MissingNode";
    case ErrorCode::kMissingNarrative: return "MissingNarrative";
    case ErrorCode::kSelfLoopRejected: return "SelfLoopRejected";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownViewpoint: return "UnknownViewpoint";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kFileUnreadable: return "FileUnreadable";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kUnparseableAnswer: return "UnparseableAnswer";
    case ErrorCode::kEmptyTimeline: return "EmptyTimeline";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidThreshold: return "InvalidThreshold";
    case ErrorCode::kEmptyViewpointCollection: return "EmptyViewpointCollection";
    case ErrorCode::kNoDocumentsDetected: return "NoDocumentsDetected";
    case ErrorCode::kSourceUnavailable: return "SourceUnavailable";
    case ErrorCode::kAlreadyBound: return "AlreadyBound";
    case ErrorCode::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorCode::kLocked: return "Locked";
  }
  return "Unknown";
}

bool IsBackendFailure(ErrorCode code) {
  return code == ErrorCode::kBackendUnavailable ||
         code == ErrorCode::kSourceUnavailable;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace narrative
