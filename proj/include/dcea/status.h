// Copyright 2026 The DCEA Simulator Authors.
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

#ifndef DCEA_STATUS_H_
#define DCEA_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dcea {

// Domain error kinds. Each maps onto a canonical absl code and is attached to
// the status as a payload so callers can tell e.g. PolicyViolation apart from
// UnknownAk even though both are precondition failures.
enum class ErrorCode {
  kInvalidSeed,
  kInvalidKey,
  kEmptyChain,
  kInvalidPcrIndex,
  kEmptyPolicy,
  kPolicyViolation,
  kUnknownAk,
  kInvalidStack,
  kDoubleLaunch,
  kNotLaunched,
  kInvalidRtmr,
  kBadReportData,
  kIncompleteBundle,
  kParseError,
  kInvalidEntry,
  kWorldError,
  kUnknownScenario,
  kInvalidPolicy,
};

std::string_view ErrorCodeName(ErrorCode code);

absl::Status MakeError(ErrorCode code, std::string_view message);

// Returns the domain error kind attached by MakeError, if any.
std::optional<ErrorCode> GetErrorCode(const absl::Status& status);

inline std::string_view StatusMessage(const absl::Status& status) {
  return {status.message().data(), status.message().size()};
}

}  // namespace dcea

#define DCEA_STATUS_CONCAT_INNER_(a, b) a##b
#define DCEA_STATUS_CONCAT_(a, b) DCEA_STATUS_CONCAT_INNER_(a, b)

#define DCEA_RETURN_IF_ERROR(expr)             \
  do {                                         \
    ::absl::Status dcea_status_ = (expr);      \
    if (!dcea_status_.ok()) return dcea_status_; \
  } while (false)

#define DCEA_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                \
  if (!tmp.ok()) return std::move(tmp).status();    \
  lhs = std::move(tmp).value()

#define DCEA_ASSIGN_OR_RETURN(lhs, expr) \
  DCEA_ASSIGN_OR_RETURN_IMPL_(           \
      DCEA_STATUS_CONCAT_(dcea_statusor_, __LINE__), lhs, expr)

#endif  // DCEA_STATUS_H_
