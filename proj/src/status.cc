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

#include "dcea/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"

namespace dcea {
namespace {

constexpr absl::string_view kPayloadUrl = "type.dcea/error_code";

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  absl::StatusCode canonical;
};

constexpr std::array<CodeInfo, 18> kCodes = {{
    {ErrorCode::kInvalidSeed, "InvalidSeed", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kInvalidKey, "InvalidKey", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kEmptyChain, "EmptyChain", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kInvalidPcrIndex, "InvalidPcrIndex", absl::StatusCode::kOutOfRange},
    {ErrorCode::kEmptyPolicy, "EmptyPolicy", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kPolicyViolation, "PolicyViolation", absl::StatusCode::kPermissionDenied},
    {ErrorCode::kUnknownAk, "UnknownAk", absl::StatusCode::kNotFound},
    {ErrorCode::kInvalidStack, "InvalidStack", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kDoubleLaunch, "DoubleLaunch", absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kNotLaunched, "NotLaunched", absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kInvalidRtmr, "InvalidRtmr", absl::StatusCode::kOutOfRange},
    {ErrorCode::kBadReportData, "BadReportData", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kIncompleteBundle, "IncompleteBundle", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kInvalidEntry, "InvalidEntry", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kWorldError, "WorldError", absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kUnknownScenario, "UnknownScenario", absl::StatusCode::kNotFound},
    {ErrorCode::kInvalidPolicy, "InvalidPolicy", absl::StatusCode::kInvalidArgument},
}};

const CodeInfo& Info(ErrorCode code) {
  for (const auto& info : kCodes) {
    if (info.code == code) return info;
  }
  return kCodes.front();
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) { return Info(code).name; }

absl::Status MakeError(ErrorCode code, std::string_view message) {
  const CodeInfo& info = Info(code);
  absl::Status status(info.canonical,
                      std::string(info.name) + ": " + std::string(message));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(info.name)));
  return status;
}

std::optional<ErrorCode> GetErrorCode(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  std::string name(*payload);
  for (const auto& info : kCodes) {
    if (info.name == name) return info.code;
  }
  return std::nullopt;
}

}  // namespace dcea
