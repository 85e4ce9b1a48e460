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

#include "dcea/event_log.h"

#include <algorithm>
#include <array>

#include "absl/strings/str_cat.h"
#include "dcea/status.h"

namespace dcea {
namespace {

constexpr std::array<int, 1> kMrtdPcrs = {0};
constexpr std::array<int, 2> kRtmr0Pcrs = {1, 7};
constexpr std::array<int, 4> kRtmr1Pcrs = {2, 3, 4, 5};
constexpr std::array<int, 8> kRtmr2Pcrs = {8, 9, 10, 11, 12, 13, 14, 15};

}  // namespace

std::string_view ScopeName(Scope scope) {
  return scope == Scope::kHost ? "host" : "guest";
}

absl::StatusOr<Scope> ParseScope(std::string_view name) {
  if (name == "host") return Scope::kHost;
  if (name == "guest") return Scope::kGuest;
  return MakeError(ErrorCode::kParseError, absl::StrCat("unknown scope '", std::string(name), "'"));
}

std::string_view TdRegisterName(TdRegister reg) {
  switch (reg) {
    case TdRegister::kMrtd:
      return "MRTD";
    case TdRegister::kRtmr0:
      return "RTMR0";
    case TdRegister::kRtmr1:
      return "RTMR1";
    case TdRegister::kRtmr2:
      return "RTMR2";
    case TdRegister::kRtmr3:
      return "RTMR3";
  }
  return "?";
}

absl::StatusOr<TdRegister> ParseTdRegister(std::string_view name) {
  for (TdRegister reg : {TdRegister::kMrtd, TdRegister::kRtmr0, TdRegister::kRtmr1,
                         TdRegister::kRtmr2, TdRegister::kRtmr3}) {
    if (TdRegisterName(reg) == name) return reg;
  }
  return MakeError(ErrorCode::kParseError,
                   absl::StrCat("unknown TD register '", std::string(name), "'"));
}

TdRegister RtmrRegister(int rtmr_index) {
  return static_cast<TdRegister>(rtmr_index + 1);
}

int RtmrIndex(TdRegister reg) { return static_cast<int>(reg) - 1; }

std::span<const int> MirroredPcrs(TdRegister reg) {
  switch (reg) {
    case TdRegister::kMrtd:
      return kMrtdPcrs;
    case TdRegister::kRtmr0:
      return kRtmr0Pcrs;
    case TdRegister::kRtmr1:
      return kRtmr1Pcrs;
    case TdRegister::kRtmr2:
      return kRtmr2Pcrs;
    case TdRegister::kRtmr3:
      return {};
  }
  return {};
}

bool IsMappedPcr(int pcr_index) {
  for (TdRegister reg : {TdRegister::kMrtd, TdRegister::kRtmr0,
                         TdRegister::kRtmr1, TdRegister::kRtmr2}) {
    auto pcrs = MirroredPcrs(reg);
    if (std::find(pcrs.begin(), pcrs.end(), pcr_index) != pcrs.end()) {
      return true;
    }
  }
  return false;
}

absl::Status ValidateEntry(const EventLogEntry& entry) {
  if (entry.pcr_index.has_value() &&
      (*entry.pcr_index < 0 || *entry.pcr_index >= kNumPcrs)) {
    return MakeError(ErrorCode::kInvalidEntry,
                     absl::StrCat("PCR index ", *entry.pcr_index, " out of range"));
  }
  if (entry.scope == Scope::kHost) {
    if (!entry.pcr_index.has_value() || entry.td_register.has_value()) {
      return MakeError(ErrorCode::kInvalidEntry,
                       "host entries need a PCR index and no TD register");
    }
    return absl::OkStatus();
  }
  if (!entry.td_register.has_value()) {
    return MakeError(ErrorCode::kInvalidEntry, "guest entry without TD register");
  }
  auto pcrs = MirroredPcrs(*entry.td_register);
  if (pcrs.empty()) {
    if (entry.pcr_index.has_value()) {
      return MakeError(ErrorCode::kInvalidEntry, "RTMR3 has no mirrored PCR");
    }
    return absl::OkStatus();
  }
  if (!entry.pcr_index.has_value() ||
      std::find(pcrs.begin(), pcrs.end(), *entry.pcr_index) == pcrs.end()) {
    return MakeError(ErrorCode::kInvalidEntry,
                     absl::StrCat("guest entry for ",
                                  std::string(TdRegisterName(*entry.td_register)),
                                  " has a PCR outside its mapping row"));
  }
  return absl::OkStatus();
}

}  // namespace dcea
