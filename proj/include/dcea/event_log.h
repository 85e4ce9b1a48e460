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

#ifndef DCEA_EVENT_LOG_H_
#define DCEA_EVENT_LOG_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"

namespace dcea {

inline constexpr int kNumPcrs = 24;
inline constexpr int kNumRtmrs = 4;

// Host entries are produced by the platform's measured launch; guest entries
// by the in-TD agent and carry both the TD register and the mirrored PCR.
enum class Scope { kHost, kGuest };

enum class TdRegister { kMrtd, kRtmr0, kRtmr1, kRtmr2, kRtmr3 };

std::string_view ScopeName(Scope scope);
absl::StatusOr<Scope> ParseScope(std::string_view name);
std::string_view TdRegisterName(TdRegister reg);
absl::StatusOr<TdRegister> ParseTdRegister(std::string_view name);
TdRegister RtmrRegister(int rtmr_index);
// -1 for MRTD.
int RtmrIndex(TdRegister reg);

// TDX register -> guest PCRs:
//   MRTD    -> 0
//   RTMR[0] -> 1, 7
//   RTMR[1] -> 2..5
//   RTMR[2] -> 8..15
//   RTMR[3] -> (reserved, no PCR)
std::span<const int> MirroredPcrs(TdRegister reg);

// True for PCRs that appear in one of the four mapping rows above.
bool IsMappedPcr(int pcr_index);

struct EventLogEntry {
  Scope scope = Scope::kHost;
  std::optional<int> pcr_index;
  std::optional<TdRegister> td_register;
  Digest event_digest;
  std::string description;

  bool operator==(const EventLogEntry&) const = default;
};

// Host entries need a PCR and no TD register; guest entries need a TD register
// and, unless RTMR[3], a PCR from that register's mapping row.
absl::Status ValidateEntry(const EventLogEntry& entry);

}  // namespace dcea

#endif  // DCEA_EVENT_LOG_H_
