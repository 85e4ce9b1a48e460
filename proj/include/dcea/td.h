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

// Trust Domain model. A TD is measured at launch and extended at runtime; the
// QE-signed report is what the verifier sees.

#ifndef DCEA_TD_H_
#define DCEA_TD_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "dcea/event_log.h"
#include "dcea/platform.h"
#include "dcea/tpm.h"

namespace dcea::td {

inline constexpr size_t kReportDataSize = 64;
using ReportData = std::array<uint8_t, kReportDataSize>;

struct TdState {
  Digest mrtd;
  std::array<Digest, kNumRtmrs> rtmrs;
  Digest mrconfigid;
  Digest mrowner;
  Digest mrownerconfig;
  std::string host_platform_id;
  std::vector<EventLogEntry> guest_log;
  // Carried through to the report, no verifier policy is defined over them.
  Bytes tee_tcb_svn;
  Bytes mrseam;
  Bytes seam_attributes;
  Bytes td_attributes;
};

struct GuestEvent {
  int rtmr_index = 0;
  std::optional<int> pcr_index;
  Digest event_digest;
  std::string description;
};

// Measures `data` as a guest event for RTMR[rtmr_index] mirrored into
// `pcr_index`.
GuestEvent MakeGuestEvent(int rtmr_index, std::optional<int> pcr_index,
                          ByteSpan data, std::string description);

// The guest-scope log entry for an event (TD register + mirrored PCR).
EventLogEntry ToLogEntry(const GuestEvent& event);

// The guest-scope MRTD entry recorded by TdLaunch; mirrored into PCR 0.
EventLogEntry MrtdEntry(const TdState& td);

// mrtd = digest(firmware), mrconfigid = digest(ak_pub), mrowner =
// digest(owner). RTMRs start at zero.
absl::StatusOr<TdState> TdLaunch(const platform::Platform& platform,
                                 ByteSpan firmware, ByteSpan ak_pub,
                                 ByteSpan owner);

absl::StatusOr<TdState> RtmrExtend(TdState td, const GuestEvent& event);

struct TdReport {
  Digest mrtd;
  std::array<Digest, kNumRtmrs> rtmrs;
  Digest mrconfigid;
  Digest mrowner;
  Digest mrownerconfig;
  ReportData report_data{};
  std::string ppid;
  Bytes tee_tcb_svn;
  Bytes mrseam;
  Bytes seam_attributes;
  Bytes td_attributes;
  Signature qe_signature;
  CertChain qe_chain;

  Bytes SignedPayload() const;
  bool operator==(const TdReport&) const = default;
};

absl::StatusOr<TdReport> GenerateTdReport(const TdState& td,
                                          ByteSpan report_data,
                                          const KeyPair& qe,
                                          const CertChain& qe_chain);

// Signature check under the QE chain leaf only; chain trust is the caller's.
absl::StatusOr<bool> VerifyTdReportSignature(const TdReport& report);

// report_data layout:
//   [0, 32)   verifier TD nonce
//   [32, 63)  AK binding (first 31 bytes of digest(AK_pub)) when the binding
//             channel is report_data, zero otherwise
//   [63]      in-TD consistency flag (see InTdFlag)
inline constexpr size_t kAkBindingOffset = 32;
inline constexpr size_t kAkBindingSize = 31;
inline constexpr size_t kInTdFlagOffset = 63;

enum class InTdFlag : uint8_t { kNotEvaluated = 0, kConsistent = 1, kInconsistent = 2 };

ReportData BuildReportData(const tpm::Nonce& td_nonce,
                           const std::optional<Digest>& ak_digest,
                           InTdFlag flag = InTdFlag::kNotEvaluated);
tpm::Nonce ReportDataNonce(const ReportData& data);
bool ReportDataBindsAk(const ReportData& data, const Digest& ak_digest);
InTdFlag ReportDataFlag(const ReportData& data);

}  // namespace dcea::td

#endif  // DCEA_TD_H_
