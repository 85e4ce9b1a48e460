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

// The evidence bundle a verifier consumes, together with event-log replay.
// Replay feeds the TDX-register <-> PCR consistency computation.

#ifndef DCEA_EVIDENCE_H_
#define DCEA_EVIDENCE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "dcea/event_log.h"
#include "dcea/td.h"
#include "dcea/tpm.h"

namespace dcea::evidence {

inline constexpr int kBundleFormatVersion = 1;

struct Nonces {
  tpm::Nonce td_nonce{};
  tpm::Nonce tpm_nonce{};

  bool operator==(const Nonces&) const = default;
};

// Virtual-clock observations made by the verifier's transport, in ms.
struct Timing {
  int64_t challenge_sent = 0;
  int64_t td_received = 0;
  int64_t quote_received = 0;

  bool operator==(const Timing&) const = default;
};

struct EvidenceBundle {
  int format_version = kBundleFormatVersion;
  td::TdReport td_report;
  tpm::TpmQuote tpm_quote;
  CertChain ek_cert_chain;
  std::optional<Certificate> ak_cert;
  std::vector<EventLogEntry> event_log;
  Nonces nonces;
  Timing timing;
  std::map<std::string, std::string> scenario_meta;

  bool operator==(const EvidenceBundle&) const = default;
};

struct BundleParts {
  std::optional<td::TdReport> td_report;
  std::optional<tpm::TpmQuote> tpm_quote;
  std::optional<CertChain> ek_cert_chain;
  std::optional<Certificate> ak_cert;
  std::vector<EventLogEntry> event_log;
  std::optional<Nonces> nonces;
  Timing timing;
  std::map<std::string, std::string> scenario_meta;
};

// IncompleteBundle when the TD report, quote, EK chain or nonces are missing;
// InvalidEntry when a log entry is malformed.
absl::StatusOr<EvidenceBundle> BuildBundle(BundleParts parts);

// The part of a (v)TPM log a bundle carries: entries on PCRs that belong to a
// TDX mapping row, plus guest entries with no mirrored PCR. Extension order
// is preserved.
std::vector<EventLogEntry> BundleLogFromTpm(std::span<const EventLogEntry> log);

enum class ReplayScope { kHost, kGuest, kBoth };

struct ReplayResult {
  tpm::PcrBank pcrs;
  Digest mrtd;
  std::array<Digest, kNumRtmrs> rtmrs;
  int mrtd_entries = 0;
};

// Folds Extend over the selected entries from all-zero registers. The PCR
// view takes every selected entry with a PCR index; the TD view takes guest
// entries only. MRTD is not an extend register: it is the digest of the
// (single) MRTD entry.
absl::StatusOr<ReplayResult> ReplayEventLog(std::span<const EventLogEntry> log,
                                            ReplayScope scope);

// Live TD register values, from a report or from inside the TD.
struct TdMeasurements {
  Digest mrtd;
  std::array<Digest, kNumRtmrs> rtmrs;
};

struct ConsistencyRow {
  TdRegister tdx_register = TdRegister::kMrtd;
  std::vector<int> pcr_set;
  bool tdx_matched = false;
  bool pcr_matched = false;
  bool matched = false;
  Digest expected_tdx;  // replayed
  Digest actual_tdx;    // live, from the TD
  std::map<int, Digest> expected_pcrs;  // replayed
  std::map<int, Digest> actual_pcrs;    // quoted; absent if not in selection
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;  // MRTD, RTMR0, RTMR1, RTMR2
  std::string error;                 // set when the log could not be replayed

  bool AllMatched() const;
  std::vector<std::string> MismatchedRows() const;
};

ConsistencyResult CheckConsistency(const TdMeasurements& td,
                                   const tpm::TpmQuote& quote,
                                   std::span<const EventLogEntry> log);

ConsistencyResult CheckRtmrPcrConsistency(const td::TdReport& report,
                                          const tpm::TpmQuote& quote,
                                          std::span<const EventLogEntry> log);

// The same comparison run inside the TD; the one-bit outcome goes into
// report_data (see td::InTdFlag).
td::InTdFlag EvaluateInTd(const td::TdState& td, const tpm::TpmQuote& quote,
                          std::span<const EventLogEntry> log);

}  // namespace dcea::evidence

#endif  // DCEA_EVIDENCE_H_
