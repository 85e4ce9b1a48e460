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

#include "dcea/evidence.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "dcea/status.h"

namespace dcea::evidence {

absl::StatusOr<EvidenceBundle> BuildBundle(BundleParts parts) {
  std::vector<std::string> missing;
  if (!parts.td_report.has_value()) missing.push_back("td_report");
  if (!parts.tpm_quote.has_value()) missing.push_back("tpm_quote");
  if (!parts.ek_cert_chain.has_value() || parts.ek_cert_chain->empty()) {
    missing.push_back("ek_cert_chain");
  }
  if (!parts.nonces.has_value()) missing.push_back("nonces");
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) absl::StrAppend(&names, names.empty() ? "" : ", ", m);
    return MakeError(ErrorCode::kIncompleteBundle, absl::StrCat("missing ", names));
  }
  for (size_t i = 0; i < parts.event_log.size(); ++i) {
    absl::Status s = ValidateEntry(parts.event_log[i]);
    if (!s.ok()) {
      return MakeError(ErrorCode::kInvalidEntry,
                       absl::StrCat("event_log[", i, "]: ", s.message()));
    }
  }
  EvidenceBundle bundle;
  bundle.td_report = std::move(*parts.td_report);
  bundle.tpm_quote = std::move(*parts.tpm_quote);
  bundle.ek_cert_chain = std::move(*parts.ek_cert_chain);
  bundle.ak_cert = std::move(parts.ak_cert);
  bundle.event_log = std::move(parts.event_log);
  bundle.nonces = *parts.nonces;
  bundle.timing = parts.timing;
  bundle.scenario_meta = std::move(parts.scenario_meta);
  return bundle;
}

std::vector<EventLogEntry> BundleLogFromTpm(std::span<const EventLogEntry> log) {
  std::vector<EventLogEntry> out;
  for (const EventLogEntry& entry : log) {
    const bool mapped = entry.pcr_index.has_value() && IsMappedPcr(*entry.pcr_index);
    const bool unmirrored_guest =
        entry.scope == Scope::kGuest && !entry.pcr_index.has_value();
    if (mapped || unmirrored_guest) out.push_back(entry);
  }
  return out;
}

absl::StatusOr<ReplayResult> ReplayEventLog(std::span<const EventLogEntry> log,
                                            ReplayScope scope) {
  ReplayResult result;
  for (size_t i = 0; i < log.size(); ++i) {
    const EventLogEntry& entry = log[i];
    absl::Status valid = ValidateEntry(entry);
    if (!valid.ok()) {
      return MakeError(ErrorCode::kInvalidEntry,
                       absl::StrCat("entry ", i, ": ", valid.message()));
    }
    if (scope == ReplayScope::kHost && entry.scope != Scope::kHost) continue;
    if (scope == ReplayScope::kGuest && entry.scope != Scope::kGuest) continue;
    if (entry.pcr_index.has_value()) {
      Digest& reg = result.pcrs[*entry.pcr_index];
      reg = Extend(reg, entry.event_digest);
    }
    if (entry.scope == Scope::kGuest && entry.td_register.has_value()) {
      if (*entry.td_register == TdRegister::kMrtd) {
        result.mrtd = entry.event_digest;
        ++result.mrtd_entries;
      } else {
        Digest& reg = result.rtmrs[RtmrIndex(*entry.td_register)];
        reg = Extend(reg, entry.event_digest);
      }
    }
  }
  return result;
}

bool ConsistencyResult::AllMatched() const {
  if (!error.empty()) return false;
  for (const auto& row : rows) {
    if (!row.matched) return false;
  }
  return !rows.empty();
}

std::vector<std::string> ConsistencyResult::MismatchedRows() const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    if (!row.matched) out.emplace_back(TdRegisterName(row.tdx_register));
  }
  return out;
}

ConsistencyResult CheckConsistency(const TdMeasurements& td,
                                   const tpm::TpmQuote& quote,
                                   std::span<const EventLogEntry> log) {
  ConsistencyResult result;
  absl::StatusOr<ReplayResult> replay = ReplayEventLog(log, ReplayScope::kBoth);
  if (!replay.ok()) result.error = std::string(replay.status().message());

  for (TdRegister reg : {TdRegister::kMrtd, TdRegister::kRtmr0,
                         TdRegister::kRtmr1, TdRegister::kRtmr2}) {
    ConsistencyRow row;
    row.tdx_register = reg;
    auto pcrs = MirroredPcrs(reg);
    row.pcr_set.assign(pcrs.begin(), pcrs.end());
    row.actual_tdx =
        reg == TdRegister::kMrtd ? td.mrtd : td.rtmrs[RtmrIndex(reg)];
    for (int p : row.pcr_set) {
      if (auto v = quote.PcrValue(p); v.has_value()) row.actual_pcrs[p] = *v;
    }
    if (replay.ok()) {
      if (reg == TdRegister::kMrtd) {
        row.expected_tdx = replay->mrtd;
        row.tdx_matched =
            replay->mrtd_entries == 1 && row.expected_tdx == row.actual_tdx;
      } else {
        row.expected_tdx = replay->rtmrs[RtmrIndex(reg)];
        row.tdx_matched = row.expected_tdx == row.actual_tdx;
      }
      row.pcr_matched = true;
      for (int p : row.pcr_set) {
        row.expected_pcrs[p] = replay->pcrs[p];
        auto it = row.actual_pcrs.find(p);
        if (it == row.actual_pcrs.end() || it->second != replay->pcrs[p]) {
          row.pcr_matched = false;
        }
      }
    }
    row.matched = row.tdx_matched && row.pcr_matched;
    result.rows.push_back(std::move(row));
  }
  return result;
}

ConsistencyResult CheckRtmrPcrConsistency(const td::TdReport& report,
                                          const tpm::TpmQuote& quote,
                                          std::span<const EventLogEntry> log) {
  return CheckConsistency(TdMeasurements{report.mrtd, report.rtmrs}, quote, log);
}

td::InTdFlag EvaluateInTd(const td::TdState& td, const tpm::TpmQuote& quote,
                          std::span<const EventLogEntry> log) {
  ConsistencyResult result =
      CheckConsistency(TdMeasurements{td.mrtd, td.rtmrs}, quote, log);
  return result.AllMatched() ? td::InTdFlag::kConsistent
                             : td::InTdFlag::kInconsistent;
}

}  // namespace dcea::evidence
