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

#include "dcea/td.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dcea/canonical.h"
#include "dcea/status.h"

namespace dcea::td {

GuestEvent MakeGuestEvent(int rtmr_index, std::optional<int> pcr_index,
                          ByteSpan data, std::string description) {
  return GuestEvent{rtmr_index, pcr_index, ComputeDigest(data),
                    std::move(description)};
}

EventLogEntry ToLogEntry(const GuestEvent& event) {
  EventLogEntry entry;
  entry.scope = Scope::kGuest;
  entry.pcr_index = event.pcr_index;
  entry.td_register = RtmrRegister(event.rtmr_index);
  entry.event_digest = event.event_digest;
  entry.description = event.description;
  return entry;
}

EventLogEntry MrtdEntry(const TdState& td) {
  EventLogEntry entry;
  entry.scope = Scope::kGuest;
  entry.pcr_index = 0;
  entry.td_register = TdRegister::kMrtd;
  entry.event_digest = td.mrtd;
  entry.description = "TD virtual firmware";
  return entry;
}

absl::StatusOr<TdState> TdLaunch(const platform::Platform& platform,
                                 ByteSpan firmware, ByteSpan ak_pub,
                                 ByteSpan owner) {
  if (!platform.launched) {
    return MakeError(ErrorCode::kNotLaunched,
                     absl::StrCat("cannot launch a TD on unlaunched '",
                                  platform.id, "'"));
  }
  TdState td;
  td.mrtd = ComputeDigest(firmware);
  td.mrconfigid = ComputeDigest(ak_pub);
  td.mrowner = ComputeDigest(owner);
  td.host_platform_id = platform.id;
  td.tee_tcb_svn = Bytes(16, 0x01);
  const Digest seam = ComputeDigest(platform.stack.seamldr_image);
  td.mrseam.assign(seam.bytes().begin(), seam.bytes().end());
  td.seam_attributes = Bytes(8, 0);
  td.td_attributes = Bytes(8, 0);
  td.guest_log.push_back(MrtdEntry(td));
  return td;
}

absl::StatusOr<TdState> RtmrExtend(TdState td, const GuestEvent& event) {
  if (event.rtmr_index < 0 || event.rtmr_index >= kNumRtmrs) {
    return MakeError(ErrorCode::kInvalidRtmr,
                     absl::StrCat("RTMR index ", event.rtmr_index, " not in [0, 3]"));
  }
  EventLogEntry entry = ToLogEntry(event);
  DCEA_RETURN_IF_ERROR(ValidateEntry(entry));
  td.rtmrs[event.rtmr_index] =
      Extend(td.rtmrs[event.rtmr_index], event.event_digest);
  td.guest_log.push_back(std::move(entry));
  return td;
}

Bytes TdReport::SignedPayload() const {
  CanonicalEncoder enc("dcea.td.report.v1");
  enc.AddDigest(mrtd);
  for (const Digest& r : rtmrs) enc.AddDigest(r);
  enc.AddDigest(mrconfigid)
      .AddDigest(mrowner)
      .AddDigest(mrownerconfig)
      .AddBytes(report_data)
      .AddString(ppid)
      .AddBytes(tee_tcb_svn)
      .AddBytes(mrseam)
      .AddBytes(seam_attributes)
      .AddBytes(td_attributes);
  return std::move(enc).Finish();
}

absl::StatusOr<TdReport> GenerateTdReport(const TdState& td,
                                          ByteSpan report_data,
                                          const KeyPair& qe,
                                          const CertChain& qe_chain) {
  if (report_data.size() != kReportDataSize) {
    return MakeError(ErrorCode::kBadReportData,
                     absl::StrCat("report_data must be 64 bytes, got ",
                                  report_data.size()));
  }
  TdReport report;
  report.mrtd = td.mrtd;
  report.rtmrs = td.rtmrs;
  report.mrconfigid = td.mrconfigid;
  report.mrowner = td.mrowner;
  report.mrownerconfig = td.mrownerconfig;
  std::copy(report_data.begin(), report_data.end(), report.report_data.begin());
  report.ppid = td.host_platform_id;
  report.tee_tcb_svn = td.tee_tcb_svn;
  report.mrseam = td.mrseam;
  report.seam_attributes = td.seam_attributes;
  report.td_attributes = td.td_attributes;
  report.qe_chain = qe_chain;
  DCEA_ASSIGN_OR_RETURN(report.qe_signature,
                        Sign(qe.private_key, report.SignedPayload()));
  return report;
}

absl::StatusOr<bool> VerifyTdReportSignature(const TdReport& report) {
  if (report.qe_chain.empty()) {
    return MakeError(ErrorCode::kEmptyChain, "TD report carries no QE chain");
  }
  return Verify(report.qe_chain.front().subject_public, report.SignedPayload(),
                report.qe_signature);
}

ReportData BuildReportData(const tpm::Nonce& td_nonce,
                           const std::optional<Digest>& ak_digest,
                           InTdFlag flag) {
  ReportData data{};
  std::copy(td_nonce.begin(), td_nonce.end(), data.begin());
  if (ak_digest.has_value()) {
    auto src = ak_digest->bytes().first(kAkBindingSize);
    std::copy(src.begin(), src.end(), data.begin() + kAkBindingOffset);
  }
  data[kInTdFlagOffset] = static_cast<uint8_t>(flag);
  return data;
}

tpm::Nonce ReportDataNonce(const ReportData& data) {
  tpm::Nonce nonce;
  std::copy(data.begin(), data.begin() + nonce.size(), nonce.begin());
  return nonce;
}

bool ReportDataBindsAk(const ReportData& data, const Digest& ak_digest) {
  auto expected = ak_digest.bytes().first(kAkBindingSize);
  return std::equal(expected.begin(), expected.end(),
                    data.begin() + kAkBindingOffset);
}

InTdFlag ReportDataFlag(const ReportData& data) {
  return static_cast<InTdFlag>(data[kInTdFlagOffset]);
}

}  // namespace dcea::td
