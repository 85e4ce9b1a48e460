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

#include "dcea/bundle_codec.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "dcea/status.h"

namespace dcea::evidence {

using json_util::Json;
using json_util::Join;

Json TdReportToJson(const td::TdReport& r) {
  Json rtmrs = Json::array();
  for (const Digest& d : r.rtmrs) rtmrs.push_back(d.ToHex());
  return Json{{"mrconfigid", r.mrconfigid.ToHex()},
              {"mrowner", r.mrowner.ToHex()},
              {"mrownerconfig", r.mrownerconfig.ToHex()},
              {"mrseam", HexEncode(r.mrseam)},
              {"mrtd", r.mrtd.ToHex()},
              {"ppid", r.ppid},
              {"qe_chain", json_util::ChainToJson(r.qe_chain)},
              {"qe_signature", json_util::SignatureToJson(r.qe_signature)},
              {"report_data", HexEncode(r.report_data)},
              {"rtmrs", rtmrs},
              {"seam_attributes", HexEncode(r.seam_attributes)},
              {"td_attributes", HexEncode(r.td_attributes)},
              {"tee_tcb_svn", HexEncode(r.tee_tcb_svn)}};
}

absl::StatusOr<td::TdReport> TdReportFromJson(const Json& j,
                                              std::string_view path) {
  td::TdReport r;
  DCEA_ASSIGN_OR_RETURN(r.mrconfigid, json_util::GetDigest(j, "mrconfigid", path));
  DCEA_ASSIGN_OR_RETURN(r.mrowner, json_util::GetDigest(j, "mrowner", path));
  DCEA_ASSIGN_OR_RETURN(r.mrownerconfig,
                        json_util::GetDigest(j, "mrownerconfig", path));
  DCEA_ASSIGN_OR_RETURN(r.mrseam, json_util::GetHex(j, "mrseam", path));
  DCEA_ASSIGN_OR_RETURN(r.mrtd, json_util::GetDigest(j, "mrtd", path));
  DCEA_ASSIGN_OR_RETURN(r.ppid, json_util::GetString(j, "ppid", path));
  DCEA_ASSIGN_OR_RETURN(const Json* chain, json_util::Field(j, "qe_chain", path));
  DCEA_ASSIGN_OR_RETURN(r.qe_chain,
                        json_util::ChainFromJson(*chain, Join(path, "qe_chain")));
  DCEA_ASSIGN_OR_RETURN(const Json* sig, json_util::Field(j, "qe_signature", path));
  DCEA_ASSIGN_OR_RETURN(r.qe_signature, json_util::SignatureFromJson(
                                            *sig, Join(path, "qe_signature")));
  DCEA_ASSIGN_OR_RETURN(r.report_data,
                        json_util::GetFixedHex<td::kReportDataSize>(
                            j, "report_data", path));
  DCEA_ASSIGN_OR_RETURN(const Json* rtmrs, json_util::Field(j, "rtmrs", path));
  const std::string rtmr_path = Join(path, "rtmrs");
  if (!rtmrs->is_array() || rtmrs->size() != kNumRtmrs) {
    return json_util::FieldError(rtmr_path, "expected 4 RTMR values");
  }
  for (size_t i = 0; i < kNumRtmrs; ++i) {
    if (!(*rtmrs)[i].is_string()) {
      return json_util::FieldError(Join(rtmr_path, i), "expected a string");
    }
    absl::StatusOr<Digest> d = Digest::FromHex((*rtmrs)[i].get<std::string>());
    if (!d.ok()) return json_util::FieldError(Join(rtmr_path, i), StatusMessage(d.status()));
    r.rtmrs[i] = *d;
  }
  DCEA_ASSIGN_OR_RETURN(r.seam_attributes,
                        json_util::GetHex(j, "seam_attributes", path));
  DCEA_ASSIGN_OR_RETURN(r.td_attributes, json_util::GetHex(j, "td_attributes", path));
  DCEA_ASSIGN_OR_RETURN(r.tee_tcb_svn, json_util::GetHex(j, "tee_tcb_svn", path));
  return r;
}

Json QuoteToJson(const tpm::TpmQuote& q) {
  Json pcrs = Json::array();
  for (size_t i = 0; i < q.selection.size(); ++i) {
    pcrs.push_back(Json{{"index", q.selection[i]},
                        {"value", i < q.pcr_values.size()
                                      ? q.pcr_values[i].ToHex()
                                      : Digest::Zero().ToHex()}});
  }
  return Json{{"ak_public", HexEncode(q.ak_public)},
              {"nonce", HexEncode(q.nonce)},
              {"pcrs", pcrs},
              {"signature", json_util::SignatureToJson(q.signature)}};
}

absl::StatusOr<tpm::TpmQuote> QuoteFromJson(const Json& j, std::string_view path) {
  tpm::TpmQuote q;
  DCEA_ASSIGN_OR_RETURN(q.ak_public, json_util::GetHex(j, "ak_public", path));
  DCEA_ASSIGN_OR_RETURN(q.nonce, json_util::GetFixedHex<32>(j, "nonce", path));
  DCEA_ASSIGN_OR_RETURN(const Json* pcrs, json_util::Field(j, "pcrs", path));
  const std::string pcr_path = Join(path, "pcrs");
  if (!pcrs->is_array()) return json_util::FieldError(pcr_path, "expected an array");
  for (size_t i = 0; i < pcrs->size(); ++i) {
    const std::string item = Join(pcr_path, i);
    DCEA_ASSIGN_OR_RETURN(int64_t index, json_util::GetInt((*pcrs)[i], "index", item));
    if (index < 0 || index >= kNumPcrs) {
      return json_util::FieldError(Join(item, "index"), "PCR index out of range");
    }
    DCEA_ASSIGN_OR_RETURN(Digest value, json_util::GetDigest((*pcrs)[i], "value", item));
    q.selection.push_back(static_cast<int>(index));
    q.pcr_values.push_back(value);
  }
  DCEA_ASSIGN_OR_RETURN(const Json* sig, json_util::Field(j, "signature", path));
  DCEA_ASSIGN_OR_RETURN(q.signature, json_util::SignatureFromJson(
                                         *sig, Join(path, "signature")));
  return q;
}

Json EntryToJson(const EventLogEntry& e) {
  Json out{{"description", e.description},
           {"event_digest", e.event_digest.ToHex()},
           {"scope", std::string(ScopeName(e.scope))}};
  out["pcr_index"] = e.pcr_index.has_value() ? Json(*e.pcr_index) : Json(nullptr);
  out["td_register"] = e.td_register.has_value()
                           ? Json(std::string(TdRegisterName(*e.td_register)))
                           : Json(nullptr);
  return out;
}

absl::StatusOr<EventLogEntry> EntryFromJson(const Json& j, std::string_view path) {
  EventLogEntry e;
  DCEA_ASSIGN_OR_RETURN(e.description, json_util::GetString(j, "description", path));
  DCEA_ASSIGN_OR_RETURN(e.event_digest, json_util::GetDigest(j, "event_digest", path));
  DCEA_ASSIGN_OR_RETURN(std::string scope, json_util::GetString(j, "scope", path));
  absl::StatusOr<Scope> parsed_scope = ParseScope(scope);
  if (!parsed_scope.ok()) {
    return json_util::FieldError(Join(path, "scope"), StatusMessage(parsed_scope.status()));
  }
  e.scope = *parsed_scope;
  DCEA_ASSIGN_OR_RETURN(const Json* pcr, json_util::Field(j, "pcr_index", path));
  if (!pcr->is_null()) {
    if (!pcr->is_number_integer()) {
      return json_util::FieldError(Join(path, "pcr_index"), "expected integer or null");
    }
    e.pcr_index = pcr->get<int>();
  }
  DCEA_ASSIGN_OR_RETURN(const Json* reg, json_util::Field(j, "td_register", path));
  if (!reg->is_null()) {
    if (!reg->is_string()) {
      return json_util::FieldError(Join(path, "td_register"), "expected string or null");
    }
    absl::StatusOr<TdRegister> parsed = ParseTdRegister(reg->get<std::string>());
    if (!parsed.ok()) {
      return json_util::FieldError(Join(path, "td_register"), StatusMessage(parsed.status()));
    }
    e.td_register = *parsed;
  }
  absl::Status valid = ValidateEntry(e);
  if (!valid.ok()) return json_util::FieldError(path, StatusMessage(valid));
  return e;
}

Json BundleToJson(const EvidenceBundle& b) {
  Json log = Json::array();
  for (const auto& e : b.event_log) log.push_back(EntryToJson(e));
  Json out{{"ek_cert_chain", json_util::ChainToJson(b.ek_cert_chain)},
           {"event_log", log},
           {"format_version", b.format_version},
           {"nonces", Json{{"td_nonce", HexEncode(b.nonces.td_nonce)},
                           {"tpm_nonce", HexEncode(b.nonces.tpm_nonce)}}},
           {"scenario_meta", b.scenario_meta},
           {"td_report", TdReportToJson(b.td_report)},
           {"timing", Json{{"challenge_sent", b.timing.challenge_sent},
                           {"quote_received", b.timing.quote_received},
                           {"td_received", b.timing.td_received}}},
           {"tpm_quote", QuoteToJson(b.tpm_quote)}};
  out["ak_cert"] =
      b.ak_cert.has_value() ? json_util::CertToJson(*b.ak_cert) : Json(nullptr);
  return out;
}

absl::StatusOr<EvidenceBundle> BundleFromJson(const Json& j) {
  EvidenceBundle b;
  DCEA_ASSIGN_OR_RETURN(int64_t version, json_util::GetInt(j, "format_version", ""));
  if (version != kBundleFormatVersion) {
    return json_util::FieldError("/format_version",
                                 absl::StrCat("unsupported version ", version));
  }
  b.format_version = static_cast<int>(version);
  DCEA_ASSIGN_OR_RETURN(const Json* ak_cert, json_util::Field(j, "ak_cert", ""));
  if (!ak_cert->is_null()) {
    DCEA_ASSIGN_OR_RETURN(b.ak_cert, json_util::CertFromJson(*ak_cert, "/ak_cert"));
  }
  DCEA_ASSIGN_OR_RETURN(const Json* ek, json_util::Field(j, "ek_cert_chain", ""));
  DCEA_ASSIGN_OR_RETURN(b.ek_cert_chain,
                        json_util::ChainFromJson(*ek, "/ek_cert_chain"));
  if (b.ek_cert_chain.empty()) {
    return MakeError(ErrorCode::kIncompleteBundle, "ek_cert_chain is empty");
  }
  DCEA_ASSIGN_OR_RETURN(const Json* log, json_util::Field(j, "event_log", ""));
  if (!log->is_array()) return json_util::FieldError("/event_log", "expected an array");
  for (size_t i = 0; i < log->size(); ++i) {
    DCEA_ASSIGN_OR_RETURN(EventLogEntry e,
                          EntryFromJson((*log)[i], Join("/event_log", i)));
    b.event_log.push_back(std::move(e));
  }
  DCEA_ASSIGN_OR_RETURN(const Json* nonces, json_util::Field(j, "nonces", ""));
  DCEA_ASSIGN_OR_RETURN(b.nonces.td_nonce,
                        json_util::GetFixedHex<32>(*nonces, "td_nonce", "/nonces"));
  DCEA_ASSIGN_OR_RETURN(b.nonces.tpm_nonce,
                        json_util::GetFixedHex<32>(*nonces, "tpm_nonce", "/nonces"));
  DCEA_ASSIGN_OR_RETURN(b.scenario_meta,
                        json_util::GetStringMap(j, "scenario_meta", ""));
  DCEA_ASSIGN_OR_RETURN(const Json* report, json_util::Field(j, "td_report", ""));
  DCEA_ASSIGN_OR_RETURN(b.td_report, TdReportFromJson(*report, "/td_report"));
  DCEA_ASSIGN_OR_RETURN(const Json* timing, json_util::Field(j, "timing", ""));
  DCEA_ASSIGN_OR_RETURN(b.timing.challenge_sent,
                        json_util::GetInt(*timing, "challenge_sent", "/timing"));
  DCEA_ASSIGN_OR_RETURN(b.timing.quote_received,
                        json_util::GetInt(*timing, "quote_received", "/timing"));
  DCEA_ASSIGN_OR_RETURN(b.timing.td_received,
                        json_util::GetInt(*timing, "td_received", "/timing"));
  DCEA_ASSIGN_OR_RETURN(const Json* quote, json_util::Field(j, "tpm_quote", ""));
  DCEA_ASSIGN_OR_RETURN(b.tpm_quote, QuoteFromJson(*quote, "/tpm_quote"));
  return b;
}

std::string SerializeBundle(const EvidenceBundle& bundle) {
  return json_util::Dump(BundleToJson(bundle));
}

absl::StatusOr<EvidenceBundle> DeserializeBundle(std::string_view text) {
  DCEA_ASSIGN_OR_RETURN(Json j, json_util::ParseText(text));
  return BundleFromJson(j);
}

}  // namespace dcea::evidence
