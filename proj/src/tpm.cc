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

#include "dcea/tpm.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dcea/canonical.h"
#include "dcea/status.h"

namespace dcea::tpm {
namespace {

absl::Status CheckIndex(int index) {
  if (index < 0 || index >= kNumPcrs) {
    return MakeError(ErrorCode::kInvalidPcrIndex,
                     absl::StrCat("PCR index ", index, " not in [0, 23]"));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view TpmKindName(TpmKind kind) {
  return kind == TpmKind::kDiscrete ? "discrete" : "virtual";
}

Bytes TpmQuote::SignedPayload() const {
  CanonicalEncoder enc("dcea.tpm.quote.v1");
  enc.AddInt(static_cast<int64_t>(selection.size()));
  for (size_t i = 0; i < selection.size(); ++i) {
    enc.AddInt(selection[i]);
    enc.AddDigest(i < pcr_values.size() ? pcr_values[i] : Digest::Zero());
  }
  enc.AddBytes(nonce);
  return std::move(enc).Finish();
}

std::optional<Digest> TpmQuote::PcrValue(int index) const {
  for (size_t i = 0; i < selection.size() && i < pcr_values.size(); ++i) {
    if (selection[i] == index) return pcr_values[i];
  }
  return std::nullopt;
}

absl::StatusOr<TpmState> TpmInit(ByteSpan ek_seed, const KeyPair& issuer,
                                 const Claims& claims, TpmKind kind) {
  if (issuer.kind != KeyKind::kCa) {
    return MakeError(ErrorCode::kInvalidKey, "EK issuer must be a CA key");
  }
  TpmState tpm;
  tpm.kind = kind;
  DCEA_ASSIGN_OR_RETURN(tpm.ek, KeyGen(ek_seed, KeyKind::kEk));
  Claims ek_claims = claims;
  ek_claims["tpm_kind"] = std::string(TpmKindName(kind));
  ek_claims["role"] = "EK";
  DCEA_ASSIGN_OR_RETURN(tpm.ek_cert,
                        IssueCert(issuer, tpm.ek.public_key, ek_claims));
  return tpm;
}

absl::StatusOr<TpmState> PcrExtend(TpmState tpm, int index, ByteSpan event,
                                   std::string description) {
  DCEA_RETURN_IF_ERROR(CheckIndex(index));
  EventLogEntry entry;
  entry.scope = Scope::kHost;
  entry.pcr_index = index;
  entry.event_digest = ComputeDigest(event);
  entry.description = std::move(description);
  return ExtendMeasurement(std::move(tpm), std::move(entry));
}

absl::StatusOr<TpmState> ExtendMeasurement(TpmState tpm, EventLogEntry entry) {
  if (!entry.pcr_index.has_value()) {
    return MakeError(ErrorCode::kInvalidPcrIndex, "entry has no PCR index");
  }
  const int index = *entry.pcr_index;
  DCEA_RETURN_IF_ERROR(CheckIndex(index));
  tpm.pcrs[index] = Extend(tpm.pcrs[index], entry.event_digest);
  tpm.log.push_back(std::move(entry));
  return tpm;
}

absl::StatusOr<std::map<int, Digest>> ReadPcrs(const TpmState& tpm,
                                               std::span<const int> selection) {
  std::map<int, Digest> out;
  for (int index : selection) {
    DCEA_RETURN_IF_ERROR(CheckIndex(index));
    out[index] = tpm.pcrs[index];
  }
  return out;
}

Digest SealPolicyDigest(const std::map<int, Digest>& policy) {
  CanonicalEncoder enc("dcea.tpm.policy.v1");
  enc.AddInt(static_cast<int64_t>(policy.size()));
  for (const auto& [index, value] : policy) {
    enc.AddInt(index);
    enc.AddDigest(value);
  }
  return ComputeDigest(enc.bytes());
}

absl::StatusOr<AkResult> CreateSealedAk(TpmState tpm, ByteSpan seed,
                                        const std::set<int>& policy_pcrs,
                                        const KeyPair* issuer) {
  if (policy_pcrs.empty()) {
    return MakeError(ErrorCode::kEmptyPolicy, "AK seal policy needs at least one PCR");
  }
  SealedAk ak;
  DCEA_ASSIGN_OR_RETURN(ak.keypair, KeyGen(seed, KeyKind::kAk));
  for (int index : policy_pcrs) {
    DCEA_RETURN_IF_ERROR(CheckIndex(index));
    ak.policy[index] = tpm.pcrs[index];
  }
  DCEA_ASSIGN_OR_RETURN(AkResult loaded, LoadSealedAk(std::move(tpm), std::move(ak)));
  if (issuer != nullptr) {
    DCEA_ASSIGN_OR_RETURN(loaded.tpm,
                          CertifyAk(std::move(loaded.tpm), loaded.handle, *issuer));
  }
  return loaded;
}

absl::StatusOr<TpmState> CertifyAk(TpmState tpm, AkHandle handle,
                                   const KeyPair& issuer) {
  auto it = tpm.aks.find(handle);
  if (it == tpm.aks.end()) {
    return MakeError(ErrorCode::kUnknownAk, absl::StrCat("no AK at handle ", handle));
  }
  Claims claims;
  claims["role"] = "AK";
  claims["ek_id"] = KeyId(tpm.ek.public_key);
  claims["seal_policy"] = SealPolicyDigest(it->second.policy).ToHex();
  std::vector<int> sealed_pcrs;
  for (const auto& [index, value] : it->second.policy) sealed_pcrs.push_back(index);
  claims["seal_pcrs"] = absl::StrJoin(sealed_pcrs, ",");
  claims["tpm_kind"] = std::string(TpmKindName(tpm.kind));
  for (const char* key : {"platform_id", "provider", "region"}) {
    auto c = tpm.ek_cert.claims.find(key);
    if (c != tpm.ek_cert.claims.end()) claims[key] = c->second;
  }
  DCEA_ASSIGN_OR_RETURN(
      it->second.ak_cert,
      IssueCert(issuer, it->second.keypair.public_key, claims));
  return tpm;
}

absl::StatusOr<SealedAk> ExportSealedAk(const TpmState& tpm, AkHandle handle) {
  auto it = tpm.aks.find(handle);
  if (it == tpm.aks.end()) {
    return MakeError(ErrorCode::kUnknownAk, absl::StrCat("no AK at handle ", handle));
  }
  return it->second;
}

absl::StatusOr<AkResult> LoadSealedAk(TpmState tpm, SealedAk blob) {
  if (blob.policy.empty()) {
    return MakeError(ErrorCode::kEmptyPolicy, "AK blob carries no seal policy");
  }
  const AkHandle handle = tpm.next_handle++;
  tpm.aks.emplace(handle, std::move(blob));
  return AkResult{std::move(tpm), handle};
}

absl::StatusOr<TpmQuote> Quote(const TpmState& tpm, AkHandle handle,
                               std::span<const int> selection,
                               const Nonce& nonce) {
  auto it = tpm.aks.find(handle);
  if (it == tpm.aks.end()) {
    return MakeError(ErrorCode::kUnknownAk, absl::StrCat("no AK at handle ", handle));
  }
  const SealedAk& ak = it->second;
  for (const auto& [index, sealed] : ak.policy) {
    if (tpm.pcrs[index] != sealed) {
      return MakeError(ErrorCode::kPolicyViolation,
                       absl::StrCat("PCR ", index, " differs from sealed value"));
    }
  }
  TpmQuote quote;
  for (int index : selection) {
    DCEA_RETURN_IF_ERROR(CheckIndex(index));
    quote.selection.push_back(index);
    quote.pcr_values.push_back(tpm.pcrs[index]);
  }
  quote.nonce = nonce;
  quote.ak_public = ak.keypair.public_key;
  DCEA_ASSIGN_OR_RETURN(quote.signature,
                        Sign(ak.keypair.private_key, quote.SignedPayload()));
  return quote;
}

absl::StatusOr<bool> VerifyQuoteSignature(const TpmQuote& quote) {
  return Verify(quote.ak_public, quote.SignedPayload(), quote.signature);
}

}  // namespace dcea::tpm
