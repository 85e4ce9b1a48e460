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

// Value-semantics model of a TPM 2.0 or vTPM with one SHA-384 PCR bank and its
// event log. Attestation keys are sealed to PCR values and certified against
// the EK. Operations take a state by value and return the successor state.

#ifndef DCEA_TPM_H_
#define DCEA_TPM_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "dcea/event_log.h"

namespace dcea::tpm {

using PcrBank = std::array<Digest, kNumPcrs>;
using Nonce = std::array<uint8_t, 32>;
using AkHandle = uint32_t;

enum class TpmKind { kDiscrete, kVirtual };

std::string_view TpmKindName(TpmKind kind);

// The default AK seal policy: the measured-launch anchors.
inline const std::set<int> kDefaultPolicyPcrs = {17, 18};

// An AK key blob as returned at creation time. The private half is only ever
// used by tpm::Quote; other modules move the blob around opaquely.
struct SealedAk {
  KeyPair keypair;
  std::map<int, Digest> policy;
  std::optional<Certificate> ak_cert;

  bool operator==(const SealedAk&) const = default;
};

struct TpmState {
  PcrBank pcrs;
  std::vector<EventLogEntry> log;
  KeyPair ek;
  Certificate ek_cert;
  std::map<AkHandle, SealedAk> aks;
  TpmKind kind = TpmKind::kDiscrete;
  AkHandle next_handle = 0x81010001;
};

struct TpmQuote {
  std::vector<int> selection;
  std::vector<Digest> pcr_values;  // parallel to `selection`
  Nonce nonce{};
  Bytes ak_public;
  Signature signature;

  Bytes SignedPayload() const;
  std::optional<Digest> PcrValue(int index) const;

  bool operator==(const TpmQuote&) const = default;
};

// Fresh TPM with zeroed PCRs and an EK certificate issued by `issuer`, which
// must be a CA key. `claims` are copied into the EK certificate together with
// a "tpm_kind" claim.
absl::StatusOr<TpmState> TpmInit(ByteSpan ek_seed, const KeyPair& issuer,
                                 const Claims& claims, TpmKind kind);

absl::StatusOr<TpmState> PcrExtend(TpmState tpm, int index, ByteSpan event,
                                   std::string description);

// Extends entry.pcr_index with entry.event_digest and appends the entry
// verbatim. Used for pre-measured (e.g. guest-scope) events.
absl::StatusOr<TpmState> ExtendMeasurement(TpmState tpm, EventLogEntry entry);

absl::StatusOr<std::map<int, Digest>> ReadPcrs(const TpmState& tpm,
                                               std::span<const int> selection);

struct AkResult {
  TpmState tpm;
  AkHandle handle = 0;
};

// Creates an AK whose use is gated on the current values of `policy_pcrs`.
// With an issuer the AK is certified against this TPM's EK (see CertifyAk).
absl::StatusOr<AkResult> CreateSealedAk(TpmState tpm, ByteSpan seed,
                                        const std::set<int>& policy_pcrs,
                                        const KeyPair* issuer);

// EK-anchored registrar: (re)issues the AK certificate for `handle` binding
// it to this TPM's EK identity and its sealed policy.
absl::StatusOr<TpmState> CertifyAk(TpmState tpm, AkHandle handle,
                                   const KeyPair& issuer);

// Returns the sealed key blob for persisting outside the TPM.
absl::StatusOr<SealedAk> ExportSealedAk(const TpmState& tpm, AkHandle handle);

// Loads a previously exported blob. The policy travels with the blob, so a
// blob sealed under other PCR values loads fine but cannot quote.
absl::StatusOr<AkResult> LoadSealedAk(TpmState tpm, SealedAk blob);

// Signs (selection, values, nonce) with the AK if the live PCRs at its policy
// indices still equal the sealed values; PolicyViolation otherwise.
absl::StatusOr<TpmQuote> Quote(const TpmState& tpm, AkHandle handle,
                               std::span<const int> selection,
                               const Nonce& nonce);

absl::StatusOr<bool> VerifyQuoteSignature(const TpmQuote& quote);

// Digest of the canonical (index, value) encoding of a seal policy; carried
// in AK certificates as the "seal_policy" claim.
Digest SealPolicyDigest(const std::map<int, Digest>& policy);

}  // namespace dcea::tpm

#endif  // DCEA_TPM_H_
