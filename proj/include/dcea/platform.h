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

#ifndef DCEA_PLATFORM_H_
#define DCEA_PLATFORM_H_

#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "dcea/tpm.h"

namespace dcea::platform {

// One static-chain measurement (firmware configuration, option ROMs, ...).
struct StaticEvent {
  int pcr_index = 1;
  Bytes data;
  std::string description;

  bool operator==(const StaticEvent&) const = default;
};

// One event each on PCR 1..5 and 7. PCR 6 stays empty.
std::vector<StaticEvent> DefaultStaticEvents();

struct HostStack {
  Bytes firmware_image;
  Bytes acm_image;
  Bytes seamldr_image;
  Bytes kernel_image;
  Bytes hypervisor_image;
  Bytes vtpm_binary;
  std::vector<StaticEvent> static_events = DefaultStaticEvents();

  bool operator==(const HostStack&) const = default;
};

struct Platform {
  std::string id;
  tpm::TpmState tpm;
  HostStack stack;
  Claims provider_claims;
  bool launched = false;
};

// Static chain: firmware -> PCR 0, then each static event in order.
// Dynamic chain: ACM, SEAMLDR -> PCR 17; kernel, hypervisor, vTPM binary ->
// PCR 18. The platform id and provider claims are taken from the TPM's EK
// certificate ("platform_id", "provider", "region").
absl::StatusOr<Platform> MeasuredLaunch(HostStack stack, tpm::TpmState tpm);

// Golden PCR 17/18 values for a stack, computed without a TPM.
std::map<int, Digest> ExpectedLaunchPcrs(const HostStack& stack);

struct VtpmInstance {
  tpm::TpmState tpm;
  tpm::AkHandle ak = 0;
};

// Provider-managed vTPM on a launched host. The vTPM mirrors the host's
// PCR 17/18 log so its AK, sealed to `policy_pcrs`, is bound to the host's
// measured launch; the EK certificate carries the host's provider claims.
absl::StatusOr<VtpmInstance> InstantiateVtpm(
    const Platform& platform, const KeyPair& provider_ca, ByteSpan vtpm_seed,
    const std::set<int>& policy_pcrs = tpm::kDefaultPolicyPcrs);

}  // namespace dcea::platform

#endif  // DCEA_PLATFORM_H_
