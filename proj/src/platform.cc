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

#include "dcea/platform.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "dcea/status.h"

namespace dcea::platform {
namespace {

absl::Status ValidateStack(const HostStack& stack) {
  const std::pair<const Bytes*, const char*> images[] = {
      {&stack.firmware_image, "firmware_image"},
      {&stack.acm_image, "acm_image"},
      {&stack.seamldr_image, "seamldr_image"},
      {&stack.kernel_image, "kernel_image"},
      {&stack.hypervisor_image, "hypervisor_image"},
      {&stack.vtpm_binary, "vtpm_binary"},
  };
  for (const auto& [image, name] : images) {
    if (image->empty()) {
      return MakeError(ErrorCode::kInvalidStack, absl::StrCat(name, " is empty"));
    }
  }
  for (const StaticEvent& ev : stack.static_events) {
    if (ev.pcr_index < 0 || ev.pcr_index > 7) {
      return MakeError(ErrorCode::kInvalidPcrIndex,
                       absl::StrCat("static event '", ev.description,
                                    "' targets PCR ", ev.pcr_index));
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<StaticEvent> DefaultStaticEvents() {
  const std::pair<int, const char*> defaults[] = {
      {1, "platform configuration"},  {2, "option ROM code"},
      {3, "option ROM configuration"}, {4, "boot manager"},
      {5, "boot manager configuration"}, {7, "secure boot policy"},
  };
  std::vector<StaticEvent> events;
  for (const auto& [pcr, desc] : defaults) {
    events.push_back({pcr, ToBytes(absl::StrCat("default:", desc)), desc});
  }
  return events;
}

absl::StatusOr<Platform> MeasuredLaunch(HostStack stack, tpm::TpmState tpm) {
  DCEA_RETURN_IF_ERROR(ValidateStack(stack));
  if (!tpm.pcrs[17].IsZero()) {
    return MakeError(ErrorCode::kDoubleLaunch, "PCR 17 already populated");
  }
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 0, stack.firmware_image,
                                            "host firmware"));
  for (const StaticEvent& ev : stack.static_events) {
    DCEA_ASSIGN_OR_RETURN(
        tpm, tpm::PcrExtend(std::move(tpm), ev.pcr_index, ev.data, ev.description));
  }
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 17, stack.acm_image, "SINIT ACM"));
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 17, stack.seamldr_image, "SEAMLDR"));
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 18, stack.kernel_image, "host kernel"));
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 18, stack.hypervisor_image, "hypervisor"));
  DCEA_ASSIGN_OR_RETURN(tpm, tpm::PcrExtend(std::move(tpm), 18, stack.vtpm_binary, "vTPM binary"));

  Platform platform;
  const Claims& ek_claims = tpm.ek_cert.claims;
  if (auto it = ek_claims.find("platform_id"); it != ek_claims.end()) {
    platform.id = it->second;
  }
  for (const char* key : {"provider", "region"}) {
    if (auto it = ek_claims.find(key); it != ek_claims.end()) {
      platform.provider_claims[key] = it->second;
    }
  }
  platform.tpm = std::move(tpm);
  platform.stack = std::move(stack);
  platform.launched = true;
  return platform;
}

std::map<int, Digest> ExpectedLaunchPcrs(const HostStack& stack) {
  Digest pcr17 = Extend(Extend(Digest::Zero(), ComputeDigest(stack.acm_image)),
                        ComputeDigest(stack.seamldr_image));
  Digest pcr18 = Digest::Zero();
  for (const Bytes* image :
       {&stack.kernel_image, &stack.hypervisor_image, &stack.vtpm_binary}) {
    pcr18 = Extend(pcr18, ComputeDigest(*image));
  }
  return {{17, pcr17}, {18, pcr18}};
}

absl::StatusOr<VtpmInstance> InstantiateVtpm(const Platform& platform,
                                             const KeyPair& provider_ca,
                                             ByteSpan vtpm_seed,
                                             const std::set<int>& policy_pcrs) {
  if (!platform.launched) {
    return MakeError(ErrorCode::kNotLaunched,
                     absl::StrCat("platform '", platform.id, "' has not launched"));
  }
  Claims claims = platform.provider_claims;
  claims["platform_id"] = platform.id;
  Bytes ek_seed = ToBytes("vtpm-ek:");
  ek_seed.insert(ek_seed.end(), vtpm_seed.begin(), vtpm_seed.end());
  DCEA_ASSIGN_OR_RETURN(
      tpm::TpmState vtpm,
      tpm::TpmInit(ek_seed, provider_ca, claims, tpm::TpmKind::kVirtual));
  for (const EventLogEntry& entry : platform.tpm.log) {
    if (entry.scope == Scope::kHost && entry.pcr_index.has_value() &&
        policy_pcrs.count(*entry.pcr_index) > 0) {
      DCEA_ASSIGN_OR_RETURN(vtpm, tpm::ExtendMeasurement(std::move(vtpm), entry));
    }
  }
  Bytes ak_seed = ToBytes("vtpm-ak:");
  ak_seed.insert(ak_seed.end(), vtpm_seed.begin(), vtpm_seed.end());
  DCEA_ASSIGN_OR_RETURN(
      tpm::AkResult ak,
      tpm::CreateSealedAk(std::move(vtpm), ak_seed, policy_pcrs, &provider_ca));
  return VtpmInstance{std::move(ak.tpm), ak.handle};
}

}  // namespace dcea::platform
