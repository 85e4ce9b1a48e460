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

// Simulation world, host-controlled network links and the attack generators.
//
// A World is built for one deployment class. S1 quotes from a provider vTPM
// on a launched host; S2 quotes from the host's discrete TPM. Building the
// world provisions the tenant host ("host-a") with a measured launch and a
// registered AK. Its TD is bound to that AK, and the guest agent mirrors TD
// events into the quoting TPM. Everything is derived from
// the config, so equal configs give byte-identical evidence.

#ifndef DCEA_ADVERSARY_H_
#define DCEA_ADVERSARY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "dcea/evidence.h"
#include "dcea/json_util.h"
#include "dcea/platform.h"
#include "dcea/registry.h"
#include "dcea/td.h"
#include "dcea/tpm.h"
#include "dcea/verifier.h"

namespace dcea::adversary {

enum class Deployment { kS1, kS2 };
std::string_view DeploymentName(Deployment d);  // "S1" / "S2"
absl::StatusOr<Deployment> ParseDeployment(std::string_view name);

inline constexpr char kVerifierEndpoint[] = "verifier";
inline constexpr char kTenantHost[] = "host-a";
inline constexpr char kDecoyHost[] = "decoy-b";
inline constexpr char kAttackerHost[] = "attacker-x";
inline constexpr char kCloneHost[] = "host-z";

// PCRs covered by every quote: each PCR in a TDX mapping row plus the
// measured-launch anchors.
const std::vector<int>& QuoteSelection();

// Host stack images, each given as a seed string.
struct StackSpec {
  std::string firmware;
  std::string acm;
  std::string seamldr;
  std::string kernel;
  std::string hypervisor;
  std::string vtpm_binary;

  platform::HostStack ToHostStack() const;
  bool operator==(const StackSpec&) const = default;
};

struct WorkloadEvent {
  int rtmr_index = 2;
  int pcr_index = 8;
  std::string data;
  std::string description;

  bool operator==(const WorkloadEvent&) const = default;
};

struct WorldConfig {
  uint64_t seed = 0;
  Deployment deployment = Deployment::kS2;
  int64_t verifier_delay_ms = 20;  // verifier <-> host, one way
  int64_t relay_delay_ms = 40;     // attacker relay, one way
  int64_t local_delay_ms = 0;      // TD <-> TPM on one host, one way
  int64_t td_report_latency_ms = 0;
  StackSpec stack;
  std::string td_firmware = "td-firmware";
  std::vector<WorkloadEvent> workload;
  std::vector<WorkloadEvent> decoy_workload;
  std::string provider = "simcloud";
  std::string region = "eu-central-1";
  verifier::BindingChannel binding_channel = verifier::BindingChannel::kMrConfigId;
  bool in_td_check = false;
  std::set<int> ak_policy_pcrs = tpm::kDefaultPolicyPcrs;

  bool operator==(const WorldConfig&) const = default;
};

// Delays, stack images and workloads drawn from `seed`: verifier delay in
// [5, 60] ms, relay delay in [25, 200] ms, 3 to 8 workload events.
WorldConfig RandomWorldConfig(uint64_t seed, Deployment deployment);
StackSpec RandomStack(Prng& prng);
std::vector<WorkloadEvent> RandomWorkload(Prng& prng, std::string_view prefix);

struct Message {
  std::string kind;
  Bytes payload;
  int64_t sent_at_ms = 0;
  int64_t delivered_at_ms = 0;

  bool operator==(const Message&) const = default;
};

using TamperHook = std::function<Message(Message)>;

struct LinkModel {
  int64_t one_way_delay_ms = 0;
  TamperHook tamper_hook;
  std::vector<Message> replay_buffer;  // every message delivered, in order
};

using LinkId = std::pair<std::string, std::string>;  // (from, to)

// Key material of the honest infrastructure. Generators never read the
// private halves.
struct Authorities {
  KeyPair provider_ca;
  Certificate provider_root;
  KeyPair vendor_ca;
  Certificate vendor_root;
  KeyPair qe;
  CertChain qe_chain;  // QE leaf, vendor root
};

struct World {
  WorldConfig config;
  uint64_t rng_seed = 0;
  int64_t clock_ms = 0;
  Authorities authorities;
  std::map<std::string, platform::Platform> platforms;
  std::map<std::string, td::TdState> tds;
  std::map<std::string, platform::VtpmInstance> vtpms;      // S1 quoting TPMs
  std::map<std::string, tpm::AkHandle> platform_aks;        // S2 AKs
  std::map<LinkId, LinkModel> links;
  std::shared_ptr<verifier::AkRegistry> registry;
};

absl::StatusOr<World> BuildWorld(WorldConfig config);

// Fails for negative `ms`.
absl::Status AdvanceClock(World& world, int64_t ms);

// Stamps delivered_at = sent_at + link delay, applies the tamper hook and
// records the delivered message in the link's replay buffer. Unknown links
// are created with the world's local delay.
Message Deliver(World& world, const LinkId& link, Message message);

LinkId VerifierLink(std::string_view host);    // verifier -> host
LinkId ReturnLink(std::string_view host);      // host -> verifier
LinkId TpmLink(std::string_view td_host, std::string_view tpm_host);
LinkId TpmReturnLink(std::string_view td_host, std::string_view tpm_host);

// The TPM that signs quotes for `host` in the world's deployment.
absl::StatusOr<tpm::TpmState*> QuotingTpm(World& world, const std::string& host);
absl::StatusOr<tpm::AkHandle> QuotingAk(const World& world, const std::string& host);

// Launches (or relaunches) `host` with `stack` and provisions a quoting AK
// certified by the provider CA and recorded in the registry.
absl::Status ProvisionHost(World& world, const std::string& host,
                           const StackSpec& stack);

// A verifier whose clock is the world clock and whose registry is the
// world's. `world` must outlive it.
std::unique_ptr<verifier::Verifier> MakeVerifier(World& world);

// Golden policy for the world: vendor and provider roots, PCR 17/18 pinned
// to the golden stack, default RTT threshold, registry uniqueness required.
verifier::VerifierPolicy DefaultPolicy(const World& world);

absl::StatusOr<evidence::EvidenceBundle> RunHonest(World& world,
                                                   Deployment kind,
                                                   const verifier::Challenge& challenge);

enum class ScenarioId { kA1, kA2, kA2MixMatch, kA2Frankenstein, kA3, kA4, kA5, kA6 };
std::string_view ScenarioIdName(ScenarioId id);  // "A2_MixMatch"
absl::StatusOr<ScenarioId> ParseScenarioId(std::string_view name);

struct AttackScenario {
  ScenarioId id = ScenarioId::kA1;
  // "variant" selects among a category's representative actions.
  std::map<std::string, std::string> params;
};

// Unknown ids or variants fail with UnknownScenario.
absl::StatusOr<evidence::EvidenceBundle> RunAttack(World& world,
                                                   const AttackScenario& scenario,
                                                   const verifier::Challenge& challenge);

// Named, runnable entries: two honest baselines plus every attack variant.
struct CatalogEntry {
  std::string name;  // "a2-frankenstein"
  bool honest = false;
  std::optional<Deployment> honest_kind;  // set for honest entries
  AttackScenario scenario;
  verifier::Attack attack = verifier::Attack::kA1;
  std::set<verifier::CheckId> targeted_checks;
  bool relevant_s1 = false;
  bool relevant_s2 = true;
  std::string description;

  bool RelevantIn(Deployment d) const {
    return d == Deployment::kS1 ? relevant_s1 : relevant_s2;
  }
};

const std::vector<CatalogEntry>& Catalog();
absl::StatusOr<const CatalogEntry*> FindCatalogEntry(std::string_view name);

// scenario.json: {"format_version": 1, "scenario": <catalog name>,
// "deployment": "S1"|"S2", "seed": n, "world": {...overrides}}.
struct ScenarioFile {
  std::string scenario;
  std::optional<Deployment> deployment;
  std::optional<uint64_t> seed;
  json_util::Json world_overrides = json_util::Json::object();
};
absl::StatusOr<ScenarioFile> ParseScenarioFile(std::string_view text);
// Applies the overrides in `file` on top of RandomWorldConfig(seed, ...).
absl::StatusOr<WorldConfig> ResolveWorldConfig(const ScenarioFile& file,
                                               uint64_t seed,
                                               Deployment deployment);
json_util::Json WorldConfigToJson(const WorldConfig& config);

}  // namespace dcea::adversary

#endif  // DCEA_ADVERSARY_H_
