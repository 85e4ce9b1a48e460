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

// The external verifier. It issues challenges and runs the eight-check
// appraisal over an EvidenceBundle. Failed checks map to attack flags, and
// attack flags map to security goals.

#ifndef DCEA_VERIFIER_H_
#define DCEA_VERIFIER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/base/thread_annotations.h"
#include "absl/status/statusor.h"
#include "absl/synchronization/mutex.h"
#include "dcea/crypto.h"
#include "dcea/evidence.h"
#include "dcea/json_util.h"
#include "dcea/registry.h"
#include "dcea/tpm.h"

namespace dcea::verifier {

enum class BindingChannel { kMrConfigId, kReportData };
std::string_view BindingChannelName(BindingChannel channel);
absl::StatusOr<BindingChannel> ParseBindingChannel(std::string_view name);

enum class CheckId { kC1 = 1, kC2, kC3, kC4, kC5, kC6, kC7, kC8 };
inline constexpr CheckId kAllChecks[] = {CheckId::kC1, CheckId::kC2, CheckId::kC3,
                                         CheckId::kC4, CheckId::kC5, CheckId::kC6,
                                         CheckId::kC7, CheckId::kC8};
std::string_view CheckIdName(CheckId id);   // "C1"
std::string_view CheckTitle(CheckId id);    // "qe_signature_tee_chain"
absl::StatusOr<CheckId> ParseCheckId(std::string_view name);

enum class Attack { kA1 = 1, kA2, kA3, kA4, kA5, kA6 };
inline constexpr Attack kAllAttacks[] = {Attack::kA1, Attack::kA2, Attack::kA3,
                                         Attack::kA4, Attack::kA5, Attack::kA6};
std::string_view AttackName(Attack attack);
absl::StatusOr<Attack> ParseAttack(std::string_view name);

enum class Goal { kAB, kF, kMC, kCV, kPO };
inline constexpr Goal kAllGoals[] = {Goal::kAB, Goal::kF, Goal::kMC, Goal::kCV,
                                     Goal::kPO};
std::string_view GoalName(Goal goal);
// Goals an attack undermines.
const std::set<Goal>& GoalsAffectedBy(Attack attack);

inline constexpr int64_t kVtpmQuoteLatencyMs = 300;
inline constexpr int64_t kDiscreteQuoteLatencyMs = 550;

int64_t HonestQuoteLatencyMs(tpm::TpmKind kind);
// Honest quote latency plus one network round trip.
int64_t DefaultRttThresholdMs(tpm::TpmKind kind, int64_t one_way_delay_ms);

struct VerifierPolicy {
  std::vector<Certificate> trusted_tee_roots;
  std::vector<Certificate> trusted_provider_roots;
  std::optional<std::map<int, Digest>> expected_pcr17_18;
  int64_t rtt_threshold_ms = 0;
  bool require_ak_registry_uniqueness = false;
  BindingChannel binding_channel = BindingChannel::kMrConfigId;
  // EK "provider" claims accepted; empty accepts any provider.
  std::set<std::string> allowed_providers;
  // Test hook: listed checks are reported as passed without being evaluated.
  std::set<CheckId> disabled_checks;

  absl::Status Validate() const;
  bool operator==(const VerifierPolicy&) const = default;
};

struct Challenge {
  tpm::Nonce td_nonce{};
  tpm::Nonce tpm_nonce{};
  int64_t issued_at_ms = 0;

  bool operator==(const Challenge&) const = default;
};

struct CheckResult {
  CheckId id = CheckId::kC1;
  std::string name;
  bool passed = false;
  bool disabled = false;
  std::string detail;
  // Attacks this failure is evidence of; empty when passed.
  std::set<Attack> flags;

  bool operator==(const CheckResult&) const = default;
};

struct Verdict {
  bool accepted = false;
  std::vector<CheckResult> checks;
  std::set<Attack> attack_flags;
  std::map<Goal, bool> goals;  // true = goal holds

  const CheckResult& check(CheckId id) const;
  bool Passed(CheckId id) const { return check(id).passed; }
  std::set<CheckId> FailedChecks() const;
  bool operator==(const Verdict&) const = default;
};

// Folds per-check results into flags, goals and the accept bit.
Verdict AssembleVerdict(std::vector<CheckResult> checks);

// Verdict-independent pieces of the pipeline, exposed for tests.
bool AkBindingHolds(const evidence::EvidenceBundle& bundle,
                    BindingChannel channel);
int64_t ObservedRttMs(const evidence::Timing& timing);

class Verifier {
 public:
  using Clock = std::function<int64_t()>;

  // `clock` supplies issued_at; `registry` may be shared with provisioning.
  Verifier(uint64_t seed, Clock clock,
           std::shared_ptr<AkRegistry> registry = nullptr);

  Challenge IssueChallenge();
  // Makes a challenge issued elsewhere (e.g. read from a policy file)
  // outstanding in this verifier's ledger.
  void LoadChallenge(const Challenge& challenge);
  std::vector<Challenge> OutstandingChallenges() const;

  // Runs all eight checks. The challenge is consumed by the first bundle
  // verified against it; re-verifying that same bundle reproduces the verdict,
  // any other bundle fails C4.
  Verdict VerifyBundle(const evidence::EvidenceBundle& bundle,
                       const VerifierPolicy& policy, const Challenge& challenge);

  AkRegistry& registry() { return *registry_; }
  std::shared_ptr<AkRegistry> shared_registry() { return registry_; }

 private:
  struct LedgerEntry {
    Challenge challenge;
    std::optional<Digest> consumed_by;
  };

  // C4's ledger half; returns an empty string when the use is allowed.
  std::string ConsumeChallenge(const Challenge& challenge,
                               const Digest& bundle_digest);

  Clock clock_;
  std::shared_ptr<AkRegistry> registry_;
  mutable absl::Mutex mu_;
  Prng prng_ ABSL_GUARDED_BY(mu_);
  int64_t last_issued_ms_ ABSL_GUARDED_BY(mu_) = 0;
  std::vector<LedgerEntry> ledger_ ABSL_GUARDED_BY(mu_);
};

// JSON forms.
json_util::Json ChallengeToJson(const Challenge& challenge);
absl::StatusOr<Challenge> ChallengeFromJson(const json_util::Json& j,
                                            std::string_view path);
json_util::Json PolicyToJson(const VerifierPolicy& policy);
absl::StatusOr<VerifierPolicy> PolicyFromJson(const json_util::Json& j,
                                              std::string_view path);
json_util::Json VerdictToJson(const Verdict& verdict);

// policy.json: the appraisal policy together with the verifier state needed
// to check a bundle offline.
struct PolicyFile {
  VerifierPolicy policy;
  std::vector<Challenge> challenges;
  std::vector<std::pair<Bytes, RegistryEntry>> registry;
  // Registrations that were refused as duplicates, replayed on load.
  std::vector<std::pair<Bytes, RegistryEntry>> refused_registrations;
};
std::string SerializePolicyFile(const PolicyFile& file);
absl::StatusOr<PolicyFile> DeserializePolicyFile(std::string_view text);

// Captures a registry (entries and refused duplicates) into `file`, and the
// reverse.
void CaptureRegistry(const AkRegistry& registry, PolicyFile& file);
void RestoreRegistry(const PolicyFile& file, AkRegistry& registry);

// The outstanding challenge a bundle answers: the one whose TD nonce matches,
// else the most recently issued one. nullopt only when `challenges` is empty.
std::optional<Challenge> SelectChallenge(const std::vector<Challenge>& challenges,
                                         const evidence::EvidenceBundle& bundle);

}  // namespace dcea::verifier

#endif  // DCEA_VERIFIER_H_
