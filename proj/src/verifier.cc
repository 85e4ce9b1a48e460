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

#include "dcea/verifier.h"

#include <algorithm>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"
#include "dcea/td.h"

namespace dcea::verifier {
namespace {

using evidence::EvidenceBundle;
using json_util::Json;

struct CheckInfo {
  CheckId id;
  std::string_view name;
  std::string_view title;
};

constexpr CheckInfo kCheckInfo[] = {
    {CheckId::kC1, "C1", "qe_signature_tee_chain"},
    {CheckId::kC2, "C2", "quote_signature_ak_provenance"},
    {CheckId::kC3, "C3", "ak_binding"},
    {CheckId::kC4, "C4", "nonce_freshness"},
    {CheckId::kC5, "C5", "rtmr_pcr_consistency"},
    {CheckId::kC6, "C6", "launch_pcrs_seal_policy"},
    {CheckId::kC7, "C7", "round_trip_time"},
    {CheckId::kC8, "C8", "ak_registry_uniqueness"},
};

const CheckInfo& InfoFor(CheckId id) {
  return kCheckInfo[static_cast<int>(id) - 1];
}

std::string ClaimOr(const Certificate& cert, const std::string& key) {
  auto it = cert.claims.find(key);
  return it == cert.claims.end() ? std::string() : it->second;
}

// Collects failure reasons for one check.
class Findings {
 public:
  void Fail(std::string reason, std::initializer_list<Attack> flags) {
    reasons_.push_back(std::move(reason));
    flags_.insert(flags.begin(), flags.end());
  }
  CheckResult Finish(CheckId id, std::string ok_detail) && {
    CheckResult r;
    r.id = id;
    r.name = std::string(InfoFor(id).title);
    r.passed = reasons_.empty();
    r.detail = r.passed ? std::move(ok_detail) : absl::StrJoin(reasons_, "; ");
    r.flags = std::move(flags_);
    return r;
  }

 private:
  std::vector<std::string> reasons_;
  std::set<Attack> flags_;
};

CheckResult CheckQe(const EvidenceBundle& b, const VerifierPolicy& policy) {
  Findings f;
  const td::TdReport& report = b.td_report;
  if (report.qe_chain.empty()) {
    f.Fail("QE chain is empty", {Attack::kA1});
  } else {
    absl::StatusOr<ChainVerdict> chain =
        VerifyChain(report.qe_chain, policy.trusted_tee_roots);
    if (!chain.ok() || !chain->ok()) {
      f.Fail(absl::StrCat("QE chain: ",
                          chain.ok() ? chain->ToString()
                                     : std::string(StatusMessage(chain.status()))),
             {Attack::kA1});
    }
    absl::StatusOr<bool> sig = td::VerifyTdReportSignature(report);
    if (!sig.ok() || !*sig) f.Fail("TD report signature invalid", {Attack::kA1});
  }
  return std::move(f).Finish(CheckId::kC1, "TD report signed by a trusted QE");
}

bool IssuedByTrustedRoot(const Certificate& cert,
                         const std::vector<Certificate>& roots) {
  for (const Certificate& root : roots) {
    if (KeyId(root.subject_public) != cert.issuer_id) continue;
    absl::StatusOr<bool> ok =
        Verify(root.subject_public, cert.SignedPayload(), cert.signature);
    if (ok.ok() && *ok) return true;
  }
  return false;
}

CheckResult CheckQuoteAndProvenance(const EvidenceBundle& b,
                                    const VerifierPolicy& policy,
                                    const AkRegistry& registry) {
  Findings f;
  const tpm::TpmQuote& quote = b.tpm_quote;
  absl::StatusOr<bool> sig = tpm::VerifyQuoteSignature(quote);
  if (!sig.ok() || !*sig) {
    f.Fail("quote signature does not verify under the quoted AK",
           {Attack::kA1, Attack::kA4});
  }

  const std::initializer_list<Attack> provenance = {Attack::kA1, Attack::kA5};
  if (b.ek_cert_chain.empty()) {
    f.Fail("EK chain is empty", provenance);
    return std::move(f).Finish(CheckId::kC2, "");
  }
  const Certificate& ek = b.ek_cert_chain.front();
  absl::StatusOr<ChainVerdict> chain =
      VerifyChain(b.ek_cert_chain, policy.trusted_provider_roots);
  if (!chain.ok() || !chain->ok()) {
    f.Fail(absl::StrCat("EK chain: ",
                        chain.ok() ? chain->ToString()
                                   : std::string(StatusMessage(chain.status()))),
           provenance);
  }
  if (ClaimOr(ek, "role") != "EK") f.Fail("EK leaf lacks role=EK", provenance);
  const std::string provider = ClaimOr(ek, "provider");
  if (!policy.allowed_providers.empty() &&
      !policy.allowed_providers.contains(provider)) {
    f.Fail(absl::StrCat("provider '", provider, "' not allowed"), provenance);
  }

  const std::string ek_id = KeyId(ek.subject_public);
  if (b.ak_cert.has_value()) {
    const Certificate& ak = *b.ak_cert;
    if (ak.subject_public != quote.ak_public) {
      f.Fail("AK certificate is for a different key", provenance);
    }
    if (!IssuedByTrustedRoot(ak, policy.trusted_provider_roots)) {
      f.Fail("AK certificate not issued by a trusted provider root", provenance);
    }
    if (ClaimOr(ak, "role") != "AK") f.Fail("AK certificate lacks role=AK", provenance);
    if (ClaimOr(ak, "ek_id") != ek_id) {
      f.Fail("AK certificate is anchored to a different EK", provenance);
    }
  } else {
    std::optional<RegistryEntry> entry = registry.Lookup(quote.ak_public);
    if (!entry.has_value()) {
      f.Fail("AK has neither a certificate nor a registry entry", provenance);
    } else if (entry->issuer != ek_id) {
      f.Fail("registry entry is anchored to a different EK", provenance);
    }
  }
  return std::move(f).Finish(CheckId::kC2,
                             "quote signed by an EK-anchored, provider-rooted AK");
}

CheckResult CheckBinding(const EvidenceBundle& b, const VerifierPolicy& policy) {
  Findings f;
  if (!AkBindingHolds(b, policy.binding_channel)) {
    f.Fail(absl::StrCat("digest(AK_pub) does not match ",
                        policy.binding_channel == BindingChannel::kMrConfigId
                            ? "MRCONFIGID"
                            : "report_data"),
           {Attack::kA2, Attack::kA5});
  }
  return std::move(f).Finish(CheckId::kC3, "TD embeds digest of the quoting AK");
}

CheckResult CheckConsistencyRows(const EvidenceBundle& b) {
  Findings f;
  if (td::ReportDataFlag(b.td_report.report_data) == td::InTdFlag::kInconsistent) {
    f.Fail("in-TD comparison reported a mismatch", {Attack::kA3});
  }
  evidence::ConsistencyResult result =
      evidence::CheckRtmrPcrConsistency(b.td_report, b.tpm_quote, b.event_log);
  if (!result.error.empty()) {
    f.Fail(absl::StrCat("event log: ", result.error), {Attack::kA3});
  } else if (!result.AllMatched()) {
    f.Fail(absl::StrCat("mismatched rows: ",
                        absl::StrJoin(result.MismatchedRows(), ",")),
           {Attack::kA3});
  }
  return std::move(f).Finish(CheckId::kC5, "all TDX/PCR mapping rows agree");
}

CheckResult CheckLaunchPcrs(const EvidenceBundle& b, const VerifierPolicy& policy) {
  Findings f;
  const tpm::TpmQuote& quote = b.tpm_quote;
  if (policy.expected_pcr17_18.has_value()) {
    for (const auto& [index, expected] : *policy.expected_pcr17_18) {
      std::optional<Digest> got = quote.PcrValue(index);
      if (!got.has_value()) {
        f.Fail(absl::StrCat("PCR ", index, " not quoted"), {Attack::kA6});
      } else if (*got != expected) {
        f.Fail(absl::StrCat("PCR ", index, " differs from the pinned value"),
               {Attack::kA6});
      }
    }
  }
  if (b.ak_cert.has_value()) {
    const std::string claimed = ClaimOr(*b.ak_cert, "seal_policy");
    const std::string pcr_list = ClaimOr(*b.ak_cert, "seal_pcrs");
    std::map<int, Digest> quoted;
    bool complete = !claimed.empty() && !pcr_list.empty();
    for (absl::string_view part : absl::StrSplit(pcr_list, ',', absl::SkipEmpty())) {
      int index = 0;
      std::optional<Digest> value;
      if (absl::SimpleAtoi(part, &index)) {
        value = quote.PcrValue(index);
      }
      if (!value.has_value()) {
        complete = false;
        break;
      }
      quoted[index] = *value;
    }
    if (!complete) {
      f.Fail("AK seal policy is missing or covers unquoted PCRs", {Attack::kA6});
    } else if (tpm::SealPolicyDigest(quoted).ToHex() != claimed) {
      f.Fail("quoted PCRs do not satisfy the AK seal policy", {Attack::kA6});
    }
  }
  return std::move(f).Finish(CheckId::kC6, "launch PCRs match policy");
}

CheckResult CheckRtt(const EvidenceBundle& b, const VerifierPolicy& policy) {
  Findings f;
  const int64_t rtt = ObservedRttMs(b.timing);
  if (rtt < 0) {
    f.Fail("quote received before the challenge was sent", {Attack::kA2});
  } else if (rtt > policy.rtt_threshold_ms) {
    f.Fail(absl::StrCat("round trip ", rtt, " ms exceeds ",
                        policy.rtt_threshold_ms, " ms"),
           {Attack::kA2});
  }
  return std::move(f).Finish(
      CheckId::kC7, absl::StrCat("round trip ", rtt, " ms within ",
                                 policy.rtt_threshold_ms, " ms"));
}

CheckResult CheckRegistry(const EvidenceBundle& b, const VerifierPolicy& policy,
                          const AkRegistry& registry) {
  Findings f;
  if (!policy.require_ak_registry_uniqueness) {
    return std::move(f).Finish(CheckId::kC8, "not required by policy");
  }
  const ByteSpan ak = b.tpm_quote.ak_public;
  const std::string platform =
      b.ek_cert_chain.empty() ? std::string()
                              : ClaimOr(b.ek_cert_chain.front(), "platform_id");
  std::optional<RegistryEntry> entry = registry.Lookup(ak);
  if (entry.has_value() && entry->platform_id != platform) {
    f.Fail(absl::StrCat("AK registered to platform '", entry->platform_id,
                        "', presented by '", platform, "'"),
           {Attack::kA5});
  }
  if (registry.HasConflict(ak)) {
    f.Fail("AK registration attempted from more than one platform", {Attack::kA5});
  }
  return std::move(f).Finish(CheckId::kC8, entry.has_value()
                                               ? "AK registered to this platform"
                                               : "AK not registered");
}

CheckResult Disabled(CheckId id) {
  CheckResult r;
  r.id = id;
  r.name = std::string(InfoFor(id).title);
  r.passed = true;
  r.disabled = true;
  r.detail = "disabled by policy";
  return r;
}

}  // namespace

std::string_view BindingChannelName(BindingChannel channel) {
  return channel == BindingChannel::kMrConfigId ? "MRCONFIGID" : "ReportData";
}

absl::StatusOr<BindingChannel> ParseBindingChannel(std::string_view name) {
  if (name == "MRCONFIGID") return BindingChannel::kMrConfigId;
  if (name == "ReportData") return BindingChannel::kReportData;
  return MakeError(ErrorCode::kInvalidPolicy,
                   absl::StrCat("unknown binding channel '", std::string(name), "'"));
}

std::string_view CheckIdName(CheckId id) { return InfoFor(id).name; }
std::string_view CheckTitle(CheckId id) { return InfoFor(id).title; }

absl::StatusOr<CheckId> ParseCheckId(std::string_view name) {
  for (const CheckInfo& info : kCheckInfo) {
    if (info.name == name) return info.id;
  }
  return MakeError(ErrorCode::kInvalidPolicy,
                   absl::StrCat("unknown check '", std::string(name), "'"));
}

std::string_view AttackName(Attack attack) {
  static constexpr std::string_view kNames[] = {"A1", "A2", "A3",
                                                "A4", "A5", "A6"};
  return kNames[static_cast<int>(attack) - 1];
}

absl::StatusOr<Attack> ParseAttack(std::string_view name) {
  for (Attack a : kAllAttacks) {
    if (AttackName(a) == name) return a;
  }
  return MakeError(ErrorCode::kParseError,
                   absl::StrCat("unknown attack '", std::string(name), "'"));
}

std::string_view GoalName(Goal goal) {
  static constexpr std::string_view kNames[] = {"AB", "F", "MC", "CV", "PO"};
  return kNames[static_cast<int>(goal)];
}

const std::set<Goal>& GoalsAffectedBy(Attack attack) {
  static const auto* kTable = new std::map<Attack, std::set<Goal>>{
      {Attack::kA1, {Goal::kAB, Goal::kMC}},
      {Attack::kA2, {Goal::kAB, Goal::kF, Goal::kCV, Goal::kPO}},
      {Attack::kA3, {Goal::kMC, Goal::kAB}},
      {Attack::kA4, {Goal::kCV, Goal::kF}},
      {Attack::kA5, {Goal::kAB, Goal::kPO}},
      {Attack::kA6, {Goal::kAB, Goal::kMC}},
  };
  return kTable->at(attack);
}

int64_t HonestQuoteLatencyMs(tpm::TpmKind kind) {
  return kind == tpm::TpmKind::kVirtual ? kVtpmQuoteLatencyMs
                                        : kDiscreteQuoteLatencyMs;
}

int64_t DefaultRttThresholdMs(tpm::TpmKind kind, int64_t one_way_delay_ms) {
  return HonestQuoteLatencyMs(kind) + 2 * one_way_delay_ms;
}

absl::Status VerifierPolicy::Validate() const {
  if (rtt_threshold_ms <= 0) {
    return MakeError(ErrorCode::kInvalidPolicy, "rtt_threshold_ms must be > 0");
  }
  if (expected_pcr17_18.has_value()) {
    for (const auto& [index, value] : *expected_pcr17_18) {
      if (index < 0 || index >= kNumPcrs) {
        return MakeError(ErrorCode::kInvalidPolicy,
                         absl::StrCat("pinned PCR index ", index, " out of range"));
      }
    }
  }
  return absl::OkStatus();
}

const CheckResult& Verdict::check(CheckId id) const {
  for (const CheckResult& c : checks) {
    if (c.id == id) return c;
  }
  static const CheckResult kMissing;
  return kMissing;
}

std::set<CheckId> Verdict::FailedChecks() const {
  std::set<CheckId> out;
  for (const CheckResult& c : checks) {
    if (!c.passed) out.insert(c.id);
  }
  return out;
}

Verdict AssembleVerdict(std::vector<CheckResult> checks) {
  Verdict v;
  v.checks = std::move(checks);
  v.accepted = std::all_of(v.checks.begin(), v.checks.end(),
                           [](const CheckResult& c) { return c.passed; });
  for (const CheckResult& c : v.checks) {
    if (!c.passed) v.attack_flags.insert(c.flags.begin(), c.flags.end());
  }
  for (Goal g : kAllGoals) v.goals[g] = true;
  for (Attack a : v.attack_flags) {
    for (Goal g : GoalsAffectedBy(a)) v.goals[g] = false;
  }
  return v;
}

bool AkBindingHolds(const EvidenceBundle& b, BindingChannel channel) {
  const Digest ak_digest = ComputeDigest(ByteSpan(b.tpm_quote.ak_public));
  if (channel == BindingChannel::kMrConfigId) {
    return b.td_report.mrconfigid == ak_digest;
  }
  return td::ReportDataBindsAk(b.td_report.report_data, ak_digest);
}

int64_t ObservedRttMs(const evidence::Timing& timing) {
  return timing.quote_received - timing.challenge_sent;
}

Verifier::Verifier(uint64_t seed, Clock clock, std::shared_ptr<AkRegistry> registry)
    : clock_(std::move(clock)),
      registry_(registry ? std::move(registry) : std::make_shared<AkRegistry>()),
      prng_(seed) {}

Challenge Verifier::IssueChallenge() {
  const int64_t now = clock_ ? clock_() : 0;
  absl::MutexLock lock(&mu_);
  Challenge c;
  bool fresh = false;
  while (!fresh) {
    c.td_nonce = prng_.NextArray<32>();
    c.tpm_nonce = prng_.NextArray<32>();
    fresh = c.td_nonce != c.tpm_nonce &&
            std::none_of(ledger_.begin(), ledger_.end(), [&](const LedgerEntry& e) {
              return e.challenge.td_nonce == c.td_nonce ||
                     e.challenge.tpm_nonce == c.tpm_nonce;
            });
  }
  last_issued_ms_ = std::max(last_issued_ms_, now);
  c.issued_at_ms = last_issued_ms_;
  ledger_.push_back({c, std::nullopt});
  return c;
}

void Verifier::LoadChallenge(const Challenge& challenge) {
  absl::MutexLock lock(&mu_);
  for (const LedgerEntry& e : ledger_) {
    if (e.challenge == challenge) return;
  }
  ledger_.push_back({challenge, std::nullopt});
  last_issued_ms_ = std::max(last_issued_ms_, challenge.issued_at_ms);
}

std::vector<Challenge> Verifier::OutstandingChallenges() const {
  absl::MutexLock lock(&mu_);
  std::vector<Challenge> out;
  for (const LedgerEntry& e : ledger_) {
    if (!e.consumed_by.has_value()) out.push_back(e.challenge);
  }
  return out;
}

std::string Verifier::ConsumeChallenge(const Challenge& challenge,
                                       const Digest& bundle_digest) {
  absl::MutexLock lock(&mu_);
  for (LedgerEntry& e : ledger_) {
    if (e.challenge.td_nonce != challenge.td_nonce ||
        e.challenge.tpm_nonce != challenge.tpm_nonce) {
      continue;
    }
    if (e.consumed_by.has_value() && *e.consumed_by != bundle_digest) {
      return "challenge already answered by another bundle";
    }
    e.consumed_by = bundle_digest;
    return "";
  }
  return "challenge was not issued by this verifier";
}

Verdict Verifier::VerifyBundle(const EvidenceBundle& b, const VerifierPolicy& policy,
                               const Challenge& challenge) {
  auto enabled = [&](CheckId id) { return !policy.disabled_checks.contains(id); };
  std::vector<CheckResult> checks;
  checks.reserve(8);

  checks.push_back(enabled(CheckId::kC1) ? CheckQe(b, policy) : Disabled(CheckId::kC1));
  checks.push_back(enabled(CheckId::kC2)
                       ? CheckQuoteAndProvenance(b, policy, *registry_)
                       : Disabled(CheckId::kC2));
  checks.push_back(enabled(CheckId::kC3) ? CheckBinding(b, policy)
                                         : Disabled(CheckId::kC3));
  if (enabled(CheckId::kC4)) {
    Findings f;
    const std::initializer_list<Attack> replay = {Attack::kA1, Attack::kA4};
    if (b.nonces.td_nonce != challenge.td_nonce) {
      f.Fail("bundle TD nonce differs from the challenge", replay);
    }
    if (td::ReportDataNonce(b.td_report.report_data) != challenge.td_nonce) {
      f.Fail("report_data nonce differs from the challenge", replay);
    }
    if (b.nonces.tpm_nonce != challenge.tpm_nonce) {
      f.Fail("bundle TPM nonce differs from the challenge", replay);
    }
    if (b.tpm_quote.nonce != challenge.tpm_nonce) {
      f.Fail("quote nonce differs from the challenge", replay);
    }
    const Digest digest = ComputeDigest(evidence::SerializeBundle(b));
    std::string ledger = ConsumeChallenge(challenge, digest);
    if (!ledger.empty()) f.Fail(std::move(ledger), replay);
    checks.push_back(std::move(f).Finish(CheckId::kC4, "both nonces fresh"));
  } else {
    checks.push_back(Disabled(CheckId::kC4));
  }
  checks.push_back(enabled(CheckId::kC5) ? CheckConsistencyRows(b)
                                         : Disabled(CheckId::kC5));
  checks.push_back(enabled(CheckId::kC6) ? CheckLaunchPcrs(b, policy)
                                         : Disabled(CheckId::kC6));
  checks.push_back(enabled(CheckId::kC7) ? CheckRtt(b, policy)
                                         : Disabled(CheckId::kC7));
  checks.push_back(enabled(CheckId::kC8) ? CheckRegistry(b, policy, *registry_)
                                         : Disabled(CheckId::kC8));
  return AssembleVerdict(std::move(checks));
}

Json ChallengeToJson(const Challenge& c) {
  return Json{{"issued_at", c.issued_at_ms},
              {"td_nonce", HexEncode(c.td_nonce)},
              {"tpm_nonce", HexEncode(c.tpm_nonce)}};
}

absl::StatusOr<Challenge> ChallengeFromJson(const Json& j, std::string_view path) {
  Challenge c;
  DCEA_ASSIGN_OR_RETURN(c.issued_at_ms, json_util::GetInt(j, "issued_at", path));
  DCEA_ASSIGN_OR_RETURN(c.td_nonce, json_util::GetFixedHex<32>(j, "td_nonce", path));
  DCEA_ASSIGN_OR_RETURN(c.tpm_nonce, json_util::GetFixedHex<32>(j, "tpm_nonce", path));
  return c;
}

Json PolicyToJson(const VerifierPolicy& p) {
  Json pins = nullptr;
  if (p.expected_pcr17_18.has_value()) {
    pins = Json::object();
    for (const auto& [index, value] : *p.expected_pcr17_18) {
      pins[std::to_string(index)] = value.ToHex();
    }
  }
  Json disabled = Json::array();
  for (CheckId id : p.disabled_checks) disabled.push_back(std::string(CheckIdName(id)));
  return Json{{"allowed_providers", p.allowed_providers},
              {"binding_channel", std::string(BindingChannelName(p.binding_channel))},
              {"disabled_checks", disabled},
              {"expected_pcr17_18", pins},
              {"require_ak_registry_uniqueness", p.require_ak_registry_uniqueness},
              {"rtt_threshold_ms", p.rtt_threshold_ms},
              {"trusted_provider_roots", json_util::ChainToJson(p.trusted_provider_roots)},
              {"trusted_tee_roots", json_util::ChainToJson(p.trusted_tee_roots)}};
}

absl::StatusOr<VerifierPolicy> PolicyFromJson(const Json& j, std::string_view path) {
  using json_util::Join;
  VerifierPolicy p;
  DCEA_ASSIGN_OR_RETURN(const Json* providers,
                        json_util::Field(j, "allowed_providers", path));
  if (!providers->is_array()) {
    return json_util::FieldError(Join(path, "allowed_providers"), "expected an array");
  }
  for (size_t i = 0; i < providers->size(); ++i) {
    if (!(*providers)[i].is_string()) {
      return json_util::FieldError(Join(Join(path, "allowed_providers"), i),
                                   "expected a string");
    }
    p.allowed_providers.insert((*providers)[i].get<std::string>());
  }
  DCEA_ASSIGN_OR_RETURN(std::string channel,
                        json_util::GetString(j, "binding_channel", path));
  absl::StatusOr<BindingChannel> parsed_channel = ParseBindingChannel(channel);
  if (!parsed_channel.ok()) {
    return json_util::FieldError(Join(path, "binding_channel"),
                                 StatusMessage(parsed_channel.status()));
  }
  p.binding_channel = *parsed_channel;
  DCEA_ASSIGN_OR_RETURN(const Json* disabled,
                        json_util::Field(j, "disabled_checks", path));
  if (!disabled->is_array()) {
    return json_util::FieldError(Join(path, "disabled_checks"), "expected an array");
  }
  for (size_t i = 0; i < disabled->size(); ++i) {
    const std::string item = Join(Join(path, "disabled_checks"), i);
    if (!(*disabled)[i].is_string()) return json_util::FieldError(item, "expected a string");
    absl::StatusOr<CheckId> id = ParseCheckId((*disabled)[i].get<std::string>());
    if (!id.ok()) return json_util::FieldError(item, StatusMessage(id.status()));
    p.disabled_checks.insert(*id);
  }
  DCEA_ASSIGN_OR_RETURN(const Json* pins, json_util::Field(j, "expected_pcr17_18", path));
  if (!pins->is_null()) {
    const std::string pin_path = Join(path, "expected_pcr17_18");
    if (!pins->is_object()) return json_util::FieldError(pin_path, "expected an object");
    std::map<int, Digest> values;
    for (const auto& [key, value] : pins->items()) {
      int index = 0;
      if (!absl::SimpleAtoi(key, &index)) {
        return json_util::FieldError(Join(pin_path, key), "key is not a PCR index");
      }
      DCEA_ASSIGN_OR_RETURN(values[index], json_util::GetDigest(*pins, key, pin_path));
    }
    p.expected_pcr17_18 = std::move(values);
  }
  DCEA_ASSIGN_OR_RETURN(p.require_ak_registry_uniqueness,
                        json_util::GetBool(j, "require_ak_registry_uniqueness", path));
  DCEA_ASSIGN_OR_RETURN(p.rtt_threshold_ms,
                        json_util::GetInt(j, "rtt_threshold_ms", path));
  DCEA_ASSIGN_OR_RETURN(const Json* provider_roots,
                        json_util::Field(j, "trusted_provider_roots", path));
  DCEA_ASSIGN_OR_RETURN(p.trusted_provider_roots,
                        json_util::ChainFromJson(*provider_roots,
                                                 Join(path, "trusted_provider_roots")));
  DCEA_ASSIGN_OR_RETURN(const Json* tee_roots,
                        json_util::Field(j, "trusted_tee_roots", path));
  DCEA_ASSIGN_OR_RETURN(p.trusted_tee_roots,
                        json_util::ChainFromJson(*tee_roots,
                                                 Join(path, "trusted_tee_roots")));
  absl::Status valid = p.Validate();
  if (!valid.ok()) {
    return json_util::FieldError(Join(path, "rtt_threshold_ms"), StatusMessage(valid));
  }
  return p;
}

Json VerdictToJson(const Verdict& v) {
  Json checks = Json::array();
  for (const CheckResult& c : v.checks) {
    Json flags = Json::array();
    for (Attack a : c.flags) flags.push_back(std::string(AttackName(a)));
    checks.push_back(Json{{"check_id", std::string(CheckIdName(c.id))},
                          {"detail", c.detail},
                          {"disabled", c.disabled},
                          {"flags", flags},
                          {"name", c.name},
                          {"passed", c.passed}});
  }
  Json flags = Json::array();
  for (Attack a : v.attack_flags) flags.push_back(std::string(AttackName(a)));
  Json goals = Json::object();
  for (const auto& [goal, holds] : v.goals) {
    goals[std::string(GoalName(goal))] = holds ? "pass" : "fail";
  }
  return Json{{"accepted", v.accepted},
              {"attack_flags", flags},
              {"checks", checks},
              {"goals", goals}};
}

namespace {

using Registrations = std::vector<std::pair<Bytes, RegistryEntry>>;

Json RegistrationsToJson(const Registrations& list) {
  Json out = Json::array();
  for (const auto& [key, entry] : list) {
    out.push_back(Json{{"ak_public", HexEncode(key)},
                       {"issuer", entry.issuer},
                       {"platform_id", entry.platform_id},
                       {"timestamp", entry.timestamp_ms}});
  }
  return out;
}

absl::StatusOr<Registrations> RegistrationsFromJson(const Json& j, std::string_view key) {
  const std::string path = json_util::Join("", key);
  DCEA_ASSIGN_OR_RETURN(const Json* list, json_util::Field(j, key, ""));
  if (!list->is_array()) return json_util::FieldError(path, "expected an array");
  Registrations out;
  for (size_t i = 0; i < list->size(); ++i) {
    const std::string item = json_util::Join(path, i);
    const Json& r = (*list)[i];
    RegistryEntry entry;
    DCEA_ASSIGN_OR_RETURN(Bytes ak, json_util::GetHex(r, "ak_public", item));
    DCEA_ASSIGN_OR_RETURN(entry.issuer, json_util::GetString(r, "issuer", item));
    DCEA_ASSIGN_OR_RETURN(entry.platform_id, json_util::GetString(r, "platform_id", item));
    DCEA_ASSIGN_OR_RETURN(entry.timestamp_ms, json_util::GetInt(r, "timestamp", item));
    out.emplace_back(std::move(ak), std::move(entry));
  }
  return out;
}

}  // namespace

void CaptureRegistry(const AkRegistry& registry, PolicyFile& file) {
  file.registry = registry.Snapshot();
  file.refused_registrations.clear();
  for (const RegistryConflict& c : registry.Conflicts()) {
    file.refused_registrations.emplace_back(c.ak_public, c.attempted);
  }
}

void RestoreRegistry(const PolicyFile& file, AkRegistry& registry) {
  for (const auto& [key, entry] : file.registry) registry.Register(key, entry);
  for (const auto& [key, entry] : file.refused_registrations) {
    registry.Register(key, entry);
  }
}

std::string SerializePolicyFile(const PolicyFile& file) {
  Json challenges = Json::array();
  for (const Challenge& c : file.challenges) challenges.push_back(ChallengeToJson(c));
  return json_util::Dump(Json{{"challenges", challenges},
                              {"format_version", 1},
                              {"policy", PolicyToJson(file.policy)},
                              {"refused_registrations",
                               RegistrationsToJson(file.refused_registrations)},
                              {"registry", RegistrationsToJson(file.registry)}});
}

absl::StatusOr<PolicyFile> DeserializePolicyFile(std::string_view text) {
  using json_util::Join;
  DCEA_ASSIGN_OR_RETURN(Json j, json_util::ParseText(text));
  DCEA_ASSIGN_OR_RETURN(int64_t version, json_util::GetInt(j, "format_version", ""));
  if (version != 1) {
    return json_util::FieldError("/format_version",
                                 absl::StrCat("unsupported version ", version));
  }
  PolicyFile file;
  DCEA_ASSIGN_OR_RETURN(const Json* policy, json_util::Field(j, "policy", ""));
  DCEA_ASSIGN_OR_RETURN(file.policy, PolicyFromJson(*policy, "/policy"));
  DCEA_ASSIGN_OR_RETURN(const Json* challenges, json_util::Field(j, "challenges", ""));
  if (!challenges->is_array()) {
    return json_util::FieldError("/challenges", "expected an array");
  }
  for (size_t i = 0; i < challenges->size(); ++i) {
    DCEA_ASSIGN_OR_RETURN(Challenge c,
                          ChallengeFromJson((*challenges)[i], Join("/challenges", i)));
    file.challenges.push_back(c);
  }
  DCEA_ASSIGN_OR_RETURN(file.registry, RegistrationsFromJson(j, "registry"));
  DCEA_ASSIGN_OR_RETURN(file.refused_registrations,
                        RegistrationsFromJson(j, "refused_registrations"));
  return file;
}

std::optional<Challenge> SelectChallenge(const std::vector<Challenge>& challenges,
                                         const EvidenceBundle& bundle) {
  if (challenges.empty()) return std::nullopt;
  for (const Challenge& c : challenges) {
    if (c.td_nonce == bundle.nonces.td_nonce) return c;
  }
  return *std::max_element(challenges.begin(), challenges.end(),
                           [](const Challenge& a, const Challenge& b) {
                             return a.issued_at_ms < b.issued_at_ms;
                           });
}

}  // namespace dcea::verifier
