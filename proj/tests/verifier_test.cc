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

#include <set>
#include <string>

#include "dcea/adversary.h"
#include "dcea/batch.h"
#include "dcea/bundle_codec.h"
#include "dcea/registry.h"
#include "dcea/status.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dcea::verifier {
namespace {

using adversary::Deployment;
using testing::ValueOrDie;

TEST(ChallengeTest, TenThousandChallengesAreDistinct) {
  int64_t now = 0;
  Verifier v(42, [&now] { return now++ / 3; });
  std::set<std::pair<tpm::Nonce, tpm::Nonce>> seen;
  std::set<tpm::Nonce> td_nonces;
  int64_t last = -1;
  for (int i = 0; i < 10'000; ++i) {
    Challenge c = v.IssueChallenge();
    EXPECT_EQ(c.td_nonce.size(), 32u);
    EXPECT_EQ(c.tpm_nonce.size(), 32u);
    EXPECT_GE(c.issued_at_ms, last);
    last = c.issued_at_ms;
    seen.insert({c.td_nonce, c.tpm_nonce});
    td_nonces.insert(c.td_nonce);
  }
  EXPECT_EQ(seen.size(), 10'000u);
  EXPECT_EQ(td_nonces.size(), 10'000u);
}

TEST(ChallengeTest, IssuedAtNeverGoesBackwards) {
  int64_t now = 100;
  Verifier v(1, [&now] { return now; });
  Challenge a = v.IssueChallenge();
  now = 50;
  Challenge b = v.IssueChallenge();
  EXPECT_GE(b.issued_at_ms, a.issued_at_ms);
  EXPECT_EQ(v.OutstandingChallenges().size(), 2u);
}

TEST(RegistryTest, RegisterThenLookup) {
  AkRegistry r;
  Bytes ak = ToBytes("ak-public");
  RegistryEntry e{"provider-ca", 10, "host-a"};
  EXPECT_FALSE(r.Register(ak, e).duplicate());
  EXPECT_EQ(r.Lookup(ak), e);
  EXPECT_FALSE(r.Lookup(ToBytes("unknown")).has_value());
  EXPECT_FALSE(r.Register(ak, e).duplicate());
  EXPECT_EQ(r.size(), 1u);
  EXPECT_FALSE(r.HasConflict(ak));
}

TEST(RegistryTest, SecondPlatformIsDuplicate) {
  AkRegistry r;
  Bytes ak = ToBytes("ak-public");
  RegistryEntry first{"provider-ca", 10, "host-a"};
  RegistryEntry second{"provider-ca", 20, "host-z"};
  r.Register(ak, first);
  RegisterResult res = r.Register(ak, second);
  EXPECT_TRUE(res.duplicate());
  EXPECT_EQ(res.existing, first);
  EXPECT_EQ(r.Lookup(ak), first);
  EXPECT_TRUE(r.HasConflict(ak));
  ASSERT_EQ(r.Conflicts().size(), 1u);
  EXPECT_EQ(r.Conflicts()[0].attempted, second);
}

TEST(GoalTest, AttackGoalSets) {
  EXPECT_EQ(GoalsAffectedBy(Attack::kA1), (std::set<Goal>{Goal::kAB, Goal::kMC}));
  EXPECT_EQ(GoalsAffectedBy(Attack::kA2),
            (std::set<Goal>{Goal::kAB, Goal::kF, Goal::kCV, Goal::kPO}));
  EXPECT_EQ(GoalsAffectedBy(Attack::kA3), (std::set<Goal>{Goal::kAB, Goal::kMC}));
  EXPECT_EQ(GoalsAffectedBy(Attack::kA4), (std::set<Goal>{Goal::kF, Goal::kCV}));
  EXPECT_EQ(GoalsAffectedBy(Attack::kA5), (std::set<Goal>{Goal::kAB, Goal::kPO}));
  EXPECT_EQ(GoalsAffectedBy(Attack::kA6), (std::set<Goal>{Goal::kAB, Goal::kMC}));
}

TEST(GoalTest, AssembleVerdictFoldsFlags) {
  std::vector<CheckResult> checks;
  for (CheckId id : kAllChecks) {
    checks.push_back({id, std::string(CheckTitle(id)), true, false, "ok", {}});
  }
  Verdict ok = AssembleVerdict(checks);
  EXPECT_TRUE(ok.accepted);
  for (Goal g : kAllGoals) EXPECT_TRUE(ok.goals.at(g));

  checks[6].passed = false;
  checks[6].flags = {Attack::kA2};
  Verdict bad = AssembleVerdict(checks);
  EXPECT_FALSE(bad.accepted);
  EXPECT_EQ(bad.attack_flags, std::set<Attack>{Attack::kA2});
  EXPECT_EQ(bad.FailedChecks(), std::set<CheckId>{CheckId::kC7});
  EXPECT_FALSE(bad.goals.at(Goal::kF));
  EXPECT_TRUE(bad.goals.at(Goal::kMC));
}

TEST(ThresholdTest, HonestLatencyPlusRoundTrip) {
  EXPECT_EQ(DefaultRttThresholdMs(tpm::TpmKind::kVirtual, 20), 340);
  EXPECT_EQ(DefaultRttThresholdMs(tpm::TpmKind::kDiscrete, 36), 622);
  EXPECT_EQ(HonestQuoteLatencyMs(tpm::TpmKind::kDiscrete), 550);
}

TEST(PolicyTest, ValidateRejectsNonPositiveThreshold) {
  VerifierPolicy p;
  EXPECT_EQ(GetErrorCode(p.Validate()), ErrorCode::kInvalidPolicy);
  p.rtt_threshold_ms = 10;
  DCEA_EXPECT_OK(p.Validate());
}

class HonestS2Test : public ::testing::Test {
 protected:
  void SetUp() override {
    world_ = std::make_unique<adversary::World>(ValueOrDie(
        adversary::BuildWorld(adversary::RandomWorldConfig(5, Deployment::kS2))));
    verifier_ = adversary::MakeVerifier(*world_);
    policy_ = adversary::DefaultPolicy(*world_);
  }

  evidence::EvidenceBundle Honest(const Challenge& c) {
    return ValueOrDie(adversary::RunHonest(*world_, Deployment::kS2, c));
  }

  std::unique_ptr<adversary::World> world_;
  std::unique_ptr<Verifier> verifier_;
  VerifierPolicy policy_;
};

TEST_F(HonestS2Test, AcceptedWithEveryCheckPassing) {
  Challenge c = verifier_->IssueChallenge();
  Verdict v = verifier_->VerifyBundle(Honest(c), policy_, c);
  EXPECT_TRUE(v.accepted);
  ASSERT_EQ(v.checks.size(), 8u);
  for (const CheckResult& r : v.checks) {
    EXPECT_TRUE(r.passed) << CheckIdName(r.id) << ": " << r.detail;
    EXPECT_FALSE(r.disabled);
    EXPECT_EQ(r.name, CheckTitle(r.id));
  }
  EXPECT_TRUE(v.attack_flags.empty());
}

TEST_F(HonestS2Test, ReverifyingSameBundleIsDeterministic) {
  Challenge c = verifier_->IssueChallenge();
  evidence::EvidenceBundle b = Honest(c);
  Verdict first = verifier_->VerifyBundle(b, policy_, c);
  Verdict second = verifier_->VerifyBundle(b, policy_, c);
  EXPECT_EQ(first, second);
  EXPECT_EQ(json_util::Dump(VerdictToJson(first)), json_util::Dump(VerdictToJson(second)));
}

TEST_F(HonestS2Test, ReplayedBundleFailsFreshness) {
  Challenge c1 = verifier_->IssueChallenge();
  evidence::EvidenceBundle old = Honest(c1);
  ASSERT_TRUE(verifier_->VerifyBundle(old, policy_, c1).accepted);

  Challenge c2 = verifier_->IssueChallenge();
  Verdict v = verifier_->VerifyBundle(old, policy_, c2);
  EXPECT_FALSE(v.accepted);
  EXPECT_FALSE(v.Passed(CheckId::kC4));
  EXPECT_TRUE(v.attack_flags.count(Attack::kA1));
  EXPECT_TRUE(v.attack_flags.count(Attack::kA4));
}

TEST_F(HonestS2Test, SecondBundleForConsumedChallengeFailsFreshness) {
  Challenge c = verifier_->IssueChallenge();
  ASSERT_TRUE(verifier_->VerifyBundle(Honest(c), policy_, c).accepted);
  evidence::EvidenceBundle again = Honest(c);
  again.scenario_meta["resent"] = "1";
  Verdict v = verifier_->VerifyBundle(again, policy_, c);
  EXPECT_FALSE(v.Passed(CheckId::kC4));
}

TEST_F(HonestS2Test, UnknownChallengeFailsFreshness) {
  Challenge forged;
  forged.td_nonce.fill(7);
  forged.tpm_nonce.fill(8);
  Verdict v = verifier_->VerifyBundle(Honest(forged), policy_, forged);
  EXPECT_FALSE(v.Passed(CheckId::kC4));
}

TEST_F(HonestS2Test, FrankensteinFailsTimingWithA2) {
  Challenge c = verifier_->IssueChallenge();
  evidence::EvidenceBundle b = ValueOrDie(adversary::RunAttack(
      *world_, {adversary::ScenarioId::kA2Frankenstein, {}}, c));
  Verdict v = verifier_->VerifyBundle(b, policy_, c);
  EXPECT_FALSE(v.accepted);
  EXPECT_TRUE(!v.Passed(CheckId::kC3) || !v.Passed(CheckId::kC7));
  EXPECT_TRUE(v.attack_flags.count(Attack::kA2));
}

TEST_F(HonestS2Test, ChecksRunWithoutShortCircuit) {
  Challenge c = verifier_->IssueChallenge();
  evidence::EvidenceBundle b = Honest(c);
  b.tpm_quote.signature.value[0] ^= 0xFF;
  b.td_report.qe_signature.value[0] ^= 0xFF;
  Verdict v = verifier_->VerifyBundle(b, policy_, c);
  EXPECT_FALSE(v.Passed(CheckId::kC1));
  EXPECT_FALSE(v.Passed(CheckId::kC2));
  EXPECT_EQ(v.checks.size(), 8u);
}

TEST_F(HonestS2Test, DisabledCheckIsReportedAsDisabled) {
  Challenge c = verifier_->IssueChallenge();
  evidence::EvidenceBundle b = Honest(c);
  b.timing.quote_received += 10'000;
  VerifierPolicy p = policy_;
  EXPECT_FALSE(verifier_->VerifyBundle(b, p, c).Passed(CheckId::kC7));
  p.disabled_checks = {CheckId::kC7};
  Verdict v = verifier_->VerifyBundle(b, p, c);
  EXPECT_TRUE(v.check(CheckId::kC7).disabled);
  EXPECT_TRUE(v.accepted);
}

TEST_F(HonestS2Test, PolicyFileRoundTrips) {
  Challenge c = verifier_->IssueChallenge();
  PolicyFile f;
  f.policy = policy_;
  f.challenges = {c};
  CaptureRegistry(verifier_->registry(), f);
  ASSERT_FALSE(f.registry.empty());
  const std::string text = SerializePolicyFile(f);
  PolicyFile back = ValueOrDie(DeserializePolicyFile(text));
  EXPECT_EQ(back.policy, f.policy);
  EXPECT_EQ(back.challenges, f.challenges);
  EXPECT_EQ(back.registry, f.registry);
  EXPECT_EQ(SerializePolicyFile(back), text);

  AkRegistry restored;
  RestoreRegistry(back, restored);
  EXPECT_EQ(restored.Snapshot(), verifier_->registry().Snapshot());
}

TEST(PolicyJsonTest, UnknownCheckRejectedWithPath) {
  json_util::Json j = PolicyToJson(VerifierPolicy{});
  j["disabled_checks"] = {"C9"};
  absl::StatusOr<VerifierPolicy> p = PolicyFromJson(j, "/policy");
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.status().message().find("/policy/disabled_checks"), absl::string_view::npos)
      << p.status();
}

TEST(SelectChallengeTest, MatchesTdNonceElseLatest) {
  Challenge a, b;
  a.td_nonce.fill(1);
  a.issued_at_ms = 5;
  b.td_nonce.fill(2);
  b.issued_at_ms = 9;
  evidence::EvidenceBundle bundle;
  bundle.nonces.td_nonce = a.td_nonce;
  EXPECT_EQ(SelectChallenge({a, b}, bundle), a);
  bundle.nonces.td_nonce.fill(3);
  EXPECT_EQ(SelectChallenge({a, b}, bundle), b);
  EXPECT_FALSE(SelectChallenge({}, bundle).has_value());
}

}  // namespace
}  // namespace dcea::verifier
