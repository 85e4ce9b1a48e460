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

#include "dcea/adversary.h"

#include <string>

#include "dcea/batch.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"
#include "dcea/verifier.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dcea::adversary {
namespace {

using testing::ValueOrDie;
using verifier::Attack;
using verifier::CheckId;

batch::CaseOutcome RunCatalog(const std::string& scenario, Deployment d, uint64_t seed) {
  return ValueOrDie(batch::RunCase({scenario, d, seed, std::nullopt, {}}));
}

TEST(HonestTest, S2BundleAccepted) {
  for (uint64_t seed : {1, 2, 3}) {
    batch::CaseOutcome o = RunCatalog("honest-s2", Deployment::kS2, seed);
    EXPECT_TRUE(o.verdict.accepted) << seed;
    EXPECT_TRUE(o.expectation_met);
  }
}

TEST(HonestTest, S1BundleAccepted) {
  for (uint64_t seed : {1, 2, 3}) {
    batch::CaseOutcome o = RunCatalog("honest-s1", Deployment::kS1, seed);
    EXPECT_TRUE(o.verdict.accepted) << seed;
    EXPECT_EQ(o.bundle.ek_cert_chain.front().claims.at("tpm_kind"),
              tpm::TpmKindName(tpm::TpmKind::kVirtual));
  }
}

TEST(HonestTest, TimingWithinDefaultThreshold) {
  for (Deployment d : {Deployment::kS1, Deployment::kS2}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      WorldConfig cfg = RandomWorldConfig(seed, d);
      batch::CaseOutcome o =
          RunCatalog(d == Deployment::kS1 ? "honest-s1" : "honest-s2", d, seed);
      const tpm::TpmKind kind =
          d == Deployment::kS1 ? tpm::TpmKind::kVirtual : tpm::TpmKind::kDiscrete;
      const int64_t threshold =
          verifier::HonestQuoteLatencyMs(kind) + 2 * cfg.verifier_delay_ms;
      EXPECT_LE(verifier::ObservedRttMs(o.bundle.timing), threshold);
      EXPECT_EQ(o.policy_file.policy.rtt_threshold_ms, threshold);
    }
  }
}

TEST(AttackTest, MixMatchFailsBindingOrConsistency) {
  batch::CaseOutcome o = RunCatalog("a2-mixmatch", Deployment::kS2, 4);
  EXPECT_FALSE(o.verdict.accepted);
  EXPECT_TRUE(!o.verdict.Passed(CheckId::kC3) || !o.verdict.Passed(CheckId::kC5));
  EXPECT_TRUE(o.verdict.attack_flags.count(Attack::kA2));
}

TEST(AttackTest, VtpmBinaryFailsLaunchPcrsViaPolicyViolation) {
  batch::CaseOutcome o = RunCatalog("a6-vtpm-binary", Deployment::kS2, 4);
  EXPECT_EQ(o.bundle.scenario_meta.at("sealed_ak_quote"), "PolicyViolation");
  EXPECT_FALSE(o.verdict.Passed(CheckId::kC6));
  EXPECT_TRUE(o.verdict.attack_flags.count(Attack::kA6));
}

TEST(AttackTest, ReplayFailsFreshness) {
  batch::CaseOutcome o = RunCatalog("a4-replay", Deployment::kS2, 4);
  EXPECT_EQ(o.verdict.FailedChecks(), std::set<CheckId>{CheckId::kC4});
  EXPECT_TRUE(o.verdict.attack_flags.count(Attack::kA4));
}

TEST(AttackTest, EveryCatalogAttackFailsExactlyItsTargetedChecks) {
  for (const CatalogEntry& e : Catalog()) {
    if (e.honest) continue;
    for (Deployment d : {Deployment::kS1, Deployment::kS2}) {
      if (!e.RelevantIn(d)) continue;
      batch::CaseOutcome o = RunCatalog(e.name, d, 9);
      EXPECT_EQ(o.verdict.FailedChecks(), e.targeted_checks)
          << e.name << " " << DeploymentName(d);
      EXPECT_TRUE(o.expectation_met) << e.name;
    }
  }
}

TEST(AttackTest, UnknownScenarioOrVariant) {
  World w = ValueOrDie(BuildWorld(RandomWorldConfig(1, Deployment::kS2)));
  AttackScenario bad{ScenarioId::kA1, {{"variant", "nope"}}};
  EXPECT_EQ(GetErrorCode(RunAttack(w, bad, {}).status()), ErrorCode::kUnknownScenario);
  EXPECT_EQ(GetErrorCode(FindCatalogEntry("a9").status()), ErrorCode::kUnknownScenario);
  EXPECT_EQ(ValueOrDie(FindCatalogEntry("A2"))->name, "a2-frankenstein");
  EXPECT_EQ(ValueOrDie(FindCatalogEntry("a3_drop_pcr"))->name, "a3-drop-pcr");
}

TEST(CatalogTest, RelevanceFollowsDeploymentMatrix) {
  for (const CatalogEntry& e : Catalog()) {
    if (e.honest) continue;
    const bool both = e.attack == Attack::kA1 || e.attack == Attack::kA3;
    EXPECT_EQ(e.relevant_s1, both) << e.name;
    EXPECT_TRUE(e.relevant_s2) << e.name;
    EXPECT_FALSE(e.targeted_checks.empty()) << e.name;
  }
}

TEST(NetworkTest, DeliveryStampsLinkDelay) {
  WorldConfig cfg = RandomWorldConfig(1, Deployment::kS2);
  cfg.verifier_delay_ms = 40;
  World w = ValueOrDie(BuildWorld(cfg));
  Message m = Deliver(w, VerifierLink(kTenantHost), {"challenge", ToBytes("x"), 100, 0});
  EXPECT_EQ(m.delivered_at_ms, 140);
  EXPECT_EQ(w.links[VerifierLink(kTenantHost)].replay_buffer.back(), m);
}

TEST(NetworkTest, TwoHopRelayAddsBothDelays) {
  World w = ValueOrDie(BuildWorld(RandomWorldConfig(1, Deployment::kS2)));
  w.links[{"host-a", "relay"}].one_way_delay_ms = 40;
  w.links[{"relay", "host-b"}].one_way_delay_ms = 40;
  Message first = Deliver(w, {"host-a", "relay"}, {"quote", {}, 10, 0});
  Message second =
      Deliver(w, {"relay", "host-b"}, {"quote", {}, first.delivered_at_ms, 0});
  EXPECT_EQ(second.delivered_at_ms - 10, 2 * 40);
}

TEST(NetworkTest, IdentityTamperHookPreservesAcceptance) {
  World w = ValueOrDie(BuildWorld(RandomWorldConfig(2, Deployment::kS2)));
  int calls = 0;
  for (const LinkId& link : {ReturnLink(kTenantHost), TpmReturnLink(kTenantHost, kTenantHost)}) {
    w.links[link].tamper_hook = [&calls](Message m) {
      ++calls;
      return m;
    };
  }
  auto v = MakeVerifier(w);
  verifier::Challenge c = v->IssueChallenge();
  evidence::EvidenceBundle b = ValueOrDie(RunHonest(w, Deployment::kS2, c));
  EXPECT_TRUE(v->VerifyBundle(b, DefaultPolicy(w), c).accepted);
  EXPECT_GT(calls, 0);
}

TEST(WorldTest, ClockOnlyMovesForward) {
  World w = ValueOrDie(BuildWorld(RandomWorldConfig(3, Deployment::kS1)));
  const int64_t t = w.clock_ms;
  DCEA_EXPECT_OK(AdvanceClock(w, 25));
  EXPECT_EQ(w.clock_ms, t + 25);
  EXPECT_FALSE(AdvanceClock(w, -1).ok());
}

TEST(WorldTest, EqualConfigsGiveIdenticalEvidence) {
  batch::CaseOutcome a = RunCatalog("a2-frankenstein", Deployment::kS2, 77);
  batch::CaseOutcome b = RunCatalog("a2-frankenstein", Deployment::kS2, 77);
  EXPECT_EQ(evidence::SerializeBundle(a.bundle), evidence::SerializeBundle(b.bundle));
  EXPECT_EQ(a.verdict, b.verdict);
}

TEST(WorldTest, RandomConfigRanges) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    WorldConfig c = RandomWorldConfig(seed, Deployment::kS2);
    EXPECT_GE(c.verifier_delay_ms, 5);
    EXPECT_LE(c.verifier_delay_ms, 60);
    EXPECT_GE(c.relay_delay_ms, 25);
    EXPECT_LE(c.relay_delay_ms, 200);
    EXPECT_GE(c.workload.size(), 3u);
    EXPECT_LE(c.workload.size(), 8u);
  }
}

TEST(ScenarioFileTest, ParsesAndAppliesOverrides) {
  ScenarioFile f = ValueOrDie(ParseScenarioFile(R"({
    "format_version": 1, "scenario": "a2-frankenstein", "deployment": "S2",
    "seed": 5, "world": {"relay_delay_ms": 150, "verifier_delay_ms": 10}})"));
  EXPECT_EQ(f.scenario, "a2-frankenstein");
  EXPECT_EQ(f.seed, 5u);
  WorldConfig c = ValueOrDie(ResolveWorldConfig(f, 5, Deployment::kS2));
  EXPECT_EQ(c.relay_delay_ms, 150);
  EXPECT_EQ(c.verifier_delay_ms, 10);
  EXPECT_EQ(c.stack, RandomWorldConfig(5, Deployment::kS2).stack);
}

TEST(ScenarioFileTest, UnknownFieldsAndBadValuesRejected) {
  EXPECT_EQ(GetErrorCode(ParseScenarioFile(R"({"scenario": "a1", "colour": 1})").status()),
            ErrorCode::kParseError);
  EXPECT_EQ(GetErrorCode(ParseScenarioFile("{\"scenario\": ").status()),
            ErrorCode::kParseError);
  ScenarioFile f = ValueOrDie(ParseScenarioFile(
      R"({"scenario": "a1", "world": {"relay_delay_ms": -5}})"));
  EXPECT_FALSE(ResolveWorldConfig(f, 1, Deployment::kS2).ok());
  f = ValueOrDie(ParseScenarioFile(R"({"scenario": "a1", "world": {"warp": 1}})"));
  EXPECT_FALSE(ResolveWorldConfig(f, 1, Deployment::kS2).ok());
}

}  // namespace
}  // namespace dcea::adversary
