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

#include "dcea/evidence.h"

#include <fstream>
#include <iterator>
#include <string>

#include "bundle_gen.h"
#include "dcea/adversary.h"
#include "dcea/batch.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"
#include "dcea/verifier.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dcea::evidence {
namespace {

using adversary::Deployment;
using testing::ValueOrDie;

struct HonestRun {
  adversary::World world;
  EvidenceBundle bundle;
  verifier::Verdict verdict;
};

HonestRun RunHonestS2(uint64_t seed) {
  HonestRun run{ValueOrDie(adversary::BuildWorld(
                    adversary::RandomWorldConfig(seed, Deployment::kS2))),
                {},
                {}};
  auto v = adversary::MakeVerifier(run.world);
  verifier::Challenge c = v->IssueChallenge();
  run.bundle = ValueOrDie(adversary::RunHonest(run.world, Deployment::kS2, c));
  run.verdict = v->VerifyBundle(run.bundle, adversary::DefaultPolicy(run.world), c);
  return run;
}

BundleParts PartsOf(const EvidenceBundle& b) {
  BundleParts p;
  p.td_report = b.td_report;
  p.tpm_quote = b.tpm_quote;
  p.ek_cert_chain = b.ek_cert_chain;
  p.ak_cert = b.ak_cert;
  p.event_log = b.event_log;
  p.nonces = b.nonces;
  p.timing = b.timing;
  p.scenario_meta = b.scenario_meta;
  return p;
}

TEST(BundleTest, HonestS2BundlePassesVerifier) {
  HonestRun run = RunHonestS2(11);
  EXPECT_TRUE(run.verdict.accepted);
  EXPECT_TRUE(run.verdict.FailedChecks().empty());
}

TEST(BundleTest, BuildFromPartsAndMissingQuote) {
  HonestRun run = RunHonestS2(12);
  EXPECT_EQ(ValueOrDie(BuildBundle(PartsOf(run.bundle))), run.bundle);

  BundleParts parts = PartsOf(run.bundle);
  parts.tpm_quote.reset();
  absl::StatusOr<EvidenceBundle> b = BuildBundle(parts);
  ASSERT_FALSE(b.ok());
  EXPECT_EQ(GetErrorCode(b.status()), ErrorCode::kIncompleteBundle);
  EXPECT_NE(b.status().message().find("tpm_quote"), absl::string_view::npos);
}

TEST(BundleTest, MalformedEntryRejected) {
  HonestRun run = RunHonestS2(13);
  BundleParts parts = PartsOf(run.bundle);
  EventLogEntry bad;
  bad.scope = Scope::kGuest;
  bad.td_register = TdRegister::kRtmr2;
  bad.pcr_index = 3;
  parts.event_log.push_back(bad);
  EXPECT_EQ(GetErrorCode(BuildBundle(parts).status()), ErrorCode::kInvalidEntry);
}

TEST(CodecTest, HonestBundleRoundTrips) {
  HonestRun run = RunHonestS2(14);
  const std::string text = SerializeBundle(run.bundle);
  EvidenceBundle back = ValueOrDie(DeserializeBundle(text));
  EXPECT_EQ(back, run.bundle);
  EXPECT_EQ(SerializeBundle(back), text);
}

TEST(CodecTest, RandomBundlesRoundTrip) {
  testing::BundleGenerator gen(2024);
  for (int i = 0; i < 100; ++i) {
    EvidenceBundle b = gen.Next();
    const std::string text = SerializeBundle(b);
    absl::StatusOr<EvidenceBundle> back = DeserializeBundle(text);
    ASSERT_TRUE(back.ok()) << i << ": " << back.status();
    EXPECT_EQ(*back, b) << i;
  }
}

TEST(CodecTest, TopLevelKeysAreAlphabetical) {
  HonestRun run = RunHonestS2(15);
  const std::string text = SerializeBundle(run.bundle);
  const char* keys[] = {"\"ak_cert\"", "\"ek_cert_chain\"", "\"event_log\"",
                        "\"format_version\"", "\"nonces\"", "\"scenario_meta\"",
                        "\"td_report\"", "\"timing\"", "\"tpm_quote\""};
  size_t last = 0;
  for (const char* key : keys) {
    size_t pos = text.find(std::string("\n  ") + key);
    ASSERT_NE(pos, std::string::npos) << key;
    EXPECT_GT(pos, last) << key;
    last = pos;
  }
}

TEST(CodecTest, TruncatedInputIsParseError) {
  HonestRun run = RunHonestS2(16);
  const std::string text = SerializeBundle(run.bundle);
  for (size_t cut : {size_t{0}, size_t{1}, text.size() / 3, text.size() - 3}) {
    absl::StatusOr<EvidenceBundle> b = DeserializeBundle(text.substr(0, cut));
    ASSERT_FALSE(b.ok()) << cut;
    EXPECT_EQ(GetErrorCode(b.status()), ErrorCode::kParseError) << cut;
  }
}

TEST(CodecTest, FieldErrorsNameTheirPath) {
  HonestRun run = RunHonestS2(17);
  json_util::Json j = BundleToJson(run.bundle);
  j["tpm_quote"]["nonce"] = "zz";
  absl::StatusOr<EvidenceBundle> b = BundleFromJson(j);
  ASSERT_FALSE(b.ok());
  EXPECT_NE(b.status().message().find("/tpm_quote/nonce"), absl::string_view::npos)
      << b.status();

  j = BundleToJson(run.bundle);
  j["format_version"] = 2;
  EXPECT_EQ(GetErrorCode(BundleFromJson(j).status()), ErrorCode::kParseError);
}

TEST(CodecTest, GoldenFixtureParsesToRegeneratedBundle) {
  std::ifstream in(testing::SourcePath("fixtures/honest-s2.dcea.json"), std::ios::binary);
  ASSERT_TRUE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EvidenceBundle golden = ValueOrDie(DeserializeBundle(text));
  batch::CaseOutcome fresh =
      ValueOrDie(batch::RunCase({"honest-s2", Deployment::kS2, 7, std::nullopt, {}}));
  EXPECT_EQ(golden, fresh.bundle);
  EXPECT_EQ(SerializeBundle(fresh.bundle), text);
}

TEST(ReplayTest, HostReplayEqualsQuotedPcrs) {
  HonestRun run = RunHonestS2(21);
  tpm::TpmState* tpm = ValueOrDie(adversary::QuotingTpm(run.world, adversary::kTenantHost));
  ReplayResult host = ValueOrDie(ReplayEventLog(tpm->log, ReplayScope::kBoth));
  EXPECT_EQ(host.pcrs, tpm->pcrs);
  ReplayResult bundle = ValueOrDie(ReplayEventLog(run.bundle.event_log, ReplayScope::kBoth));
  const tpm::TpmQuote& q = run.bundle.tpm_quote;
  for (size_t i = 0; i < q.selection.size(); ++i) {
    const int p = q.selection[i];
    if (IsMappedPcr(p)) EXPECT_EQ(bundle.pcrs[p], q.pcr_values[i]) << "PCR " << p;
  }
}

TEST(ReplayTest, EmptyLogReplaysToZero) {
  ReplayResult r = ValueOrDie(ReplayEventLog({}, ReplayScope::kBoth));
  for (const Digest& d : r.pcrs) EXPECT_TRUE(d.IsZero());
  for (const Digest& d : r.rtmrs) EXPECT_TRUE(d.IsZero());
  EXPECT_TRUE(r.mrtd.IsZero());
  EXPECT_EQ(r.mrtd_entries, 0);
}

TEST(ReplayTest, DeletingAnEntryChangesReplay) {
  HonestRun run = RunHonestS2(22);
  const auto& log = run.bundle.event_log;
  ReplayResult full = ValueOrDie(ReplayEventLog(log, ReplayScope::kBoth));
  for (size_t i = 0; i < log.size(); ++i) {
    std::vector<EventLogEntry> cut = log;
    cut.erase(cut.begin() + static_cast<std::ptrdiff_t>(i));
    ReplayResult r = ValueOrDie(ReplayEventLog(cut, ReplayScope::kBoth));
    EXPECT_TRUE(r.pcrs != full.pcrs || r.rtmrs != full.rtmrs || r.mrtd != full.mrtd ||
                r.mrtd_entries != full.mrtd_entries)
        << i;
  }
}

TEST(ConsistencyTest, HonestWorldMatchesAllFourRows) {
  HonestRun run = RunHonestS2(31);
  ConsistencyResult c = CheckRtmrPcrConsistency(run.bundle.td_report, run.bundle.tpm_quote,
                                                run.bundle.event_log);
  ASSERT_EQ(c.rows.size(), 4u);
  EXPECT_TRUE(c.AllMatched()) << c.error;
}

TEST(ConsistencyTest, KernelEventMissingFromRtmrOnly) {
  HonestRun run = RunHonestS2(32);
  const EvidenceBundle& b = run.bundle;
  // The TD's RTMR1 as if the guest kernel event had never been measured there.
  std::vector<EventLogEntry> guest_without_kernel;
  bool dropped = false;
  for (const EventLogEntry& e : b.event_log) {
    if (!dropped && e.td_register == TdRegister::kRtmr1) {
      dropped = true;
      continue;
    }
    guest_without_kernel.push_back(e);
  }
  ASSERT_TRUE(dropped);
  ReplayResult td_view = ValueOrDie(ReplayEventLog(guest_without_kernel, ReplayScope::kGuest));
  TdMeasurements td{b.td_report.mrtd, b.td_report.rtmrs};
  td.rtmrs[1] = td_view.rtmrs[1];
  ConsistencyResult c = CheckConsistency(td, b.tpm_quote, b.event_log);
  EXPECT_EQ(c.MismatchedRows(), std::vector<std::string>{"RTMR1"});
}

TEST(ConsistencyTest, TdAndQuoteFromDifferentPlatformsMismatch) {
  HonestRun x = RunHonestS2(33);
  HonestRun y = RunHonestS2(34);
  ConsistencyResult c =
      CheckRtmrPcrConsistency(x.bundle.td_report, y.bundle.tpm_quote, y.bundle.event_log);
  EXPECT_FALSE(c.MismatchedRows().empty());
}

TEST(ConsistencyTest, BundleLogKeepsOnlyMappedPcrs) {
  HonestRun run = RunHonestS2(35);
  for (const EventLogEntry& e : run.bundle.event_log) {
    if (e.pcr_index.has_value()) EXPECT_TRUE(IsMappedPcr(*e.pcr_index));
  }
}

}  // namespace
}  // namespace dcea::evidence
