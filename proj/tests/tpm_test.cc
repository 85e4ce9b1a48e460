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

#include <vector>

#include "dcea/evidence.h"
#include "dcea/platform.h"
#include "dcea/status.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dcea::tpm {
namespace {

using testing::ValueOrDie;

class TpmTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ca_ = ValueOrDie(KeyGen("provider-ca", KeyKind::kCa));
    root_ = ValueOrDie(SelfSignedRoot(ca_, {{"role", "root"}}));
    tpm_ = ValueOrDie(TpmInit(ToBytes("ek-1"), ca_, {{"platform_id", "p1"}},
                              TpmKind::kDiscrete));
  }

  platform::HostStack Stack(std::string_view vtpm = "vtpm") {
    platform::HostStack s;
    s.firmware_image = ToBytes("fw");
    s.acm_image = ToBytes("acm");
    s.seamldr_image = ToBytes("seamldr");
    s.kernel_image = ToBytes("kernel");
    s.hypervisor_image = ToBytes("hypervisor");
    s.vtpm_binary = ToBytes(vtpm);
    return s;
  }

  KeyPair ca_;
  Certificate root_;
  TpmState tpm_;
};

TEST_F(TpmTest, EkChainVerifiesUnderProviderRoot) {
  std::vector<Certificate> roots = {root_};
  EXPECT_TRUE(ValueOrDie(VerifyChain({tpm_.ek_cert, root_}, roots)).ok());
  EXPECT_EQ(tpm_.ek_cert.claims.at("platform_id"), "p1");
  EXPECT_EQ(tpm_.ek_cert.claims.at("tpm_kind"), TpmKindName(TpmKind::kDiscrete));
}

TEST_F(TpmTest, DistinctSeedsGiveDistinctEks) {
  TpmState other = ValueOrDie(TpmInit(ToBytes("ek-2"), ca_, {}, TpmKind::kDiscrete));
  EXPECT_NE(tpm_.ek.public_key, other.ek.public_key);
}

TEST_F(TpmTest, FreshTpmReadsAllZero) {
  std::vector<int> all;
  for (int i = 0; i < kNumPcrs; ++i) all.push_back(i);
  auto pcrs = ValueOrDie(ReadPcrs(tpm_, all));
  ASSERT_EQ(pcrs.size(), 24u);
  for (const auto& [i, v] : pcrs) EXPECT_TRUE(v.IsZero()) << i;
  EXPECT_TRUE(ValueOrDie(ReadPcrs(tpm_, std::vector<int>{})).empty());
}

TEST_F(TpmTest, OutOfRangeIndexRejected) {
  absl::StatusOr<TpmState> s = PcrExtend(tpm_, 24, ToBytes("x"), "bad");
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(GetErrorCode(s.status()), ErrorCode::kInvalidPcrIndex);
  EXPECT_FALSE(ReadPcrs(tpm_, std::vector<int>{-1}).ok());
}

TEST_F(TpmTest, ExtendMatchesDigestOracle) {
  TpmState t = ValueOrDie(PcrExtend(tpm_, 17, ToBytes("acm"), "acm"));
  EXPECT_EQ(t.pcrs[17], Extend(Digest::Zero(), ComputeDigest("acm")));
  ASSERT_EQ(t.log.size(), 1u);
  EXPECT_EQ(t.log[0].pcr_index, 17);
  EXPECT_EQ(t.log[0].event_digest, ComputeDigest("acm"));
}

TEST_F(TpmTest, ExtendOrderMatters) {
  TpmState ab = ValueOrDie(PcrExtend(ValueOrDie(PcrExtend(tpm_, 18, ToBytes("a"), "")), 18,
                                     ToBytes("b"), ""));
  TpmState ba = ValueOrDie(PcrExtend(ValueOrDie(PcrExtend(tpm_, 18, ToBytes("b"), "")), 18,
                                     ToBytes("a"), ""));
  EXPECT_NE(ab.pcrs[18], ba.pcrs[18]);
}

TEST_F(TpmTest, LogReplayReproducesBank) {
  TpmState t = tpm_;
  const int indices[] = {0, 17, 2, 17, 8};
  for (int i = 0; i < 5; ++i) {
    t = ValueOrDie(PcrExtend(std::move(t), indices[i],
                             ToBytes(std::string("ev") + char('0' + i)), "mixed"));
  }
  auto replay = ValueOrDie(evidence::ReplayEventLog(t.log, evidence::ReplayScope::kHost));
  EXPECT_EQ(replay.pcrs, t.pcrs);
}

TEST_F(TpmTest, SealAfterLaunchHoldsLaunchDigests) {
  platform::Platform p = ValueOrDie(platform::MeasuredLaunch(Stack(), tpm_));
  AkResult ak = ValueOrDie(CreateSealedAk(p.tpm, ToBytes("ak"), {17, 18}, &ca_));
  SealedAk blob = ValueOrDie(ExportSealedAk(ak.tpm, ak.handle));
  EXPECT_EQ(blob.policy, platform::ExpectedLaunchPcrs(Stack()));
  ASSERT_TRUE(blob.ak_cert.has_value());
  std::vector<Certificate> roots = {root_};
  EXPECT_TRUE(ValueOrDie(VerifyChain({*blob.ak_cert, root_}, roots)).ok());
  EXPECT_EQ(blob.ak_cert->claims.at("role"), "AK");
  EXPECT_EQ(blob.ak_cert->claims.at("ek_id"), KeyId(tpm_.ek.public_key));
  EXPECT_EQ(blob.ak_cert->claims.at("seal_pcrs"), "17,18");
  EXPECT_EQ(blob.ak_cert->claims.at("seal_policy"), SealPolicyDigest(blob.policy).ToHex());
}

TEST_F(TpmTest, EmptyPolicyRejected) {
  absl::StatusOr<AkResult> ak = CreateSealedAk(tpm_, ToBytes("ak"), {}, nullptr);
  ASSERT_FALSE(ak.ok());
  EXPECT_EQ(GetErrorCode(ak.status()), ErrorCode::kEmptyPolicy);
}

TEST_F(TpmTest, QuoteVerifiesAndEchoesNonce) {
  platform::Platform p = ValueOrDie(platform::MeasuredLaunch(Stack(), tpm_));
  AkResult ak = ValueOrDie(CreateSealedAk(p.tpm, ToBytes("ak"), {17, 18}, nullptr));
  Nonce nonce{};
  nonce[0] = 0xAB;
  nonce[31] = 0x01;
  const std::vector<int> sel = {0, 17, 18};
  TpmQuote q = ValueOrDie(Quote(ak.tpm, ak.handle, sel, nonce));
  EXPECT_TRUE(ValueOrDie(VerifyQuoteSignature(q)));
  EXPECT_EQ(q.nonce, nonce);
  EXPECT_EQ(q.PcrValue(17), ak.tpm.pcrs[17]);
  EXPECT_FALSE(q.PcrValue(5).has_value());

  TpmQuote tampered = q;
  tampered.pcr_values[0] = ComputeDigest("forged");
  EXPECT_FALSE(ValueOrDie(VerifyQuoteSignature(tampered)));
}

TEST_F(TpmTest, MaliciousVtpmBinaryViolatesPolicy) {
  platform::Platform p = ValueOrDie(platform::MeasuredLaunch(Stack(), tpm_));
  AkResult ak = ValueOrDie(CreateSealedAk(p.tpm, ToBytes("ak"), {17, 18}, nullptr));
  TpmState mutated = ValueOrDie(PcrExtend(ak.tpm, 18, ToBytes("evil-vtpm"), "vTPM binary"));
  absl::StatusOr<TpmQuote> q = Quote(mutated, ak.handle, std::vector<int>{18}, Nonce{});
  ASSERT_FALSE(q.ok());
  EXPECT_EQ(GetErrorCode(q.status()), ErrorCode::kPolicyViolation);
}

TEST_F(TpmTest, ExportedBlobLoadsElsewhereButCannotQuoteUnderOtherPcrs) {
  platform::Platform p = ValueOrDie(platform::MeasuredLaunch(Stack(), tpm_));
  AkResult ak = ValueOrDie(CreateSealedAk(p.tpm, ToBytes("ak"), {17, 18}, nullptr));
  SealedAk blob = ValueOrDie(ExportSealedAk(ak.tpm, ak.handle));

  TpmState other = ValueOrDie(TpmInit(ToBytes("ek-9"), ca_, {}, TpmKind::kDiscrete));
  platform::Platform bad = ValueOrDie(platform::MeasuredLaunch(Stack("evil"), other));
  AkResult loaded = ValueOrDie(LoadSealedAk(bad.tpm, blob));
  absl::StatusOr<TpmQuote> q = Quote(loaded.tpm, loaded.handle, std::vector<int>{17}, Nonce{});
  EXPECT_EQ(GetErrorCode(q.status()), ErrorCode::kPolicyViolation);

  EXPECT_EQ(GetErrorCode(Quote(tpm_, 0x1234, std::vector<int>{}, Nonce{}).status()),
            ErrorCode::kUnknownAk);
}

}  // namespace
}  // namespace dcea::tpm
