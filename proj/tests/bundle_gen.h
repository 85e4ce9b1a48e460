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

#ifndef DCEA_TESTS_BUNDLE_GEN_H_
#define DCEA_TESTS_BUNDLE_GEN_H_

#include <string>

#include "absl/strings/str_cat.h"
#include "dcea/crypto.h"
#include "dcea/event_log.h"
#include "dcea/evidence.h"

namespace dcea::testing {

// Structurally valid bundles with random content. Signatures are random bytes;
// these exercise the codec, not the verifier.
class BundleGenerator {
 public:
  explicit BundleGenerator(uint64_t seed) : prng_(seed) {}

  evidence::EvidenceBundle Next() {
    evidence::EvidenceBundle b;
    td::TdReport& r = b.td_report;
    r.mrtd = RandomDigest();
    for (Digest& d : r.rtmrs) d = RandomDigest();
    r.mrconfigid = RandomDigest();
    r.mrowner = RandomDigest();
    r.mrownerconfig = RandomDigest();
    r.report_data = prng_.NextArray<td::kReportDataSize>();
    r.ppid = absl::StrCat("host-", prng_.Uniform(0, 999));
    r.tee_tcb_svn = prng_.NextBytes(prng_.Uniform(0, 16));
    r.mrseam = prng_.NextBytes(48);
    r.seam_attributes = prng_.NextBytes(8);
    r.td_attributes = prng_.NextBytes(8);
    r.qe_signature = RandomSignature();
    r.qe_chain = RandomChain(prng_.Uniform(1, 3));

    tpm::TpmQuote& q = b.tpm_quote;
    for (int i = 0; i < kNumPcrs; ++i) {
      if (prng_.Uniform(0, 2) != 0) {
        q.selection.push_back(i);
        q.pcr_values.push_back(RandomDigest());
      }
    }
    q.nonce = prng_.NextArray<32>();
    q.ak_public = prng_.NextBytes(32);
    q.signature = RandomSignature();

    b.ek_cert_chain = RandomChain(prng_.Uniform(1, 3));
    if (prng_.Uniform(0, 1) == 1) b.ak_cert = RandomCert();
    const int entries = static_cast<int>(prng_.Uniform(0, 20));
    for (int i = 0; i < entries; ++i) b.event_log.push_back(RandomEntry());
    b.nonces.td_nonce = prng_.NextArray<32>();
    b.nonces.tpm_nonce = prng_.NextArray<32>();
    b.timing.challenge_sent = prng_.Uniform(0, 1'000'000);
    b.timing.td_received = b.timing.challenge_sent + prng_.Uniform(0, 500);
    b.timing.quote_received = b.timing.challenge_sent + prng_.Uniform(0, 2000);
    const int meta = static_cast<int>(prng_.Uniform(0, 3));
    for (int i = 0; i < meta; ++i) {
      b.scenario_meta[absl::StrCat("k", i)] = RandomText();
    }
    return b;
  }

 private:
  Digest RandomDigest() {
    return Digest(prng_.NextArray<Digest::kSize>());
  }

  std::string RandomText() {
    static constexpr char kAlphabet[] = "abcXYZ019 -_,\"\\/\n\t";
    std::string s;
    const int n = static_cast<int>(prng_.Uniform(0, 12));
    for (int i = 0; i < n; ++i) {
      s.push_back(kAlphabet[prng_.Uniform(0, sizeof(kAlphabet) - 2)]);
    }
    return s;
  }

  Signature RandomSignature() {
    return Signature{std::string(kSignatureAlgorithm), prng_.NextBytes(64)};
  }

  Certificate RandomCert() {
    Certificate c;
    c.subject_public = prng_.NextBytes(32);
    c.issuer_id = HexEncode(prng_.NextBytes(8));
    const int claims = static_cast<int>(prng_.Uniform(0, 4));
    for (int i = 0; i < claims; ++i) c.claims[absl::StrCat("claim", i)] = RandomText();
    c.signature = RandomSignature();
    return c;
  }

  CertChain RandomChain(int64_t n) {
    CertChain chain;
    for (int64_t i = 0; i < n; ++i) chain.push_back(RandomCert());
    return chain;
  }

  EventLogEntry RandomEntry() {
    EventLogEntry e;
    e.event_digest = RandomDigest();
    e.description = RandomText();
    if (prng_.Uniform(0, 1) == 0) {
      e.scope = Scope::kHost;
      e.pcr_index = static_cast<int>(prng_.Uniform(0, kNumPcrs - 1));
      return e;
    }
    e.scope = Scope::kGuest;
    const int reg = static_cast<int>(prng_.Uniform(0, 4));
    const TdRegister td_reg = reg == 0 ? TdRegister::kMrtd : RtmrRegister(reg - 1);
    e.td_register = td_reg;
    auto pcrs = MirroredPcrs(td_reg);
    if (!pcrs.empty()) {
      e.pcr_index = pcrs[prng_.Uniform(0, static_cast<int64_t>(pcrs.size()) - 1)];
    }
    return e;
  }

  Prng prng_;
};

}  // namespace dcea::testing

#endif  // DCEA_TESTS_BUNDLE_GEN_H_
