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

// Runs catalog scenarios in independent worlds and folds the outcomes into
// the detection matrix. RunCasesParallel distributes worlds over OpenMP
// threads; RunCasesSerial is the reference it must agree with.

#ifndef DCEA_BATCH_H_
#define DCEA_BATCH_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dcea/adversary.h"
#include "dcea/evidence.h"
#include "dcea/json_util.h"
#include "dcea/verifier.h"

namespace dcea::batch {

struct CaseSpec {
  std::string scenario;  // catalog name
  adversary::Deployment deployment = adversary::Deployment::kS2;
  uint64_t seed = 0;
  // Replaces the seed-derived world config when set.
  std::optional<adversary::WorldConfig> config;
  std::set<verifier::CheckId> disabled_checks;
};

struct CaseOutcome {
  const adversary::CatalogEntry* entry = nullptr;
  adversary::WorldConfig config;
  evidence::EvidenceBundle bundle;
  verifier::PolicyFile policy_file;  // policy, challenge and registry used
  verifier::Verdict verdict;
  int64_t elapsed_virtual_ms = 0;
  // Honest: accepted. Attack: rejected with the scenario's attack flagged.
  bool expectation_met = false;
};

absl::StatusOr<CaseOutcome> RunCase(const CaseSpec& spec);

// Compact per-case record used by batch runs.
struct CaseResult {
  CaseSpec spec;
  bool ok = false;  // RunCase succeeded
  std::string error;
  bool accepted = false;
  bool expectation_met = false;
  std::set<verifier::Attack> attack_flags;
  std::set<verifier::CheckId> failed_checks;
  Digest bundle_digest;

  bool operator==(const CaseResult& o) const {
    return spec.scenario == o.spec.scenario && spec.deployment == o.spec.deployment &&
           spec.seed == o.spec.seed && ok == o.ok && error == o.error &&
           accepted == o.accepted && expectation_met == o.expectation_met &&
           attack_flags == o.attack_flags && failed_checks == o.failed_checks &&
           bundle_digest == o.bundle_digest;
  }
};

CaseResult Summarize(const CaseSpec& spec, const absl::StatusOr<CaseOutcome>& outcome);

std::vector<CaseResult> RunCasesSerial(const std::vector<CaseSpec>& specs);
// `threads` <= 0 uses the OpenMP default.
std::vector<CaseResult> RunCasesParallel(const std::vector<CaseSpec>& specs,
                                         int threads = 0);

// Every catalog entry in each deployment where it is relevant, for seeds
// base_seed .. base_seed + seeds_per_cell - 1.
std::vector<CaseSpec> MatrixCases(int seeds_per_cell, uint64_t base_seed);

enum class CellStatus { kDetected, kUndetected, kAccepted, kRejected, kNotApplicable };
std::string_view CellStatusName(CellStatus s);

struct MatrixCell {
  std::string scenario;
  adversary::Deployment deployment = adversary::Deployment::kS2;
  bool relevant = false;
  int runs = 0;
  int expectation_met = 0;
  int errors = 0;
  CellStatus status = CellStatus::kNotApplicable;
};

struct Matrix {
  std::vector<MatrixCell> cells;  // catalog order, S1 then S2
  int false_positives = 0;        // honest runs rejected
  int false_negatives = 0;        // attack runs accepted or misattributed
  int errors = 0;

  const MatrixCell* Find(std::string_view scenario, adversary::Deployment d) const;
  bool AllExpectationsMet() const {
    return false_positives == 0 && false_negatives == 0 && errors == 0;
  }
};

Matrix BuildMatrix(const std::vector<CaseResult>& results);
std::string MatrixToCsv(const Matrix& m);
std::string MatrixToMarkdown(const Matrix& m);
json_util::Json MatrixToJson(const Matrix& m);

}  // namespace dcea::batch

#endif  // DCEA_BATCH_H_
