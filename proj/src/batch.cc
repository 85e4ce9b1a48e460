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

#include "dcea/batch.h"

#include <omp.h>

#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"

namespace dcea::batch {
namespace {

using adversary::CatalogEntry;
using adversary::Deployment;
using json_util::Json;

bool ExpectationMet(const CatalogEntry& entry, const verifier::Verdict& v) {
  if (entry.honest) return v.accepted;
  return !v.accepted && v.attack_flags.contains(entry.attack);
}

std::string Checks(const std::set<verifier::CheckId>& checks) {
  std::vector<std::string> names;
  for (verifier::CheckId id : checks) names.emplace_back(verifier::CheckIdName(id));
  return absl::StrJoin(names, " ");
}

}  // namespace

absl::StatusOr<CaseOutcome> RunCase(const CaseSpec& spec) {
  DCEA_ASSIGN_OR_RETURN(const CatalogEntry* entry,
                        adversary::FindCatalogEntry(spec.scenario));
  CaseOutcome out;
  out.entry = entry;
  out.config = spec.config.has_value()
                   ? *spec.config
                   : adversary::RandomWorldConfig(spec.seed, spec.deployment);
  out.config.deployment = spec.deployment;
  if (entry->honest) out.config.deployment = *entry->honest_kind;

  DCEA_ASSIGN_OR_RETURN(adversary::World world, adversary::BuildWorld(out.config));
  std::unique_ptr<verifier::Verifier> v = adversary::MakeVerifier(world);
  const verifier::Challenge challenge = v->IssueChallenge();
  if (entry->honest) {
    DCEA_ASSIGN_OR_RETURN(out.bundle,
                          adversary::RunHonest(world, *entry->honest_kind, challenge));
  } else {
    DCEA_ASSIGN_OR_RETURN(out.bundle,
                          adversary::RunAttack(world, entry->scenario, challenge));
  }
  verifier::VerifierPolicy policy = adversary::DefaultPolicy(world);
  policy.disabled_checks = spec.disabled_checks;
  out.policy_file.policy = policy;
  out.policy_file.challenges = {challenge};
  verifier::CaptureRegistry(*world.registry, out.policy_file);
  out.verdict = v->VerifyBundle(out.bundle, policy, challenge);
  out.elapsed_virtual_ms = world.clock_ms - challenge.issued_at_ms;
  out.expectation_met = ExpectationMet(*entry, out.verdict);
  return out;
}

CaseResult Summarize(const CaseSpec& spec, const absl::StatusOr<CaseOutcome>& outcome) {
  CaseResult r;
  r.spec = spec;
  r.spec.config.reset();
  if (!outcome.ok()) {
    r.error = std::string(StatusMessage(outcome.status()));
    return r;
  }
  r.ok = true;
  r.accepted = outcome->verdict.accepted;
  r.expectation_met = outcome->expectation_met;
  r.attack_flags = outcome->verdict.attack_flags;
  r.failed_checks = outcome->verdict.FailedChecks();
  r.bundle_digest = ComputeDigest(evidence::SerializeBundle(outcome->bundle));
  return r;
}

std::vector<CaseResult> RunCasesSerial(const std::vector<CaseSpec>& specs) {
  std::vector<CaseResult> out;
  out.reserve(specs.size());
  for (const CaseSpec& spec : specs) out.push_back(Summarize(spec, RunCase(spec)));
  return out;
}

std::vector<CaseResult> RunCasesParallel(const std::vector<CaseSpec>& specs,
                                         int threads) {
  std::vector<CaseResult> out(specs.size());
  const int64_t n = static_cast<int64_t>(specs.size());
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int64_t i = 0; i < n; ++i) {
    out[i] = Summarize(specs[i], RunCase(specs[i]));
  }
  return out;
}

std::vector<CaseSpec> MatrixCases(int seeds_per_cell, uint64_t base_seed) {
  std::vector<CaseSpec> specs;
  for (const CatalogEntry& e : adversary::Catalog()) {
    for (Deployment d : {Deployment::kS1, Deployment::kS2}) {
      if (!e.RelevantIn(d)) continue;
      for (int i = 0; i < seeds_per_cell; ++i) {
        CaseSpec spec;
        spec.scenario = e.name;
        spec.deployment = d;
        spec.seed = base_seed + static_cast<uint64_t>(i);
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

std::string_view CellStatusName(CellStatus s) {
  switch (s) {
    case CellStatus::kDetected: return "detected";
    case CellStatus::kUndetected: return "undetected";
    case CellStatus::kAccepted: return "accepted";
    case CellStatus::kRejected: return "rejected";
    case CellStatus::kNotApplicable: return "not-applicable";
  }
  return "?";
}

const MatrixCell* Matrix::Find(std::string_view scenario, Deployment d) const {
  for (const MatrixCell& c : cells) {
    if (c.scenario == scenario && c.deployment == d) return &c;
  }
  return nullptr;
}

Matrix BuildMatrix(const std::vector<CaseResult>& results) {
  Matrix m;
  for (const CatalogEntry& e : adversary::Catalog()) {
    for (Deployment d : {Deployment::kS1, Deployment::kS2}) {
      MatrixCell cell;
      cell.scenario = e.name;
      cell.deployment = d;
      cell.relevant = e.RelevantIn(d);
      // Honest baselines occupy one column each; the other is not applicable.
      for (const CaseResult& r : results) {
        if (r.spec.scenario != e.name || r.spec.deployment != d) continue;
        ++cell.runs;
        if (!r.ok) {
          ++cell.errors;
        } else if (r.expectation_met) {
          ++cell.expectation_met;
        } else if (e.honest) {
          ++m.false_positives;
        } else {
          ++m.false_negatives;
        }
      }
      m.errors += cell.errors;
      if (!cell.relevant || cell.runs == 0) {
        cell.status = CellStatus::kNotApplicable;
      } else if (e.honest) {
        cell.status = cell.expectation_met == cell.runs ? CellStatus::kAccepted
                                                        : CellStatus::kRejected;
      } else {
        cell.status = cell.expectation_met == cell.runs ? CellStatus::kDetected
                                                        : CellStatus::kUndetected;
      }
      m.cells.push_back(std::move(cell));
    }
  }
  return m;
}

std::string MatrixToCsv(const Matrix& m) {
  std::string out =
      "scenario,attack,deployment,relevant,runs,expectation_met,errors,status,"
      "targeted_checks\n";
  for (const MatrixCell& c : m.cells) {
    const CatalogEntry* e = *adversary::FindCatalogEntry(c.scenario);
    absl::StrAppend(&out, c.scenario, ",",
                    e->honest ? "-" : std::string(verifier::AttackName(e->attack)), ",",
                    std::string(adversary::DeploymentName(c.deployment)), ",",
                    c.relevant ? "yes" : "no", ",", c.runs, ",", c.expectation_met,
                    ",", c.errors, ",", std::string(CellStatusName(c.status)), ",",
                    Checks(e->targeted_checks), "\n");
  }
  return out;
}

std::string MatrixToMarkdown(const Matrix& m) {
  std::string out =
      "| Scenario | Attack | Targeted checks | S1 | S2 |\n"
      "|---|---|---|---|---|\n";
  auto cell_text = [](const MatrixCell* c) -> std::string {
    if (c == nullptr || c->status == CellStatus::kNotApplicable) return "N/A";
    return absl::StrCat(std::string(CellStatusName(c->status)), " (",
                        c->expectation_met, "/", c->runs, ")");
  };
  for (const CatalogEntry& e : adversary::Catalog()) {
    absl::StrAppend(&out, "| ", e.name, " | ",
                    e.honest ? "-" : std::string(verifier::AttackName(e.attack)), " | ",
                    e.honest ? "-" : Checks(e.targeted_checks), " | ",
                    cell_text(m.Find(e.name, Deployment::kS1)), " | ",
                    cell_text(m.Find(e.name, Deployment::kS2)), " |\n");
  }
  absl::StrAppend(&out, "\nFalse positives: ", m.false_positives,
                  ". False negatives: ", m.false_negatives, ". Errors: ", m.errors,
                  ".\n");
  return out;
}

Json MatrixToJson(const Matrix& m) {
  Json cells = Json::array();
  for (const MatrixCell& c : m.cells) {
    cells.push_back(Json{{"deployment", std::string(adversary::DeploymentName(c.deployment))},
                         {"errors", c.errors},
                         {"expectation_met", c.expectation_met},
                         {"relevant", c.relevant},
                         {"runs", c.runs},
                         {"scenario", c.scenario},
                         {"status", std::string(CellStatusName(c.status))}});
  }
  return Json{{"cells", cells},
              {"errors", m.errors},
              {"false_negatives", m.false_negatives},
              {"false_positives", m.false_positives}};
}

}  // namespace dcea::batch
