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

#include <string>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dcea::batch {
namespace {

using adversary::Deployment;

TEST(BatchTest, ParallelAgreesWithSerial) {
  const std::vector<CaseSpec> specs = MatrixCases(3, 100);
  std::vector<CaseResult> serial = RunCasesSerial(specs);
  std::vector<CaseResult> parallel = RunCasesParallel(specs, 4);
  ASSERT_EQ(serial.size(), specs.size());
  EXPECT_EQ(serial, parallel);
}

TEST(BatchTest, MatrixCasesCoverRelevantCellsOnly) {
  const std::vector<CaseSpec> specs = MatrixCases(2, 0);
  int s1 = 0, s2 = 0;
  for (const CaseSpec& s : specs) {
    (s.deployment == Deployment::kS1 ? s1 : s2)++;
    if (s.deployment == Deployment::kS1) {
      EXPECT_TRUE(s.scenario == "honest-s1" || s.scenario.starts_with("a1-") ||
                  s.scenario.starts_with("a3-"))
          << s.scenario;
    }
  }
  // S1: honest plus three A1 and two A3 variants. S2: everything but honest-s1.
  EXPECT_EQ(s1, 2 * 6);
  EXPECT_EQ(s2, 2 * 14);
}

class MatrixTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    matrix_ = new Matrix(BuildMatrix(RunCasesParallel(MatrixCases(5, 1))));
  }
  static void TearDownTestSuite() { delete matrix_; }
  static Matrix* matrix_;
};

Matrix* MatrixTest::matrix_ = nullptr;

TEST_F(MatrixTest, VtpmBinaryDetectedInS2) {
  const MatrixCell* c = matrix_->Find("a6-vtpm-binary", Deployment::kS2);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, CellStatus::kDetected);
}

TEST_F(MatrixTest, FrankensteinNotApplicableInS1) {
  const MatrixCell* c = matrix_->Find("a2-frankenstein", Deployment::kS1);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, CellStatus::kNotApplicable);
  EXPECT_EQ(c->runs, 0);
}

TEST_F(MatrixTest, AllRelevantCellsDetectedAndHonestAccepted) {
  for (const MatrixCell& c : matrix_->cells) {
    if (!c.relevant) continue;
    const bool honest = c.scenario.starts_with("honest");
    EXPECT_EQ(c.status, honest ? CellStatus::kAccepted : CellStatus::kDetected)
        << c.scenario << " " << adversary::DeploymentName(c.deployment);
    EXPECT_EQ(c.expectation_met, c.runs);
  }
  EXPECT_TRUE(matrix_->AllExpectationsMet());
}

TEST_F(MatrixTest, CsvAndMarkdownRendering) {
  const std::string csv = MatrixToCsv(*matrix_);
  EXPECT_TRUE(csv.starts_with(
      "scenario,attack,deployment,relevant,runs,expectation_met,errors,status,"
      "targeted_checks\n"));
  EXPECT_NE(csv.find("a6-vtpm-binary,A6,S2,yes,5,5,0,detected,C6\n"), std::string::npos)
      << csv;
  const std::string md = MatrixToMarkdown(*matrix_);
  EXPECT_NE(md.find("| a2-mixmatch | A2 | C3 C5 C7 | N/A | detected (5/5) |"),
            std::string::npos)
      << md;
}

TEST(MatrixStatusTest, UndetectedAndRejectedCells) {
  CaseSpec attack{"a4-replay", Deployment::kS2, 1, std::nullopt, {}};
  CaseSpec honest{"honest-s2", Deployment::kS2, 1, std::nullopt, {}};
  CaseResult missed{attack, true, "", true, false, {}, {}, {}};
  CaseResult rejected{honest, true, "", false, false, {}, {}, {}};
  Matrix m = BuildMatrix({missed, rejected});
  EXPECT_EQ(m.Find("a4-replay", Deployment::kS2)->status, CellStatus::kUndetected);
  EXPECT_EQ(m.Find("honest-s2", Deployment::kS2)->status, CellStatus::kRejected);
  EXPECT_EQ(m.false_negatives, 1);
  EXPECT_EQ(m.false_positives, 1);
  EXPECT_FALSE(m.AllExpectationsMet());
}

}  // namespace
}  // namespace dcea::batch
