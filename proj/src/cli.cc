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

#include "dcea/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "dcea/adversary.h"
#include "dcea/batch.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"
#include "dcea/verifier.h"

namespace dcea::cli {
namespace {

namespace fs = std::filesystem;
using json_util::Json;

struct UsageError {
  std::string message;
};

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read '", path, "'"));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write '", path.string(), "'"));
  out << text;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write to '", path.string(), "'"));
}

std::string Csv(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string VerdictToText(const verifier::Verdict& v, const std::string& format) {
  if (format == "json") return json_util::Dump(verifier::VerdictToJson(v));
  std::string out;
  if (format == "csv") {
    out = "check_id,name,passed,disabled,detail\n";
    for (const auto& c : v.checks) {
      absl::StrAppend(&out, std::string(verifier::CheckIdName(c.id)), ",", c.name, ",",
                      c.passed ? "true" : "false", ",", c.disabled ? "true" : "false",
                      ",", Csv(c.detail), "\n");
    }
    return out;
  }
  absl::StrAppend(&out, "Verdict: ", v.accepted ? "ACCEPTED" : "REJECTED", "\n\n",
                  "| Check | Name | Result | Detail |\n|---|---|---|---|\n");
  for (const auto& c : v.checks) {
    absl::StrAppend(&out, "| ", std::string(verifier::CheckIdName(c.id)), " | ", c.name,
                    " | ", c.disabled ? "disabled" : (c.passed ? "pass" : "FAIL"), " | ",
                    c.detail, " |\n");
  }
  std::string flags;
  for (auto a : v.attack_flags) {
    absl::StrAppend(&flags, flags.empty() ? "" : " ", std::string(verifier::AttackName(a)));
  }
  absl::StrAppend(&out, "\nAttack flags: ", flags.empty() ? "none" : flags, "\n");
  return out;
}

std::optional<uint64_t> EnvSeed() {
  const char* env = std::getenv("DCEA_SEED");
  uint64_t seed = 0;
  if (env == nullptr || !absl::SimpleAtoi(env, &seed)) return std::nullopt;
  return seed;
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << StatusMessage(status) << "\n";
  return kExitUsage;
}

int CmdRun(const std::string& scenario_arg, std::optional<uint64_t> seed_flag,
           const std::string& deployment_flag, const std::string& out_dir,
           const std::string& format, std::ostream& out, std::ostream& err) {
  adversary::ScenarioFile file;
  const bool is_path = scenario_arg.ends_with(".json") || fs::exists(scenario_arg);
  if (is_path) {
    absl::StatusOr<std::string> text = ReadFile(scenario_arg);
    if (!text.ok()) return Fail(err, text.status());
    absl::StatusOr<adversary::ScenarioFile> parsed = adversary::ParseScenarioFile(*text);
    if (!parsed.ok()) {
      err << "error: " << scenario_arg << ": " << StatusMessage(parsed.status()) << "\n";
      return kExitUsage;
    }
    file = *std::move(parsed);
  } else {
    file.scenario = scenario_arg;
  }
  absl::StatusOr<const adversary::CatalogEntry*> entry =
      adversary::FindCatalogEntry(file.scenario);
  if (!entry.ok()) return Fail(err, entry.status());

  const uint64_t seed = seed_flag.has_value()   ? *seed_flag
                        : file.seed.has_value() ? *file.seed
                                                : EnvSeed().value_or(0);
  adversary::Deployment deployment = adversary::Deployment::kS2;
  if ((*entry)->honest) {
    deployment = *(*entry)->honest_kind;
  } else if (!deployment_flag.empty()) {
    absl::StatusOr<adversary::Deployment> d = adversary::ParseDeployment(deployment_flag);
    if (!d.ok()) return Fail(err, d.status());
    deployment = *d;
  } else if (file.deployment.has_value()) {
    deployment = *file.deployment;
  } else if (!(*entry)->relevant_s2) {
    deployment = adversary::Deployment::kS1;
  }

  absl::StatusOr<adversary::WorldConfig> config =
      adversary::ResolveWorldConfig(file, seed, deployment);
  if (!config.ok()) return Fail(err, config.status());
  batch::CaseSpec spec{(*entry)->name, deployment, seed, *config, {}};
  absl::StatusOr<batch::CaseOutcome> outcome = batch::RunCase(spec);
  if (!outcome.ok()) return Fail(err, outcome.status());

  const std::string stem =
      absl::StrCat((*entry)->name, "-", std::string(adversary::DeploymentName(deployment)),
                   "-seed", seed);
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  const fs::path bundle_path = dir / (stem + ".dcea.json");
  const fs::path policy_path = dir / (stem + ".policy.json");
  const fs::path report_path = dir / (stem + ".report.json");

  Json report{{"bundle_path", bundle_path.string()},
              {"deployment", std::string(adversary::DeploymentName(deployment))},
              {"elapsed_virtual_ms", outcome->elapsed_virtual_ms},
              {"expectation", (*entry)->honest ? "accept" : "reject"},
              {"expectation_met", outcome->expectation_met},
              {"policy_path", policy_path.string()},
              {"scenario_id", (*entry)->name},
              {"seed", seed},
              {"verdict", verifier::VerdictToJson(outcome->verdict)}};
  for (const auto& [path, text] :
       {std::pair{bundle_path, evidence::SerializeBundle(outcome->bundle)},
        std::pair{policy_path, verifier::SerializePolicyFile(outcome->policy_file)},
        std::pair{report_path, json_util::Dump(report)}}) {
    absl::Status written = WriteFile(path, text);
    if (!written.ok()) return Fail(err, written);
  }

  if (format == "json") {
    out << json_util::Dump(report);
  } else if (format == "csv") {
    out << "scenario_id,deployment,seed,accepted,expectation_met,elapsed_virtual_ms,"
           "bundle_path\n"
        << (*entry)->name << "," << adversary::DeploymentName(deployment) << "," << seed
        << "," << (outcome->verdict.accepted ? "true" : "false") << ","
        << (outcome->expectation_met ? "true" : "false") << ","
        << outcome->elapsed_virtual_ms << "," << Csv(bundle_path.string()) << "\n";
  } else {
    out << "Scenario `" << (*entry)->name << "` (" << adversary::DeploymentName(deployment)
        << ", seed " << seed << "): expectation "
        << (outcome->expectation_met ? "met" : "NOT met") << "\n\n"
        << VerdictToText(outcome->verdict, "md");
  }
  return outcome->expectation_met ? kExitExpected : kExitContrary;
}

int CmdVerify(const std::string& bundle_path, const std::string& policy_path,
              const std::string& format, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> bundle_text = ReadFile(bundle_path);
  if (!bundle_text.ok()) return Fail(err, bundle_text.status());
  absl::StatusOr<std::string> policy_text = ReadFile(policy_path);
  if (!policy_text.ok()) return Fail(err, policy_text.status());
  absl::StatusOr<evidence::EvidenceBundle> bundle =
      evidence::DeserializeBundle(*bundle_text);
  if (!bundle.ok()) {
    err << "error: " << bundle_path << ": " << StatusMessage(bundle.status()) << "\n";
    return kExitUsage;
  }
  absl::StatusOr<verifier::PolicyFile> policy =
      verifier::DeserializePolicyFile(*policy_text);
  if (!policy.ok()) {
    err << "error: " << policy_path << ": " << StatusMessage(policy.status()) << "\n";
    return kExitUsage;
  }
  verifier::Verifier v(0, [] { return int64_t{0}; });
  verifier::RestoreRegistry(*policy, v.registry());
  for (const verifier::Challenge& c : policy->challenges) v.LoadChallenge(c);
  const verifier::Challenge challenge =
      verifier::SelectChallenge(policy->challenges, *bundle).value_or(verifier::Challenge{});
  const verifier::Verdict verdict = v.VerifyBundle(*bundle, policy->policy, challenge);
  out << VerdictToText(verdict, format);
  return verdict.accepted ? kExitExpected : kExitContrary;
}

int CmdMatrix(const std::string& out_dir, int seeds, uint64_t base_seed, bool parallel,
              int threads, const std::string& format, std::ostream& out,
              std::ostream& err) {
  const std::vector<batch::CaseSpec> specs = batch::MatrixCases(seeds, base_seed);
  const std::vector<batch::CaseResult> results =
      parallel ? batch::RunCasesParallel(specs, threads) : batch::RunCasesSerial(specs);
  const batch::Matrix m = batch::BuildMatrix(results);
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  for (const auto& [name, text] :
       {std::pair{std::string("matrix.csv"), batch::MatrixToCsv(m)},
        std::pair{std::string("matrix.md"), batch::MatrixToMarkdown(m)}}) {
    absl::Status written = WriteFile(dir / name, text);
    if (!written.ok()) return Fail(err, written);
  }
  if (format == "csv") {
    out << batch::MatrixToCsv(m);
  } else if (format == "md") {
    out << batch::MatrixToMarkdown(m);
  } else {
    out << json_util::Dump(batch::MatrixToJson(m));
  }
  for (const batch::CaseResult& r : results) {
    if (!r.ok) {
      err << "error: " << r.spec.scenario << " seed " << r.spec.seed << ": " << r.error
          << "\n";
    }
  }
  return m.AllExpectationsMet() ? kExitExpected : kExitContrary;
}

int CmdList(const std::string& format, std::ostream& out) {
  auto checks = [](const adversary::CatalogEntry& e) {
    std::string s;
    for (auto id : e.targeted_checks) {
      absl::StrAppend(&s, s.empty() ? "" : " ", std::string(verifier::CheckIdName(id)));
    }
    return s;
  };
  if (format == "json") {
    Json list = Json::array();
    for (const auto& e : adversary::Catalog()) {
      list.push_back(Json{{"description", e.description},
                          {"name", e.name},
                          {"relevant_s1", e.relevant_s1},
                          {"relevant_s2", e.relevant_s2},
                          {"targeted_checks", checks(e)}});
    }
    out << json_util::Dump(list);
    return kExitExpected;
  }
  if (format == "csv") out << "name,attack,s1,s2,targeted_checks,description\n";
  if (format == "md") {
    out << "| Scenario | Attack | S1 | S2 | Targeted checks | Description |\n"
           "|---|---|---|---|---|---|\n";
  }
  for (const auto& e : adversary::Catalog()) {
    const std::string attack = e.honest ? "-" : std::string(verifier::AttackName(e.attack));
    if (format == "csv") {
      out << e.name << "," << attack << "," << (e.relevant_s1 ? "yes" : "no") << ","
          << (e.relevant_s2 ? "yes" : "no") << "," << checks(e) << ","
          << Csv(e.description) << "\n";
    } else {
      out << "| " << e.name << " | " << attack << " | " << (e.relevant_s1 ? "yes" : "-")
          << " | " << (e.relevant_s2 ? "yes" : "-") << " | " << checks(e) << " | "
          << e.description << " |\n";
    }
  }
  return kExitExpected;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DCEA evidence simulator and verifier", "dcea"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "md", "csv"}))
      ->capture_default_str();

  std::string scenario, deployment, out_dir, policy_path, bundle_path;
  std::optional<uint64_t> seed;
  int seeds = 50, threads = 0;
  bool parallel = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and verify its bundle");
  run->add_option("--scenario", scenario, "Catalog name or scenario.json path")->required();
  run->add_option("--seed", seed, "World seed (falls back to DCEA_SEED)");
  run->add_option("--deployment", deployment, "S1 or S2");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format)->check(CLI::IsMember({"json", "md", "csv"}));

  CLI::App* verify = app.add_subcommand("verify", "Verify a bundle against a policy file");
  verify->add_option("bundle", bundle_path, "*.dcea.json bundle")->required();
  verify->add_option("--policy", policy_path, "policy.json")->required();
  verify->add_option("--format", format)->check(CLI::IsMember({"json", "md", "csv"}));

  CLI::App* matrix = app.add_subcommand("matrix", "Regenerate the detection matrix");
  matrix->add_option("--out", out_dir, "Directory for matrix.csv and matrix.md");
  matrix->add_option("--seeds", seeds, "Seeds per cell")->check(CLI::PositiveNumber);
  matrix->add_option("--seed", seed, "First seed (falls back to DCEA_SEED)");
  matrix->add_flag("--parallel", parallel, "Run worlds concurrently");
  matrix->add_option("--threads", threads, "Thread count for --parallel");
  matrix->add_option("--format", format)->check(CLI::IsMember({"json", "md", "csv"}));

  CLI::App* list = app.add_subcommand("list", "List runnable scenarios");
  list->add_option("--format", format)->check(CLI::IsMember({"json", "md", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitExpected : kExitUsage;
  }

  if (run->parsed()) return CmdRun(scenario, seed, deployment, out_dir, format, out, err);
  if (verify->parsed()) return CmdVerify(bundle_path, policy_path, format, out, err);
  if (matrix->parsed()) {
    const uint64_t base = seed.has_value() ? *seed : EnvSeed().value_or(1);
    return CmdMatrix(out_dir, seeds, base, parallel, threads, format, out, err);
  }
  return CmdList(format, out);
}

}  // namespace dcea::cli
