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

#ifndef DCEA_CLI_H_
#define DCEA_CLI_H_

#include <ostream>

namespace dcea::cli {

inline constexpr int kExitExpected = 0;
inline constexpr int kExitContrary = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `dcea` tool: run, verify, matrix, list.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcea::cli

#endif  // DCEA_CLI_H_
