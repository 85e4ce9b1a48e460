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

// `.dcea.json` bundle files. Field-by-field layout: docs/bundle-format.md.

#ifndef DCEA_BUNDLE_CODEC_H_
#define DCEA_BUNDLE_CODEC_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dcea/evidence.h"
#include "dcea/json_util.h"

namespace dcea::evidence {

json_util::Json BundleToJson(const EvidenceBundle& bundle);
absl::StatusOr<EvidenceBundle> BundleFromJson(const json_util::Json& j);

// Canonical: equal bundles serialize to identical bytes.
std::string SerializeBundle(const EvidenceBundle& bundle);
absl::StatusOr<EvidenceBundle> DeserializeBundle(std::string_view text);

json_util::Json TdReportToJson(const td::TdReport& report);
absl::StatusOr<td::TdReport> TdReportFromJson(const json_util::Json& j,
                                              std::string_view path);
json_util::Json QuoteToJson(const tpm::TpmQuote& quote);
absl::StatusOr<tpm::TpmQuote> QuoteFromJson(const json_util::Json& j,
                                            std::string_view path);
json_util::Json EntryToJson(const EventLogEntry& entry);
absl::StatusOr<EventLogEntry> EntryFromJson(const json_util::Json& j,
                                            std::string_view path);

}  // namespace dcea::evidence

#endif  // DCEA_BUNDLE_CODEC_H_
