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

#include "dcea/registry.h"

#include <algorithm>

namespace dcea::verifier {
namespace {

bool SameKey(const Bytes& a, ByteSpan b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

RegisterResult AkRegistry::Register(ByteSpan ak_public,
                                    const RegistryEntry& meta) {
  absl::MutexLock lock(&mu_);
  for (const auto& [key, entry] : entries_) {
    if (!SameKey(key, ak_public)) continue;
    if (entry.platform_id == meta.platform_id) return {};
    conflicts_.push_back(
        {Bytes(ak_public.begin(), ak_public.end()), entry, meta});
    return {RegisterResult::Kind::kDuplicate, entry};
  }
  entries_.emplace_back(Bytes(ak_public.begin(), ak_public.end()), meta);
  return {};
}

std::optional<RegistryEntry> AkRegistry::Lookup(ByteSpan ak_public) const {
  absl::MutexLock lock(&mu_);
  for (const auto& [key, entry] : entries_) {
    if (SameKey(key, ak_public)) return entry;
  }
  return std::nullopt;
}

bool AkRegistry::HasConflict(ByteSpan ak_public) const {
  absl::MutexLock lock(&mu_);
  return std::any_of(conflicts_.begin(), conflicts_.end(),
                     [&](const RegistryConflict& c) {
                       return SameKey(c.ak_public, ak_public);
                     });
}

std::vector<RegistryConflict> AkRegistry::Conflicts() const {
  absl::MutexLock lock(&mu_);
  return conflicts_;
}

std::vector<std::pair<Bytes, RegistryEntry>> AkRegistry::Snapshot() const {
  absl::MutexLock lock(&mu_);
  return entries_;
}

size_t AkRegistry::size() const {
  absl::MutexLock lock(&mu_);
  return entries_.size();
}

}  // namespace dcea::verifier
