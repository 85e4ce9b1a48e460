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

#ifndef DCEA_REGISTRY_H_
#define DCEA_REGISTRY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/base/thread_annotations.h"
#include "absl/synchronization/mutex.h"
#include "dcea/crypto.h"

namespace dcea::verifier {

struct RegistryEntry {
  std::string issuer;
  int64_t timestamp_ms = 0;
  std::string platform_id;

  bool operator==(const RegistryEntry&) const = default;
};

struct RegistryConflict {
  Bytes ak_public;
  RegistryEntry existing;
  RegistryEntry attempted;

  bool operator==(const RegistryConflict&) const = default;
};

struct RegisterResult {
  enum class Kind { kRegistered, kDuplicate };
  Kind kind = Kind::kRegistered;
  // Set for kDuplicate: the entry that was already on file.
  std::optional<RegistryEntry> existing;

  bool duplicate() const { return kind == Kind::kDuplicate; }
};

// Append-only map from AK public key to the platform it was provisioned on.
// Registering a key twice from the same platform is a no-op; registering it
// from a different platform leaves the original entry in place, records a
// conflict and reports Duplicate.
class AkRegistry {
 public:
  AkRegistry() = default;
  AkRegistry(const AkRegistry&) = delete;
  AkRegistry& operator=(const AkRegistry&) = delete;

  RegisterResult Register(ByteSpan ak_public, const RegistryEntry& meta);
  std::optional<RegistryEntry> Lookup(ByteSpan ak_public) const;
  // True when any attempted registration of this key conflicted.
  bool HasConflict(ByteSpan ak_public) const;

  std::vector<RegistryConflict> Conflicts() const;
  // Entries in insertion order.
  std::vector<std::pair<Bytes, RegistryEntry>> Snapshot() const;
  size_t size() const;

 private:
  mutable absl::Mutex mu_;
  std::vector<std::pair<Bytes, RegistryEntry>> entries_ ABSL_GUARDED_BY(mu_);
  std::vector<RegistryConflict> conflicts_ ABSL_GUARDED_BY(mu_);
};

}  // namespace dcea::verifier

#endif  // DCEA_REGISTRY_H_
