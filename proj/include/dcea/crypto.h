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

// Deterministic cryptographic primitives shared by every simulated party:
// SHA-384 measurement digests, the PCR/RTMR extend rule, seeded Ed25519 keys
// and a minimal claims-map certificate format.

#ifndef DCEA_CRYPTO_H_
#define DCEA_CRYPTO_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace dcea {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

Bytes ToBytes(std::string_view text);
std::string HexEncode(ByteSpan bytes);
absl::StatusOr<Bytes> HexDecode(std::string_view hex);

// A 48-byte SHA-384 value. Every measurement register and event digest in the
// simulator is a Digest.
class Digest {
 public:
  static constexpr size_t kSize = 48;

  Digest() : bytes_{} {}
  explicit Digest(const std::array<uint8_t, kSize>& bytes) : bytes_(bytes) {}

  static Digest Zero() { return Digest(); }
  static absl::StatusOr<Digest> FromBytes(ByteSpan bytes);
  static absl::StatusOr<Digest> FromHex(std::string_view hex);

  ByteSpan bytes() const { return bytes_; }
  std::string ToHex() const { return HexEncode(bytes_); }
  bool IsZero() const { return *this == Zero(); }

  auto operator<=>(const Digest&) const = default;

 private:
  std::array<uint8_t, kSize> bytes_;
};

Digest ComputeDigest(ByteSpan data);
Digest ComputeDigest(std::string_view data);

// new = SHA-384(old || event_digest).
Digest Extend(const Digest& old, const Digest& event_digest);

// Seedable randomness source injected into every component that needs fresh
// values (nonces, generated images). Not a CSPRNG; simulations only.
class Prng {
 public:
  explicit Prng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform integer in [lo, hi].
  int64_t Uniform(int64_t lo, int64_t hi);
  Bytes NextBytes(size_t n);
  template <size_t N>
  std::array<uint8_t, N> NextArray() {
    std::array<uint8_t, N> out;
    for (auto& b : out) b = static_cast<uint8_t>(engine_() & 0xff);
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

enum class KeyKind { kEk, kAk, kQe, kCa };

std::string_view KeyKindName(KeyKind kind);

inline constexpr std::string_view kSignatureAlgorithm = "ed25519";

struct Signature {
  std::string algorithm;
  Bytes value;

  bool operator==(const Signature&) const = default;
};

struct KeyPair {
  Bytes public_key;
  Bytes private_key;
  KeyKind kind = KeyKind::kAk;

  bool operator==(const KeyPair&) const = default;
};

// Derives an Ed25519 key pair from `seed`. The same (seed, kind) always yields
// the same pair. Empty seeds are rejected with InvalidSeed.
absl::StatusOr<KeyPair> KeyGen(ByteSpan seed, KeyKind kind);
absl::StatusOr<KeyPair> KeyGen(std::string_view seed, KeyKind kind);

absl::StatusOr<Signature> Sign(ByteSpan private_key, ByteSpan message);

// False on a well-formed key that does not verify; InvalidKey when the key
// itself is malformed.
absl::StatusOr<bool> Verify(ByteSpan public_key, ByteSpan message,
                            const Signature& signature);

// Short stable identifier of a public key: hex of the first 16 digest bytes.
std::string KeyId(ByteSpan public_key);

using Claims = std::map<std::string, std::string>;

struct Certificate {
  Bytes subject_public;
  std::string issuer_id;
  Claims claims;
  Signature signature;

  // Canonical bytes covered by `signature`.
  Bytes SignedPayload() const;

  bool operator==(const Certificate&) const = default;
};

// Ordered leaf -> root.
using CertChain = std::vector<Certificate>;

absl::StatusOr<Certificate> IssueCert(const KeyPair& issuer,
                                      ByteSpan subject_public,
                                      const Claims& claims);

absl::StatusOr<Certificate> SelfSignedRoot(const KeyPair& ca,
                                           const Claims& claims);

struct ChainVerdict {
  enum class Kind { kValid, kUntrustedRoot, kBrokenLink };

  Kind kind = Kind::kValid;
  // Position of the first certificate whose signature does not verify under
  // its parent (or under itself for the root). Only meaningful for kBrokenLink.
  size_t index = 0;

  bool ok() const { return kind == Kind::kValid; }
  std::string ToString() const;
  bool operator==(const ChainVerdict&) const = default;
};

absl::StatusOr<ChainVerdict> VerifyChain(const CertChain& chain,
                                         std::span<const Certificate> roots);

}  // namespace dcea

#endif  // DCEA_CRYPTO_H_
