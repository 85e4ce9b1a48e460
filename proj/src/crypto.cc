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

#include "dcea/crypto.h"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "absl/strings/str_cat.h"
#include "dcea/canonical.h"
#include "dcea/status.h"

namespace dcea {
namespace {

constexpr size_t kEd25519KeySize = 32;
constexpr size_t kEd25519SignatureSize = 64;

struct PkeyDeleter {
  void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes ToBytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

std::string HexEncode(ByteSpan bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

absl::StatusOr<Bytes> HexDecode(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    return MakeError(ErrorCode::kParseError, "odd-length hex string");
  }
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexNibble(hex[2 * i]);
    int lo = HexNibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      return MakeError(ErrorCode::kParseError,
                       absl::StrCat("non-hex character near offset ", 2 * i));
    }
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

absl::StatusOr<Digest> Digest::FromBytes(ByteSpan bytes) {
  if (bytes.size() != kSize) {
    return MakeError(ErrorCode::kParseError,
                     absl::StrCat("digest must be 48 bytes, got ", bytes.size()));
  }
  std::array<uint8_t, kSize> raw;
  std::copy(bytes.begin(), bytes.end(), raw.begin());
  return Digest(raw);
}

absl::StatusOr<Digest> Digest::FromHex(std::string_view hex) {
  DCEA_ASSIGN_OR_RETURN(Bytes raw, HexDecode(hex));
  return FromBytes(raw);
}

Digest ComputeDigest(ByteSpan data) {
  std::array<uint8_t, Digest::kSize> out;
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha384(), nullptr);
  return Digest(out);
}

Digest ComputeDigest(std::string_view data) {
  return ComputeDigest(
      ByteSpan(reinterpret_cast<const uint8_t*>(data.data()), data.size()));
}

Digest Extend(const Digest& old, const Digest& event_digest) {
  std::array<uint8_t, 2 * Digest::kSize> buf;
  std::copy(old.bytes().begin(), old.bytes().end(), buf.begin());
  std::copy(event_digest.bytes().begin(), event_digest.bytes().end(),
            buf.begin() + Digest::kSize);
  return ComputeDigest(buf);
}

int64_t Prng::Uniform(int64_t lo, int64_t hi) {
  std::uniform_int_distribution<int64_t> dist(lo, hi);
  return dist(engine_);
}

Bytes Prng::NextBytes(size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<uint8_t>(engine_() & 0xff);
  return out;
}

std::string_view KeyKindName(KeyKind kind) {
  switch (kind) {
    case KeyKind::kEk:
      return "EK";
    case KeyKind::kAk:
      return "AK";
    case KeyKind::kQe:
      return "QE";
    case KeyKind::kCa:
      return "CA";
  }
  return "?";
}

absl::StatusOr<KeyPair> KeyGen(ByteSpan seed, KeyKind kind) {
  if (seed.empty()) {
    return MakeError(ErrorCode::kInvalidSeed, "key seed must be non-empty");
  }
  // Private key = first 32 bytes of a kind-tagged hash of the caller seed.
  Digest material = ComputeDigest(CanonicalEncoder("dcea.keygen.v1")
                                      .AddString(KeyKindName(kind))
                                      .AddBytes(seed)
                                      .bytes());
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                           material.bytes().data(),
                                           kEd25519KeySize));
  if (key == nullptr) {
    return absl::InternalError("Ed25519 key derivation failed");
  }
  KeyPair pair;
  pair.kind = kind;
  pair.private_key.assign(material.bytes().begin(),
                          material.bytes().begin() + kEd25519KeySize);
  pair.public_key.resize(kEd25519KeySize);
  size_t len = kEd25519KeySize;
  if (EVP_PKEY_get_raw_public_key(key.get(), pair.public_key.data(), &len) !=
      1) {
    return absl::InternalError("Ed25519 public key export failed");
  }
  return pair;
}

absl::StatusOr<KeyPair> KeyGen(std::string_view seed, KeyKind kind) {
  return KeyGen(ToBytes(seed), kind);
}

absl::StatusOr<Signature> Sign(ByteSpan private_key, ByteSpan message) {
  if (private_key.size() != kEd25519KeySize) {
    return MakeError(ErrorCode::kInvalidKey, "Ed25519 private key must be 32 bytes");
  }
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                           private_key.data(),
                                           private_key.size()));
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (key == nullptr || ctx == nullptr ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
    return MakeError(ErrorCode::kInvalidKey, "unusable Ed25519 private key");
  }
  Signature sig;
  sig.algorithm = std::string(kSignatureAlgorithm);
  sig.value.resize(kEd25519SignatureSize);
  size_t len = sig.value.size();
  if (EVP_DigestSign(ctx.get(), sig.value.data(), &len, message.data(),
                     message.size()) != 1) {
    return absl::InternalError("Ed25519 signing failed");
  }
  sig.value.resize(len);
  return sig;
}

absl::StatusOr<bool> Verify(ByteSpan public_key, ByteSpan message,
                            const Signature& signature) {
  if (public_key.size() != kEd25519KeySize) {
    return MakeError(ErrorCode::kInvalidKey, "Ed25519 public key must be 32 bytes");
  }
  PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                          public_key.data(), public_key.size()));
  if (key == nullptr) {
    return MakeError(ErrorCode::kInvalidKey, "unusable Ed25519 public key");
  }
  if (signature.algorithm != kSignatureAlgorithm ||
      signature.value.size() != kEd25519SignatureSize) {
    return false;
  }
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (ctx == nullptr ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
          1) {
    return absl::InternalError("Ed25519 verify init failed");
  }
  return EVP_DigestVerify(ctx.get(), signature.value.data(),
                          signature.value.size(), message.data(),
                          message.size()) == 1;
}

std::string KeyId(ByteSpan public_key) {
  Digest d = ComputeDigest(public_key);
  return HexEncode(d.bytes().first(16));
}

Bytes Certificate::SignedPayload() const {
  return CanonicalEncoder("dcea.cert.v1")
      .AddBytes(subject_public)
      .AddString(issuer_id)
      .AddStringMap(claims)
      .Finish();
}

absl::StatusOr<Certificate> IssueCert(const KeyPair& issuer,
                                      ByteSpan subject_public,
                                      const Claims& claims) {
  Certificate cert;
  cert.subject_public.assign(subject_public.begin(), subject_public.end());
  cert.issuer_id = KeyId(issuer.public_key);
  cert.claims = claims;
  DCEA_ASSIGN_OR_RETURN(cert.signature,
                        Sign(issuer.private_key, cert.SignedPayload()));
  return cert;
}

absl::StatusOr<Certificate> SelfSignedRoot(const KeyPair& ca,
                                           const Claims& claims) {
  return IssueCert(ca, ca.public_key, claims);
}

std::string ChainVerdict::ToString() const {
  switch (kind) {
    case Kind::kValid:
      return "Valid";
    case Kind::kUntrustedRoot:
      return "UntrustedRoot";
    case Kind::kBrokenLink:
      return absl::StrCat("BrokenLink(", index, ")");
  }
  return "?";
}

absl::StatusOr<ChainVerdict> VerifyChain(const CertChain& chain,
                                         std::span<const Certificate> roots) {
  if (chain.empty()) {
    return MakeError(ErrorCode::kEmptyChain, "certificate chain is empty");
  }
  auto link_ok = [](const Certificate& cert,
                    ByteSpan parent_key) -> absl::StatusOr<bool> {
    if (cert.issuer_id != KeyId(parent_key)) return false;
    return Verify(parent_key, cert.SignedPayload(), cert.signature);
  };
  for (size_t i = 0; i < chain.size(); ++i) {
    const bool is_root = i + 1 == chain.size();
    ByteSpan parent =
        is_root ? chain[i].subject_public : chain[i + 1].subject_public;
    absl::StatusOr<bool> ok = link_ok(chain[i], parent);
    // A malformed key inside a chain is a broken link, not a caller error.
    if (!ok.ok() || !*ok) {
      return ChainVerdict{ChainVerdict::Kind::kBrokenLink, i};
    }
  }
  const Certificate& root = chain.back();
  bool trusted = std::any_of(roots.begin(), roots.end(),
                             [&](const Certificate& r) { return r == root; });
  if (!trusted) return ChainVerdict{ChainVerdict::Kind::kUntrustedRoot, 0};
  return ChainVerdict{};
}

CanonicalEncoder& CanonicalEncoder::AddBytes(ByteSpan bytes) {
  const uint32_t n = static_cast<uint32_t>(bytes.size());
  out_.push_back(static_cast<uint8_t>(n >> 24));
  out_.push_back(static_cast<uint8_t>(n >> 16));
  out_.push_back(static_cast<uint8_t>(n >> 8));
  out_.push_back(static_cast<uint8_t>(n));
  out_.insert(out_.end(), bytes.begin(), bytes.end());
  return *this;
}

CanonicalEncoder& CanonicalEncoder::AddString(std::string_view text) {
  return AddBytes(
      ByteSpan(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

CanonicalEncoder& CanonicalEncoder::AddInt(int64_t value) {
  std::array<uint8_t, 8> be;
  uint64_t u = static_cast<uint64_t>(value);
  for (int i = 7; i >= 0; --i) {
    be[i] = static_cast<uint8_t>(u & 0xff);
    u >>= 8;
  }
  return AddBytes(be);
}

CanonicalEncoder& CanonicalEncoder::AddStringMap(
    const std::map<std::string, std::string>& m) {
  AddInt(static_cast<int64_t>(m.size()));
  for (const auto& [k, v] : m) {
    AddString(k);
    AddString(v);
  }
  return *this;
}

}  // namespace dcea
