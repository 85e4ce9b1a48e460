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

// Helpers for the hex-in-JSON file dialect shared by bundles, policies,
// verdicts and scenario configs. Readers report failures as ParseError with
// the JSON path of the offending field.

#ifndef DCEA_JSON_UTIL_H_
#define DCEA_JSON_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "dcea/crypto.h"
#include "json.hpp"

namespace dcea::json_util {

using Json = nlohmann::json;

// Parses text; syntax errors report the byte offset.
absl::StatusOr<Json> ParseText(std::string_view text);

// Two-space indented, keys in ascending order, trailing newline.
std::string Dump(const Json& value);

absl::Status FieldError(std::string_view path, std::string_view message);

absl::StatusOr<const Json*> Field(const Json& obj, std::string_view key,
                                  std::string_view path);
absl::StatusOr<std::string> GetString(const Json& obj, std::string_view key,
                                      std::string_view path);
absl::StatusOr<int64_t> GetInt(const Json& obj, std::string_view key,
                               std::string_view path);
absl::StatusOr<bool> GetBool(const Json& obj, std::string_view key,
                             std::string_view path);
absl::StatusOr<Bytes> GetHex(const Json& obj, std::string_view key,
                             std::string_view path);
absl::StatusOr<Digest> GetDigest(const Json& obj, std::string_view key,
                                 std::string_view path);
template <size_t N>
absl::StatusOr<std::array<uint8_t, N>> GetFixedHex(const Json& obj,
                                                   std::string_view key,
                                                   std::string_view path);
absl::StatusOr<std::map<std::string, std::string>> GetStringMap(
    const Json& obj, std::string_view key, std::string_view path);

std::string Join(std::string_view path, std::string_view key);
std::string Join(std::string_view path, size_t index);

Json SignatureToJson(const Signature& sig);
absl::StatusOr<Signature> SignatureFromJson(const Json& j, std::string_view path);
Json CertToJson(const Certificate& cert);
absl::StatusOr<Certificate> CertFromJson(const Json& j, std::string_view path);
Json ChainToJson(const CertChain& chain);
absl::StatusOr<CertChain> ChainFromJson(const Json& j, std::string_view path);

template <size_t N>
absl::StatusOr<std::array<uint8_t, N>> GetFixedHex(const Json& obj,
                                                   std::string_view key,
                                                   std::string_view path) {
  absl::StatusOr<Bytes> raw = GetHex(obj, key, path);
  if (!raw.ok()) return raw.status();
  if (raw->size() != N) {
    return FieldError(Join(path, key), "wrong byte width");
  }
  std::array<uint8_t, N> out;
  std::copy(raw->begin(), raw->end(), out.begin());
  return out;
}

}  // namespace dcea::json_util

#endif  // DCEA_JSON_UTIL_H_
