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

#include "dcea/json_util.h"

#include "absl/strings/str_cat.h"
#include "dcea/status.h"

namespace dcea::json_util {

absl::StatusOr<Json> ParseText(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    return MakeError(ErrorCode::kParseError,
                     absl::StrCat("syntax error at byte offset ", e.byte, ": ",
                                  e.what()));
  }
}

std::string Dump(const Json& value) { return value.dump(2) + "\n"; }

absl::Status FieldError(std::string_view path, std::string_view message) {
  return MakeError(ErrorCode::kParseError,
                   absl::StrCat("at ", path.empty() ? "/" : std::string(path), ": ",
                                std::string(message)));
}

std::string Join(std::string_view path, std::string_view key) {
  return absl::StrCat(std::string(path), "/", std::string(key));
}

std::string Join(std::string_view path, size_t index) {
  return absl::StrCat(std::string(path), "/", index);
}

absl::StatusOr<const Json*> Field(const Json& obj, std::string_view key,
                                  std::string_view path) {
  if (!obj.is_object()) return FieldError(path, "expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return FieldError(Join(path, key), "missing field");
  return &*it;
}

absl::StatusOr<std::string> GetString(const Json& obj, std::string_view key,
                                      std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(const Json* v, Field(obj, key, path));
  if (!v->is_string()) return FieldError(Join(path, key), "expected a string");
  return v->get<std::string>();
}

absl::StatusOr<int64_t> GetInt(const Json& obj, std::string_view key,
                               std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(const Json* v, Field(obj, key, path));
  if (!v->is_number_integer()) {
    return FieldError(Join(path, key), "expected an integer");
  }
  return v->get<int64_t>();
}

absl::StatusOr<bool> GetBool(const Json& obj, std::string_view key,
                             std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(const Json* v, Field(obj, key, path));
  if (!v->is_boolean()) return FieldError(Join(path, key), "expected a boolean");
  return v->get<bool>();
}

absl::StatusOr<Bytes> GetHex(const Json& obj, std::string_view key,
                             std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(std::string text, GetString(obj, key, path));
  absl::StatusOr<Bytes> raw = HexDecode(text);
  if (!raw.ok()) return FieldError(Join(path, key), StatusMessage(raw.status()));
  return raw;
}

absl::StatusOr<Digest> GetDigest(const Json& obj, std::string_view key,
                                 std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(Bytes raw, GetHex(obj, key, path));
  absl::StatusOr<Digest> d = Digest::FromBytes(raw);
  if (!d.ok()) return FieldError(Join(path, key), StatusMessage(d.status()));
  return d;
}

absl::StatusOr<std::map<std::string, std::string>> GetStringMap(
    const Json& obj, std::string_view key, std::string_view path) {
  DCEA_ASSIGN_OR_RETURN(const Json* v, Field(obj, key, path));
  if (!v->is_object()) return FieldError(Join(path, key), "expected an object");
  std::map<std::string, std::string> out;
  for (auto it = v->begin(); it != v->end(); ++it) {
    if (!it.value().is_string()) {
      return FieldError(Join(Join(path, key), it.key()), "expected a string");
    }
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

Json SignatureToJson(const Signature& sig) {
  return Json{{"algorithm", sig.algorithm}, {"value", HexEncode(sig.value)}};
}

absl::StatusOr<Signature> SignatureFromJson(const Json& j, std::string_view path) {
  Signature sig;
  DCEA_ASSIGN_OR_RETURN(sig.algorithm, GetString(j, "algorithm", path));
  DCEA_ASSIGN_OR_RETURN(sig.value, GetHex(j, "value", path));
  return sig;
}

Json CertToJson(const Certificate& cert) {
  return Json{{"claims", cert.claims},
              {"issuer_id", cert.issuer_id},
              {"signature", SignatureToJson(cert.signature)},
              {"subject_public", HexEncode(cert.subject_public)}};
}

absl::StatusOr<Certificate> CertFromJson(const Json& j, std::string_view path) {
  Certificate cert;
  DCEA_ASSIGN_OR_RETURN(cert.claims, GetStringMap(j, "claims", path));
  DCEA_ASSIGN_OR_RETURN(cert.issuer_id, GetString(j, "issuer_id", path));
  DCEA_ASSIGN_OR_RETURN(const Json* sig, Field(j, "signature", path));
  DCEA_ASSIGN_OR_RETURN(cert.signature,
                        SignatureFromJson(*sig, Join(path, "signature")));
  DCEA_ASSIGN_OR_RETURN(cert.subject_public, GetHex(j, "subject_public", path));
  return cert;
}

Json ChainToJson(const CertChain& chain) {
  Json out = Json::array();
  for (const auto& cert : chain) out.push_back(CertToJson(cert));
  return out;
}

absl::StatusOr<CertChain> ChainFromJson(const Json& j, std::string_view path) {
  if (!j.is_array()) return FieldError(path, "expected an array");
  CertChain chain;
  for (size_t i = 0; i < j.size(); ++i) {
    DCEA_ASSIGN_OR_RETURN(Certificate cert, CertFromJson(j[i], Join(path, i)));
    chain.push_back(std::move(cert));
  }
  return chain;
}

}  // namespace dcea::json_util
