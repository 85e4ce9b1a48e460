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

#ifndef DCEA_CANONICAL_H_
#define DCEA_CANONICAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "dcea/crypto.h"

namespace dcea {

// Length-prefixed field concatenation used for every signed payload.
//
// Each field is written as a 4-byte big-endian length followed by the field
// bytes. Integers are 8-byte big-endian two's complement. A string map is a
// count field followed by alternating key/value fields in ascending key
// order. The first field of every payload is an ASCII domain tag. See
// docs/canonical-encoding.md.
class CanonicalEncoder {
 public:
  explicit CanonicalEncoder(std::string_view domain_tag) {
    AddString(domain_tag);
  }

  CanonicalEncoder& AddBytes(ByteSpan bytes);
  CanonicalEncoder& AddString(std::string_view text);
  CanonicalEncoder& AddInt(int64_t value);
  CanonicalEncoder& AddDigest(const Digest& digest) {
    return AddBytes(digest.bytes());
  }
  CanonicalEncoder& AddStringMap(const std::map<std::string, std::string>& m);

  const Bytes& bytes() const { return out_; }
  Bytes Finish() { return std::move(out_); }

 private:
  Bytes out_;
};

}  // namespace dcea

#endif  // DCEA_CANONICAL_H_
