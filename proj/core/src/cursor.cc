/*
 * Copyright 2026 The boundql Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "boundql/cursor.h"

#include <sodium.h>

#include <array>
#include <stdexcept>

#include "boundql/error.h"
#include "boundql/physical_plan.h"
#include "boundql/query.h"

namespace boundql {

namespace {

constexpr uint8_t kVersion = 1;

void ensureSodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium initialisation failed");
}

uint64_t digest64(std::string_view data) {
  ensureSodium();
  std::array<unsigned char, 8> out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(data.data()),
                     data.size(), nullptr, 0);
  uint64_t v = 0;
  for (auto b : out) v = (v << 8) | b;
  return v;
}

void putU64(std::string& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out += static_cast<char>((v >> (i * 8)) & 0xFF);
}

void putBytes(std::string& out, std::string_view s) {
  putU64(out, s.size());
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(data_[pos_++]);
    return v;
  }
  std::string bytes() {
    uint64_t n = u64();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(uint64_t n) {
    if (n > data_.size() - pos_) throw CursorError("corrupted cursor: truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string PageCursor::serialize() const {
  std::string body;
  body += static_cast<char>(kVersion);
  putU64(body, queryId);
  putU64(body, static_cast<uint64_t>(pageSize));
  putU64(body, static_cast<uint64_t>(static_cast<int64_t>(anchorNode)));
  putBytes(body, lastPrefix);
  putBytes(body, lastSuffix);
  putU64(body, static_cast<uint64_t>(ordinal));
  putBytes(body, lastOrderKey);
  putU64(body, digest64(body));
  ensureSodium();
  std::string text(sodium_base64_encoded_len(body.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING), '\0');
  sodium_bin2base64(text.data(), text.size(), reinterpret_cast<const unsigned char*>(body.data()),
                    body.size(), sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  text.resize(text.find('\0'));
  return text;
}

PageCursor PageCursor::deserialize(std::string_view text) {
  ensureSodium();
  std::string body(text.size(), '\0');
  std::size_t len = 0;
  if (sodium_base642bin(reinterpret_cast<unsigned char*>(body.data()), body.size(), text.data(),
                        text.size(), nullptr, &len, nullptr,
                        sodium_base64_VARIANT_URLSAFE_NO_PADDING) != 0)
    throw CursorError("corrupted cursor: not a valid token");
  body.resize(len);
  if (body.size() < 9) throw CursorError("corrupted cursor: truncated");
  if (static_cast<uint8_t>(body[0]) != kVersion)
    throw CursorError("unsupported cursor version " + std::to_string(static_cast<uint8_t>(body[0])));
  std::string_view payload(body.data(), body.size() - 8);
  Reader tail(std::string_view(body).substr(body.size() - 8));
  if (tail.u64() != digest64(payload)) throw CursorError("corrupted cursor: checksum mismatch");
  Reader r(payload.substr(1));
  PageCursor c;
  c.queryId = r.u64();
  c.pageSize = static_cast<int64_t>(r.u64());
  c.anchorNode = static_cast<int>(static_cast<int64_t>(r.u64()));
  c.lastPrefix = r.bytes();
  c.lastSuffix = r.bytes();
  c.ordinal = static_cast<int64_t>(r.u64());
  c.lastOrderKey = r.bytes();
  if (!r.done()) throw CursorError("corrupted cursor: trailing bytes");
  return c;
}

uint64_t queryFingerprint(const PhysicalPlan& plan, const Params& params) {
  std::string s = plan.canonical();
  for (const auto& [name, value] : params.all()) {
    s += "\n" + name + (value.first ? "[]" : "") + "=";
    for (const auto& v : value.second) s += v.toLiteral() + ",";
  }
  return digest64(s);
}

}  // namespace boundql
