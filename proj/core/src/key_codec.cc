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
#include "boundql/key_codec.h"

#include <cstdint>

#include "boundql/error.h"

namespace boundql {

int compareKeys(std::string_view a, std::string_view b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto x = static_cast<unsigned char>(a[i]);
    auto y = static_cast<unsigned char>(b[i]);
    if (x != y) return x < y ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

void appendKeyField(std::string& out, const Value& value, bool descending) {
  std::size_t start = out.size();
  switch (value.type()) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp: {
      auto u = static_cast<uint64_t>(value.asInt()) ^ (uint64_t{1} << 63);
      for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<char>((u >> shift) & 0xFF));
      break;
    }
    case ColumnType::kBool:
      out.push_back(value.asBool() ? '\x01' : '\x00');
      break;
    case ColumnType::kString:
      for (char c : value.asString()) {
        out.push_back(c);
        if (c == '\0') out.push_back('\xFF');
      }
      out.push_back('\x00');
      out.push_back('\x01');
      break;
  }
  if (descending)
    for (std::size_t i = start; i < out.size(); ++i) out[i] = static_cast<char>(~out[i]);
}

KvKey encodeKey(std::span<const Value> values, std::span<const ColumnType> types,
                std::span<const bool> descending) {
  if (!types.empty() && types.size() < values.size())
    throw TypeError("more key values than declared field types");
  if (!descending.empty() && descending.size() < values.size())
    throw TypeError("more key values than descending flags");
  KvKey out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool desc = !descending.empty() && descending[i];
    if (types.empty()) {
      appendKeyField(out, values[i], desc);
    } else {
      appendKeyField(out, values[i].coerceTo(types[i]), desc);
    }
  }
  return out;
}

namespace {

unsigned char byteAt(std::string_view key, std::size_t i, bool desc) {
  if (i >= key.size()) throw TypeError("truncated key encoding");
  auto b = static_cast<unsigned char>(key[i]);
  return desc ? static_cast<unsigned char>(~b) : b;
}

}  // namespace

std::vector<Value> decodeKey(std::string_view key, std::span<const ColumnType> types,
                             std::span<const bool> descending, std::size_t* consumed) {
  std::vector<Value> out;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < types.size(); ++f) {
    bool desc = !descending.empty() && descending[f];
    switch (types[f]) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp: {
        uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u = (u << 8) | byteAt(key, pos + i, desc);
        pos += 8;
        auto v = static_cast<int64_t>(u ^ (uint64_t{1} << 63));
        out.push_back(types[f] == ColumnType::kInt64 ? Value::int64(v) : Value::timestamp(v));
        break;
      }
      case ColumnType::kBool:
        out.push_back(Value::boolean(byteAt(key, pos++, desc) != 0));
        break;
      case ColumnType::kString: {
        std::string s;
        while (true) {
          unsigned char b = byteAt(key, pos++, desc);
          if (b != 0) {
            s.push_back(static_cast<char>(b));
            continue;
          }
          unsigned char next = byteAt(key, pos++, desc);
          if (next == 0xFF) {
            s.push_back('\0');
          } else if (next == 0x01) {
            break;
          } else {
            throw TypeError("corrupt string key encoding");
          }
        }
        out.push_back(Value::string(std::move(s)));
        break;
      }
    }
  }
  if (consumed) *consumed = pos;
  return out;
}

std::optional<KvKey> prefixSuccessor(std::string_view prefix) {
  std::string out(prefix);
  while (!out.empty()) {
    auto last = static_cast<unsigned char>(out.back());
    if (last != 0xFF) {
      out.back() = static_cast<char>(last + 1);
      return out;
    }
    out.pop_back();
  }
  return std::nullopt;
}

std::string encodeTuple(std::span<const Value> tuple) {
  std::string out;
  std::string field;
  for (const auto& v : tuple) {
    field.clear();
    appendKeyField(field, v);
    auto n = static_cast<uint32_t>(field.size());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xFF));
    out += field;
  }
  return out;
}

Tuple decodeTuple(std::string_view bytes, std::span<const ColumnType> types) {
  Tuple out;
  std::size_t pos = 0;
  for (auto type : types) {
    if (pos + 4 > bytes.size()) throw TypeError("truncated tuple encoding");
    uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(bytes[pos + i]);
    pos += 4;
    if (pos + n > bytes.size()) throw TypeError("truncated tuple encoding");
    std::size_t used = 0;
    ColumnType t[] = {type};
    auto vals = decodeKey(bytes.substr(pos, n), t, {}, &used);
    if (used != n) throw TypeError("tuple field length mismatch");
    out.push_back(std::move(vals[0]));
    pos += n;
  }
  if (pos != bytes.size()) throw TypeError("trailing bytes in tuple encoding");
  return out;
}

}  // namespace boundql
