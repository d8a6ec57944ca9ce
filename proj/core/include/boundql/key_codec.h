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
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/value.h"

namespace boundql {

// Keys are raw byte strings compared lexicographically as unsigned bytes
// (std::string comparison after the char_traits cast is not enough, so use
// compareKeys).
using KvKey = std::string;

int compareKeys(std::string_view a, std::string_view b);

// Order-preserving encoding of one field:
//   int64/timestamp  8 bytes big-endian with the sign bit flipped
//   bool             1 byte (0 or 1)
//   string           bytes with 0x00 escaped as 0x00 0xFF, terminated 0x00 0x01
// A descending field has every byte of its encoding complemented.
void appendKeyField(std::string& out, const Value& value, bool descending = false);

// Encodes values in order. When types is non-empty every value must be
// coercible to its declared type (TypeError otherwise). descending may be
// empty (all ascending) or one flag per value.
KvKey encodeKey(std::span<const Value> values, std::span<const ColumnType> types = {},
                std::span<const bool> descending = {});

// Decodes as many fields as types has entries. consumed receives the byte
// length of the decoded portion.
std::vector<Value> decodeKey(std::string_view key, std::span<const ColumnType> types,
                             std::span<const bool> descending = {},
                             std::size_t* consumed = nullptr);

// Smallest key strictly greater than every key that starts with prefix, or
// nullopt when no such key exists (prefix is all 0xFF).
std::optional<KvKey> prefixSuccessor(std::string_view prefix);

// Immediate successor of a key in byte order (key + 0x00).
inline KvKey keySuccessor(std::string_view key) { return std::string(key) + '\0'; }

// Tuple payload: per field a 4-byte big-endian length then the key encoding.
std::string encodeTuple(std::span<const Value> tuple);
Tuple decodeTuple(std::string_view bytes, std::span<const ColumnType> types);

}  // namespace boundql
