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

#include <string>
#include <string_view>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/key_codec.h"

namespace boundql {

// Lowercased alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

// Key space of an index: the encoded index name. The primary index of a
// table is named after the table, so base records live under the table name.
KvKey indexKeyPrefix(const IndexDef& index);

// Encoded primary-key fields of a tuple (no index prefix).
std::string primaryKeySuffix(const TableDef& table, const Tuple& tuple);
KvKey recordKey(const TableDef& table, const Tuple& tuple);
KvKey recordKeyFromSuffix(const TableDef& table, std::string_view pkSuffix);

// Every key the tuple contributes to the index; token fields expand to one
// entry per distinct token.
std::vector<KvKey> indexEntryKeys(const IndexDef& index, const TableDef& table, const Tuple& tuple);
// Covering entries hold the tuple, others the primary-key suffix.
std::string indexEntryValue(const IndexDef& index, const TableDef& table, const Tuple& tuple);

// Whether the tuple would produce the given entry key in the index. Used to
// recognise stale entries left behind by interrupted writes.
bool tupleMatchesEntry(const IndexDef& index, const TableDef& table, const Tuple& tuple,
                       std::string_view entryKey);

}  // namespace boundql
