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
#include "boundql/index_layout.h"

#include <algorithm>
#include <cctype>

namespace boundql {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

KvKey indexKeyPrefix(const IndexDef& index) {
  KvKey k;
  appendKeyField(k, Value::string(index.primary ? index.table : index.name()));
  return k;
}

std::string primaryKeySuffix(const TableDef& table, const Tuple& tuple) {
  std::string s;
  for (auto idx : table.primaryKeyIndexes()) appendKeyField(s, tuple.at(idx));
  return s;
}

KvKey recordKey(const TableDef& table, const Tuple& tuple) {
  KvKey k;
  appendKeyField(k, Value::string(table.name));
  return k + primaryKeySuffix(table, tuple);
}

KvKey recordKeyFromSuffix(const TableDef& table, std::string_view pkSuffix) {
  KvKey k;
  appendKeyField(k, Value::string(table.name));
  k.append(pkSuffix);
  return k;
}

std::vector<KvKey> indexEntryKeys(const IndexDef& index, const TableDef& table, const Tuple& tuple) {
  std::vector<KvKey> keys{indexKeyPrefix(index)};
  for (const auto& f : index.fields) {
    const Value& v = tuple.at(*table.columnIndex(f.column));
    if (!f.token) {
      for (auto& k : keys) appendKeyField(k, v);
      continue;
    }
    auto tokens = tokenize(v.asString());
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    std::vector<KvKey> next;
    for (const auto& k : keys)
      for (const auto& t : tokens) {
        KvKey e = k;
        appendKeyField(e, Value::string(t));
        next.push_back(std::move(e));
      }
    keys = std::move(next);
  }
  return keys;
}

std::string indexEntryValue(const IndexDef& index, const TableDef& table, const Tuple& tuple) {
  if (index.primary || index.covering) return encodeTuple(tuple);
  return primaryKeySuffix(table, tuple);
}

bool tupleMatchesEntry(const IndexDef& index, const TableDef& table, const Tuple& tuple,
                       std::string_view entryKey) {
  for (const auto& k : indexEntryKeys(index, table, tuple))
    if (k == entryKey) return true;
  return false;
}

}  // namespace boundql
