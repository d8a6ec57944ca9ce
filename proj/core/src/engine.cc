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
#include <algorithm>
#include <set>

#include "boundql/error.h"
#include "boundql/executor.h"

namespace boundql {

std::string_view toString(WriteStatus s) {
  switch (s) {
    case WriteStatus::kOk:
      return "ok";
    case WriteStatus::kDuplicateKey:
      return "duplicate key";
    case WriteStatus::kCardinalityViolation:
      return "cardinality violation";
    case WriteStatus::kNotFound:
      return "not found";
  }
  return "?";
}

namespace {

// Leading plain fields of the index, as a set of column names, equal the
// constraint attributes.
bool supportsConstraint(const IndexDef& index, const CardinalityConstraint& c) {
  if (index.fields.size() < c.attributes.size()) return false;
  for (std::size_t i = 0; i < c.attributes.size(); ++i) {
    const auto& f = index.fields[i];
    if (f.token) return false;
    bool found = std::any_of(c.attributes.begin(), c.attributes.end(),
                             [&](const std::string& a) { return iequals(a, f.column); });
    if (!found) return false;
  }
  return true;
}

const IndexDef* supportingIndex(const Schema& schema, const CardinalityConstraint& c) {
  for (const IndexDef* idx : schema.indexesOf(c.table))
    if (supportsConstraint(*idx, c)) return idx;
  return nullptr;
}

std::vector<ColumnType> typesOf(const TableDef& t) {
  std::vector<ColumnType> out;
  for (const auto& c : t.columns) out.push_back(c.type);
  return out;
}

struct Entries {
  std::vector<std::pair<KvKey, std::string>> items;
  std::set<KvKey> keys;
};

Entries secondaryEntries(const std::vector<IndexDef>& indexes, const TableDef& table, const Tuple& t) {
  Entries e;
  for (const auto& idx : indexes) {
    std::string value = indexEntryValue(idx, table, t);
    for (auto& k : indexEntryKeys(idx, table, t)) {
      if (e.keys.insert(k).second) e.items.emplace_back(std::move(k), value);
    }
  }
  return e;
}

}  // namespace

Engine::Engine(Schema schema, std::shared_ptr<KvStore> store) : schema_(std::move(schema)), store_(std::move(store)) {
  // Every constraint needs an index to count against at write time.
  for (const auto& c : std::vector<CardinalityConstraint>(schema_.constraints())) {
    if (supportingIndex(schema_, c)) continue;
    IndexDef idx;
    idx.table = c.table;
    for (const auto& a : c.attributes) idx.fields.push_back({schema_.table(c.table).column(a).name, false});
    schema_ = registerIndex(std::move(schema_), std::move(idx));
  }
}

Schema Engine::schema() const {
  std::shared_lock lock(schemaMu_);
  return schema_;
}

CompiledQuery Engine::prepare(std::string_view text, const CompileOptions& options) {
  return prepare(parseQuery(text), options);
}

CompiledQuery Engine::prepare(const QueryAst& ast, const CompileOptions& options) {
  CompiledQuery cq = compile(ast, schema(), options);
  for (const auto& idx : cq.indexes)
    if (!idx.primary) ensureIndex(idx);
  return cq;
}

void Engine::ensureIndex(const IndexDef& index) {
  std::unique_lock lock(schemaMu_);
  const std::size_t before = schema_.indexes().size();
  schema_ = registerIndex(std::move(schema_), index);
  if (schema_.indexes().size() == before) return;
  const IndexDef added = schema_.indexes().back();
  const TableDef& table = schema_.table(added.table);
  const auto types = typesOf(table);
  KeyRange range = KeyRange::prefix(indexKeyPrefix(schema_.primaryIndex(table.name)));
  while (true) {
    auto recs = store_->getRange(range, 1000, Direction::kAscending);
    for (const auto& r : recs) {
      Tuple t = decodeTuple(r.value, types);
      std::string value = indexEntryValue(added, table, t);
      for (const auto& k : indexEntryKeys(added, table, t)) store_->put(k, value);
    }
    if (recs.size() < 1000) break;
    range.start = keySuccessor(recs.back().key);
  }
}

Tuple Engine::checkTuple(const TableDef& table, Tuple tuple) const {
  if (tuple.size() != table.columns.size())
    throw TypeError("table " + table.name + " has " + std::to_string(table.columns.size()) + " columns, got " +
                    std::to_string(tuple.size()) + " values");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const ColumnDef& c = table.columns[i];
    tuple[i] = tuple[i].coerceTo(c.type);
    if (c.type == ColumnType::kString) {
      uint32_t max = c.maxLength ? c.maxLength : kDefaultStringLength;
      if (tuple[i].asString().size() > max)
        throw TypeError("value for " + table.name + "." + c.name + " exceeds " + std::to_string(max) + " bytes");
    }
  }
  return tuple;
}

WriteResult Engine::insertTuple(std::string_view tableName, Tuple tuple) {
  const TableDef table = schema().table(tableName);
  return write(table, std::nullopt, checkTuple(table, std::move(tuple)));
}

WriteResult Engine::updateTuple(std::string_view tableName, Tuple tuple) {
  const TableDef table = schema().table(tableName);
  Tuple after = checkTuple(table, std::move(tuple));
  auto current = store_->get(recordKey(table, after));
  if (!current) return {WriteStatus::kNotFound, "no " + table.name + " record with that key"};
  return write(table, decodeTuple(*current, typesOf(table)), after);
}

WriteResult Engine::write(const TableDef& table, const std::optional<Tuple>& before, const Tuple& after) {
  Schema s = schema();
  std::vector<IndexDef> secondary;
  for (const IndexDef* idx : s.indexesOf(table.name))
    if (!idx->primary) secondary.push_back(*idx);
  const KvKey key = recordKey(table, after);
  const std::string newValue = encodeTuple(after);
  std::optional<std::string> oldValue;
  if (before) oldValue = encodeTuple(*before);

  Entries next = secondaryEntries(secondary, table, after);
  Entries prev;
  if (before) prev = secondaryEntries(secondary, table, *before);

  step(WriteStep::kIndexInsert);
  for (const auto& [k, v] : next.items) store_->put(k, v);

  step(WriteStep::kRecordWrite);
  if (!store_->testAndSet(key, oldValue, newValue)) {
    // Lost the race or the key exists: drop only entries nobody else owns.
    std::set<KvKey> keep;
    if (auto existing = store_->get(key))
      keep = secondaryEntries(secondary, table, decodeTuple(*existing, typesOf(table))).keys;
    for (const auto& [k, v] : next.items)
      if (!keep.count(k) && !prev.keys.count(k)) store_->erase(k);
    if (!before) return {WriteStatus::kDuplicateKey, "duplicate primary key in " + table.name};
    return {WriteStatus::kNotFound, table.name + " record changed concurrently"};
  }

  step(WriteStep::kIndexCleanup);
  for (const auto& [k, v] : prev.items)
    if (!next.keys.count(k)) store_->erase(k);

  step(WriteStep::kCardinalityCheck);
  for (const CardinalityConstraint* c : s.constraintsOf(table.name)) {
    bool changed = !before;
    for (const auto& a : c->attributes) {
      auto i = *table.columnIndex(a);
      if (before && (*before)[i] != after[i]) changed = true;
    }
    if (!changed) continue;
    const IndexDef* idx = supportingIndex(s, *c);
    if (!idx) throw Error("internal: no index supports constraint on " + table.name);
    KvKey prefix = indexKeyPrefix(*idx);
    for (std::size_t i = 0; i < c->attributes.size(); ++i)
      appendKeyField(prefix, after[*table.columnIndex(idx->fields[i].column)]);
    const auto count = static_cast<int64_t>(store_->countRange(KeyRange::prefix(prefix)));
    if (count > c->limit) {
      store_->testAndSet(key, newValue, oldValue);
      for (const auto& [k, v] : next.items)
        if (!prev.keys.count(k)) store_->erase(k);
      for (const auto& [k, v] : prev.items) store_->put(k, v);
      std::string attrs;
      for (const auto& a : c->attributes) attrs += (attrs.empty() ? "" : ", ") + a;
      return {WriteStatus::kCardinalityViolation, table.name + "(" + attrs + ") would have " + std::to_string(count) +
                                                      " tuples; limit is " + std::to_string(c->limit)};
    }
  }
  return {};
}

WriteResult Engine::deleteTuple(std::string_view tableName, const Tuple& primaryKey) {
  Schema s = schema();
  const TableDef& table = s.table(tableName);
  const auto pkIdx = table.primaryKeyIndexes();
  if (primaryKey.size() != pkIdx.size()) throw TypeError("primary key of " + table.name + " has " +
                                                         std::to_string(pkIdx.size()) + " columns");
  std::string suffix;
  for (std::size_t i = 0; i < pkIdx.size(); ++i)
    appendKeyField(suffix, primaryKey[i].coerceTo(table.columns[pkIdx[i]].type));
  const KvKey key = recordKeyFromSuffix(table, suffix);
  auto current = store_->get(key);
  if (!current) return {WriteStatus::kNotFound, "no " + table.name + " record with that key"};
  Tuple old = decodeTuple(*current, typesOf(table));
  step(WriteStep::kRecordWrite);
  if (!store_->testAndSet(key, current, std::nullopt))
    return {WriteStatus::kNotFound, table.name + " record changed concurrently"};
  step(WriteStep::kIndexCleanup);
  for (const IndexDef* idx : s.indexesOf(table.name)) {
    if (idx->primary) continue;
    for (const auto& k : indexEntryKeys(*idx, table, old)) store_->erase(k);
  }
  return {};
}

void Engine::bulkLoad(std::string_view tableName, const std::vector<Tuple>& tuples) {
  Schema s = schema();
  const TableDef& table = s.table(tableName);
  std::vector<IndexDef> secondary;
  for (const IndexDef* idx : s.indexesOf(table.name))
    if (!idx->primary) secondary.push_back(*idx);
  for (const auto& raw : tuples) {
    Tuple t = checkTuple(table, raw);
    for (const auto& [k, v] : secondaryEntries(secondary, table, t).items) store_->put(k, v);
    store_->put(recordKey(table, t), encodeTuple(t));
  }
}

std::size_t Engine::sweepDanglingEntries() {
  Schema s = schema();
  std::size_t removed = 0;
  for (const auto& idx : s.indexes()) {
    if (idx.primary) continue;
    const TableDef& table = s.table(idx.table);
    const auto types = typesOf(table);
    KeyRange range = KeyRange::prefix(indexKeyPrefix(idx));
    while (true) {
      auto recs = store_->getRange(range, 1000, Direction::kAscending);
      for (const auto& r : recs) {
        KvKey key = idx.covering ? recordKey(table, decodeTuple(r.value, types)) : recordKeyFromSuffix(table, r.value);
        auto base = store_->get(key);
        if (!base || !tupleMatchesEntry(idx, table, decodeTuple(*base, types), r.key) ||
            (idx.covering && *base != r.value)) {
          store_->erase(r.key);
          ++removed;
        }
      }
      if (recs.size() < 1000) break;
      range.start = keySuccessor(recs.back().key);
    }
  }
  return removed;
}

}  // namespace boundql
