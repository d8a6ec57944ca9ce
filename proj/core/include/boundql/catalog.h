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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/value.h"

namespace boundql {

bool iequals(std::string_view a, std::string_view b);

struct ColumnDef {
  std::string name;
  ColumnType type = ColumnType::kInt64;
  // Declared maximum length for strings (VARCHAR(n)); 0 means the default.
  uint32_t maxLength = 0;

  friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

inline constexpr uint32_t kDefaultStringLength = 255;

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<std::string> primaryKey;

  std::optional<std::size_t> columnIndex(std::string_view column) const;
  const ColumnDef& column(std::string_view column) const;
  bool hasColumn(std::string_view column) const { return columnIndex(column).has_value(); }
  bool isPrimaryKeyColumn(std::string_view column) const;
  std::vector<std::size_t> primaryKeyIndexes() const;
  // Worst-case payload size of one tuple in bytes, from declared types.
  std::size_t maxTupleBytes() const;

  friend bool operator==(const TableDef&, const TableDef&) = default;
};

// At most 'limit' tuples of 'table' may share one value combination of
// 'attributes'.
struct CardinalityConstraint {
  std::string table;
  std::vector<std::string> attributes;
  int64_t limit = 1;

  friend bool operator==(const CardinalityConstraint&,
                         const CardinalityConstraint&) = default;
};

struct IndexField {
  std::string column;
  bool token = false;  // token(column): one entry per word of the value

  std::string toString() const { return token ? "token(" + column + ")" : column; }
  friend bool operator==(const IndexField&, const IndexField&) = default;
};

struct IndexDef {
  std::string table;
  std::vector<IndexField> fields;
  bool covering = false;
  bool primary = false;

  // Stable identifier; also the key-space prefix of the index in the store.
  std::string name() const;
  std::string fieldList() const;  // "(token(I_TITLE), I_TITLE, I_ID)"
  bool hasTokenField() const;

  friend bool operator==(const IndexDef&, const IndexDef&) = default;
};

class Schema {
 public:
  const std::vector<TableDef>& tables() const { return tables_; }
  const std::vector<CardinalityConstraint>& constraints() const { return constraints_; }
  const std::vector<IndexDef>& indexes() const { return indexes_; }

  const TableDef* findTable(std::string_view name) const;
  const TableDef& table(std::string_view name) const;  // throws SchemaError
  const IndexDef& primaryIndex(std::string_view table) const;
  std::vector<const IndexDef*> indexesOf(std::string_view table) const;
  std::vector<const CardinalityConstraint*> constraintsOf(std::string_view table) const;

  // Builders used by the DDL parser and tooling; all validate.
  void addTable(TableDef table);
  void addConstraint(CardinalityConstraint constraint);
  // Returns false when an index with the same table and field list exists.
  bool addIndex(IndexDef index);
  // Drops every constraint on the table whose attribute set equals attrs.
  void removeConstraint(std::string_view table, const std::vector<std::string>& attrs);

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<TableDef> tables_;
  std::vector<CardinalityConstraint> constraints_;
  std::vector<IndexDef> indexes_;
};

// CREATE TABLE statements, PRIMARY KEY and CARDINALITY LIMIT clauses.
Schema parseDdl(std::string_view source);
std::string renderDdl(const Schema& schema);

// Adds the index unless one with an equal field list exists. Non-covering
// indexes get any missing primary-key columns appended so entries identify
// their base tuple.
Schema registerIndex(Schema schema, IndexDef index);

std::string schemaToJson(const Schema& schema);
Schema schemaFromJson(std::string_view json);

}  // namespace boundql
