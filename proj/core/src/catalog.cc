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
#include "boundql/catalog.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "boundql/error.h"
#include "lexer.h"

namespace boundql {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<std::size_t> TableDef::columnIndex(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (iequals(columns[i].name, column)) return i;
  return std::nullopt;
}

const ColumnDef& TableDef::column(std::string_view column) const {
  auto idx = columnIndex(column);
  if (!idx) throw SchemaError("unknown column " + name + "." + std::string(column));
  return columns[*idx];
}

bool TableDef::isPrimaryKeyColumn(std::string_view column) const {
  return std::any_of(primaryKey.begin(), primaryKey.end(),
                     [&](const std::string& pk) { return iequals(pk, column); });
}

std::vector<std::size_t> TableDef::primaryKeyIndexes() const {
  std::vector<std::size_t> out;
  for (const auto& pk : primaryKey) out.push_back(*columnIndex(pk));
  return out;
}

std::size_t TableDef::maxTupleBytes() const {
  std::size_t total = 0;
  for (const auto& c : columns) {
    switch (c.type) {
      case ColumnType::kInt64:
      case ColumnType::kTimestamp:
        total += 8;
        break;
      case ColumnType::kBool:
        total += 1;
        break;
      case ColumnType::kString:
        total += c.maxLength ? c.maxLength : kDefaultStringLength;
        break;
    }
  }
  return total;
}

std::string IndexDef::fieldList() const {
  std::string out = "(";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ", ";
    out += fields[i].toString();
  }
  return out + ")";
}

std::string IndexDef::name() const {
  if (primary) return table;
  std::string out = table + "(";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += fields[i].toString();
  }
  return out + ")";
}

bool IndexDef::hasTokenField() const {
  return std::any_of(fields.begin(), fields.end(), [](const IndexField& f) { return f.token; });
}

const TableDef* Schema::findTable(std::string_view name) const {
  for (const auto& t : tables_)
    if (iequals(t.name, name)) return &t;
  return nullptr;
}

const TableDef& Schema::table(std::string_view name) const {
  const TableDef* t = findTable(name);
  if (!t) throw SchemaError("unknown table " + std::string(name));
  return *t;
}

const IndexDef& Schema::primaryIndex(std::string_view table) const {
  for (const auto& idx : indexes_)
    if (idx.primary && iequals(idx.table, table)) return idx;
  throw SchemaError("no primary index for table " + std::string(table));
}

std::vector<const IndexDef*> Schema::indexesOf(std::string_view table) const {
  std::vector<const IndexDef*> out;
  for (const auto& idx : indexes_)
    if (iequals(idx.table, table)) out.push_back(&idx);
  return out;
}

std::vector<const CardinalityConstraint*> Schema::constraintsOf(std::string_view table) const {
  std::vector<const CardinalityConstraint*> out;
  for (const auto& c : constraints_)
    if (iequals(c.table, table)) out.push_back(&c);
  return out;
}

void Schema::addTable(TableDef table) {
  if (findTable(table.name)) throw SchemaError("duplicate table " + table.name);
  if (table.columns.empty()) throw SchemaError("table " + table.name + " has no columns");
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (iequals(table.columns[i].name, table.columns[j].name))
        throw SchemaError("duplicate column " + table.name + "." + table.columns[i].name);
  if (table.primaryKey.empty())
    throw SchemaError("table " + table.name + " has no PRIMARY KEY");
  std::set<std::string> seen;
  for (auto& pk : table.primaryKey) {
    auto idx = table.columnIndex(pk);
    if (!idx) throw SchemaError("primary key references unknown column " + table.name + "." + pk);
    pk = table.columns[*idx].name;
    if (!seen.insert(pk).second)
      throw SchemaError("primary key repeats column " + table.name + "." + pk);
  }
  IndexDef primary;
  primary.table = table.name;
  for (const auto& pk : table.primaryKey) primary.fields.push_back({pk, false});
  primary.covering = true;
  primary.primary = true;
  tables_.push_back(std::move(table));
  indexes_.push_back(std::move(primary));
}

void Schema::addConstraint(CardinalityConstraint constraint) {
  const TableDef* t = findTable(constraint.table);
  if (!t) throw SchemaError("constraint references unknown table " + constraint.table);
  constraint.table = t->name;
  if (constraint.limit < 1) throw SchemaError("cardinality limit must be ≥ 1");
  if (constraint.attributes.empty())
    throw SchemaError("cardinality constraint on " + t->name + " has no attributes");
  std::set<std::string> attrs;
  for (auto& a : constraint.attributes) {
    auto idx = t->columnIndex(a);
    if (!idx)
      throw SchemaError("cardinality constraint references unknown column " + t->name + "." + a);
    a = t->columns[*idx].name;
    if (!attrs.insert(a).second)
      throw SchemaError("cardinality constraint repeats column " + t->name + "." + a);
  }
  std::set<std::string> pk(t->primaryKey.begin(), t->primaryKey.end());
  if (attrs == pk)
    throw SchemaError("cardinality constraint on the full primary key of " + t->name +
                      " is redundant (primary keys are unique)");
  constraints_.push_back(std::move(constraint));
}

bool Schema::addIndex(IndexDef index) {
  const TableDef& t = table(index.table);
  index.table = t.name;
  if (index.fields.empty()) throw SchemaError("index on " + t.name + " has no fields");
  for (auto& f : index.fields) {
    auto idx = t.columnIndex(f.column);
    if (!idx) throw SchemaError("index references unknown column " + t.name + "." + f.column);
    f.column = t.columns[*idx].name;
    if (f.token && t.columns[*idx].type != ColumnType::kString)
      throw SchemaError("token() index field requires a string column: " + f.column);
  }
  for (const auto& existing : indexes_)
    if (existing.table == index.table && existing.fields == index.fields) return false;
  indexes_.push_back(std::move(index));
  return true;
}

void Schema::removeConstraint(std::string_view table, const std::vector<std::string>& attrs) {
  std::set<std::string> target;
  for (const auto& a : attrs) target.insert(a);
  std::erase_if(constraints_, [&](const CardinalityConstraint& c) {
    if (!iequals(c.table, table)) return false;
    std::set<std::string> have;
    for (const auto& a : c.attributes) have.insert(a);
    if (have.size() != target.size()) return false;
    return std::equal(have.begin(), have.end(), target.begin(),
                      [](const std::string& x, const std::string& y) { return iequals(x, y); });
  });
}

Schema registerIndex(Schema schema, IndexDef index) {
  const TableDef& t = schema.table(index.table);
  for (const auto& f : index.fields)
    if (!t.hasColumn(f.column))
      throw SchemaError("index references unknown column " + t.name + "." + f.column);
  if (!index.covering) {
    for (const auto& pk : t.primaryKey) {
      bool present = std::any_of(index.fields.begin(), index.fields.end(), [&](const IndexField& f) {
        return !f.token && iequals(f.column, pk);
      });
      if (!present) index.fields.push_back({pk, false});
    }
  }
  // The primary index already covers its own field list.
  const IndexDef& primary = schema.primaryIndex(t.name);
  std::vector<IndexField> normalized = index.fields;
  for (auto& f : normalized) f.column = t.column(f.column).name;
  if (normalized == primary.fields) return schema;
  schema.addIndex(std::move(index));
  return schema;
}

namespace {

using detail::TokenKind;
using detail::TokenStream;

std::vector<std::string> parseIdentList(TokenStream& ts) {
  std::vector<std::string> out;
  ts.expectSymbol("(");
  do {
    out.push_back(ts.expectIdent("column name"));
  } while (ts.acceptSymbol(","));
  ts.expectSymbol(")");
  return out;
}

void parseCreateTable(TokenStream& ts, Schema& schema) {
  ts.expectKeyword("CREATE");
  ts.expectKeyword("TABLE");
  const auto& nameTok = ts.peek();
  TableDef table;
  table.name = ts.expectIdent("table name");
  if (schema.findTable(table.name)) TokenStream::fail("duplicate table " + table.name, nameTok);
  ts.expectSymbol("(");
  std::vector<std::pair<CardinalityConstraint, detail::Token>> constraints;
  bool havePk = false;
  do {
    const detail::Token start = ts.peek();
    if (ts.isKeyword("PRIMARY") && ts.isKeyword("KEY", 1)) {
      ts.next();
      ts.next();
      if (havePk) TokenStream::fail("duplicate PRIMARY KEY clause", start);
      table.primaryKey = parseIdentList(ts);
      havePk = true;
    } else if (ts.isKeyword("CARDINALITY") && ts.isKeyword("LIMIT", 1)) {
      ts.next();
      ts.next();
      CardinalityConstraint c;
      c.table = table.name;
      bool negative = ts.acceptSymbol("-");
      c.limit = ts.expectInteger("cardinality limit");
      if (negative) c.limit = -c.limit;
      c.attributes = parseIdentList(ts);
      constraints.emplace_back(std::move(c), start);
    } else {
      ColumnDef col;
      col.name = ts.expectIdent("column definition");
      if (table.hasColumn(col.name)) TokenStream::fail("duplicate column " + col.name, start);
      const detail::Token typeTok = ts.peek();
      std::string typeName = ts.expectIdent("column type");
      auto type = columnTypeFromString(typeName);
      if (!type) TokenStream::fail("unknown column type " + typeName, typeTok);
      col.type = *type;
      if (ts.acceptSymbol("(")) {
        int64_t len = ts.expectInteger("type length");
        ts.expectSymbol(")");
        if (col.type == ColumnType::kString) {
          if (len < 1) TokenStream::fail("string length must be ≥ 1", typeTok);
          col.maxLength = static_cast<uint32_t>(len);
        }
      }
      table.columns.push_back(std::move(col));
    }
  } while (ts.acceptSymbol(","));
  ts.expectSymbol(")");
  if (!havePk) TokenStream::fail("table " + table.name + " has no PRIMARY KEY clause", nameTok);
  for (const auto& pk : table.primaryKey)
    if (!table.hasColumn(pk))
      TokenStream::fail("primary key references unknown column " + pk, nameTok);
  std::string tableName = table.name;
  schema.addTable(std::move(table));
  for (auto& [c, tok] : constraints) {
    for (const auto& a : c.attributes)
      if (!schema.table(tableName).hasColumn(a))
        TokenStream::fail("cardinality constraint references unknown column " + a, tok);
    schema.addConstraint(std::move(c));
  }
}

}  // namespace

Schema parseDdl(std::string_view source) {
  TokenStream ts(detail::lex(source));
  Schema schema;
  while (!ts.atEnd()) {
    if (ts.acceptSymbol(";")) continue;
    parseCreateTable(ts, schema);
  }
  return schema;
}

std::string renderDdl(const Schema& schema) {
  std::ostringstream out;
  for (const auto& t : schema.tables()) {
    out << "CREATE TABLE " << t.name << " (\n";
    for (const auto& c : t.columns) {
      out << "  " << c.name << " " << toString(c.type);
      if (c.type == ColumnType::kString && c.maxLength) out << "(" << c.maxLength << ")";
      out << ",\n";
    }
    out << "  PRIMARY KEY (";
    for (std::size_t i = 0; i < t.primaryKey.size(); ++i) out << (i ? ", " : "") << t.primaryKey[i];
    out << ")";
    for (const auto* c : schema.constraintsOf(t.name)) {
      out << ",\n  CARDINALITY LIMIT " << c->limit << " (";
      for (std::size_t i = 0; i < c->attributes.size(); ++i)
        out << (i ? ", " : "") << c->attributes[i];
      out << ")";
    }
    out << "\n);\n";
  }
  return out.str();
}

std::string schemaToJson(const Schema& schema) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : schema.tables()) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) {
      nlohmann::ordered_json jc;
      jc["name"] = c.name;
      jc["type"] = std::string(toString(c.type));
      if (c.maxLength) jc["max_length"] = c.maxLength;
      jt["columns"].push_back(jc);
    }
    jt["primary_key"] = t.primaryKey;
    doc["tables"].push_back(jt);
  }
  doc["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : schema.constraints()) {
    doc["constraints"].push_back(
        {{"table", c.table}, {"attributes", c.attributes}, {"limit", c.limit}});
  }
  doc["indexes"] = nlohmann::ordered_json::array();
  for (const auto& idx : schema.indexes()) {
    nlohmann::ordered_json ji;
    ji["table"] = idx.table;
    ji["fields"] = nlohmann::ordered_json::array();
    for (const auto& f : idx.fields) ji["fields"].push_back({{"column", f.column}, {"token", f.token}});
    ji["covering"] = idx.covering;
    ji["primary"] = idx.primary;
    doc["indexes"].push_back(ji);
  }
  return doc.dump(2);
}

Schema schemaFromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid schema document: ") + e.what());
  }
  try {
    Schema schema;
    for (const auto& jt : doc.at("tables")) {
      TableDef t;
      t.name = jt.at("name").get<std::string>();
      for (const auto& jc : jt.at("columns")) {
        ColumnDef c;
        c.name = jc.at("name").get<std::string>();
        auto type = columnTypeFromString(jc.at("type").get<std::string>());
        if (!type) throw SchemaError("unknown column type in schema document");
        c.type = *type;
        c.maxLength = jc.value("max_length", 0u);
        t.columns.push_back(c);
      }
      t.primaryKey = jt.at("primary_key").get<std::vector<std::string>>();
      schema.addTable(std::move(t));
    }
    for (const auto& jc : doc.at("constraints")) {
      schema.addConstraint({jc.at("table").get<std::string>(),
                            jc.at("attributes").get<std::vector<std::string>>(),
                            jc.at("limit").get<int64_t>()});
    }
    for (const auto& ji : doc.at("indexes")) {
      if (ji.value("primary", false)) continue;
      IndexDef idx;
      idx.table = ji.at("table").get<std::string>();
      for (const auto& jf : ji.at("fields"))
        idx.fields.push_back({jf.at("column").get<std::string>(), jf.value("token", false)});
      idx.covering = ji.value("covering", false);
      schema.addIndex(std::move(idx));
    }
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid schema document: ") + e.what());
  }
}

}  // namespace boundql
