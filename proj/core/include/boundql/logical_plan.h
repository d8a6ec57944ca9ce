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

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/query.h"

namespace boundql {

// Column of one FROM relation: rel indexes BoundQuery::relations.
struct AttrRef {
  int rel = -1;
  std::size_t col = 0;

  friend bool operator==(const AttrRef&, const AttrRef&) = default;
  friend auto operator<=>(const AttrRef&, const AttrRef&) = default;
};

struct BoundOperand {
  Operand::Kind kind = Operand::Kind::kLiteral;
  Value literal;      // coerced to the compared column's type
  std::string param;  // parameter name
  AttrRef column;
};

struct BoundPredicate {
  PredicateKind kind = PredicateKind::kEquality;
  CompareOp op = CompareOp::kEq;
  AttrRef lhs;
  BoundOperand rhs;
  int64_t maxItems = 1;  // IN-list length
  // Evaluated client-side only (IN-lists under cost-based compilation).
  bool localOnly = false;

  // Equality against a literal, parameter or bounded list: fixes lhs to a
  // known finite set of values before execution.
  bool bindsValue() const {
    return !localOnly && (kind == PredicateKind::kEquality || kind == PredicateKind::kInList);
  }
};

struct RelationInfo {
  TableDef table;
  std::string alias;  // visible name (alias or table name)
};

struct SortKey {
  AttrRef attr;
  bool descending = false;

  friend bool operator==(const SortKey&, const SortKey&) = default;
};

struct AggregateSpec {
  AggregateFn fn = AggregateFn::kCount;
  bool countStar = false;
  AttrRef attr;
  ColumnType type = ColumnType::kInt64;  // result type
};

struct OutputColumn {
  std::string name;
  ColumnType type = ColumnType::kInt64;
  std::optional<AttrRef> attr;  // plain column
  std::size_t aggregate = 0;    // index into aggregates otherwise
};

struct ParamInfo {
  std::string name;
  int ordinal = 0;
  ColumnType type = ColumnType::kInt64;
  bool list = false;
  int64_t maxItems = 1;
};

// A query resolved against a schema: every column reference points at a
// relation and column index, literals carry the compared column's type.
struct BoundQuery {
  QueryAst ast;
  std::vector<RelationInfo> relations;
  std::vector<BoundPredicate> predicates;
  std::vector<OutputColumn> outputs;
  std::vector<AttrRef> groupBy;
  std::vector<AggregateSpec> aggregates;
  std::vector<SortKey> ordering;
  std::optional<LimitClause> limit;
  std::vector<ParamInfo> params;

  const ColumnDef& column(AttrRef a) const { return relations[a.rel].table.columns[a.col]; }
  std::string attrName(AttrRef a) const;
  std::string predicateText(int pred) const;
  const ParamInfo* findParam(std::string_view name) const;
  const ParamInfo* findParam(int ordinal) const;
};

BoundQuery bindQuery(const QueryAst& ast, const Schema& schema);

enum class LogicalOp { kRelationScan, kSelection, kJoin, kSort, kStop, kDataStop, kAggregate };
std::string_view toString(LogicalOp op);

struct LogicalNode {
  LogicalOp op = LogicalOp::kRelationScan;
  int id = 0;
  int rel = -1;            // RelationScan and DataStop
  std::vector<int> preds;  // Selection: one predicate; Join: its join predicates
  std::vector<SortKey> keys;
  int64_t count = 0;  // Stop, DataStop (per probe)
  StopKind stopKind = StopKind::kLimit;
  // DataStop provenance.
  std::vector<std::string> causingAttrs;
  bool fromPrimaryKey = false;
  int64_t probes = 1;  // IN-list fan-out multiplying count
  std::vector<std::unique_ptr<LogicalNode>> children;

  static std::unique_ptr<LogicalNode> make(LogicalOp op);
  std::unique_ptr<LogicalNode> clone() const;
  LogicalNode* child(std::size_t i = 0) const { return children.at(i).get(); }
  int64_t total() const { return count * probes; }
};

class LogicalPlan {
 public:
  LogicalPlan() = default;
  LogicalPlan(std::shared_ptr<const BoundQuery> query, std::unique_ptr<LogicalNode> root)
      : query_(std::move(query)), root_(std::move(root)) {
    renumber();
  }
  LogicalPlan(const LogicalPlan& other);
  LogicalPlan& operator=(const LogicalPlan& other);
  LogicalPlan(LogicalPlan&&) = default;
  LogicalPlan& operator=(LogicalPlan&&) = default;

  const BoundQuery& query() const { return *query_; }
  std::shared_ptr<const BoundQuery> sharedQuery() const { return query_; }
  LogicalNode* root() const { return root_.get(); }
  std::unique_ptr<LogicalNode>& rootSlot() { return root_; }

  void renumber();
  const LogicalNode* find(int id) const;
  // Indented operator tree; nodes whose id is in highlight get a ">>" marker.
  std::string toString(const std::set<int>& highlight = {}) const;
  std::string describe(const LogicalNode& node) const;

 private:
  std::shared_ptr<const BoundQuery> query_;
  std::unique_ptr<LogicalNode> root_;
};

// Relation index of every RelationScan below node.
std::set<int> relationsBelow(const LogicalNode& node);

}  // namespace boundql
