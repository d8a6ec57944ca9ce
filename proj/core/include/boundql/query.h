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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/value.h"

namespace boundql {

// Possibly qualified column reference as written in the query text.
struct ColumnRef {
  std::string qualifier;  // table name or alias; empty when unqualified
  std::string column;

  std::string toString() const { return qualifier.empty() ? column : qualifier + "." + column; }
  friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

// Placeholder written [k: name]. IN-lists declare their maximum length as
// [k: name MAX n].
struct ParamRef {
  int ordinal = 0;
  std::string name;
  std::optional<int64_t> maxItems;

  std::string toString() const;
  friend bool operator==(const ParamRef&, const ParamRef&) = default;
};

struct Operand {
  enum class Kind { kLiteral, kParam, kColumn };
  Kind kind = Kind::kLiteral;
  Value literal;
  ParamRef param;
  ColumnRef column;

  static Operand ofLiteral(Value v) { return {Kind::kLiteral, std::move(v), {}, {}}; }
  static Operand ofParam(ParamRef p) { return {Kind::kParam, {}, std::move(p), {}}; }
  static Operand ofColumn(ColumnRef c) { return {Kind::kColumn, {}, {}, std::move(c)}; }

  std::string toString() const;
  friend bool operator==(const Operand&, const Operand&) = default;
};

enum class PredicateKind { kEquality, kInequality, kTokenMatch, kJoinEquality, kInList };
enum class CompareOp { kEq, kLt, kLe, kGt, kGe };

std::string_view toString(PredicateKind kind);
std::string_view toString(CompareOp op);
// a op b  <=>  b flip(op) a
CompareOp flip(CompareOp op);

struct Predicate {
  PredicateKind kind = PredicateKind::kEquality;
  ColumnRef lhs;
  CompareOp op = CompareOp::kEq;
  // kTokenMatch: a single-word string literal or a parameter.
  // kInList: a parameter with maxItems set.
  Operand rhs;

  std::string toString() const;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class AggregateFn { kCount, kSum, kMin, kMax };
std::string_view toString(AggregateFn fn);

struct Projection {
  enum class Kind { kStar, kTableStar, kColumn, kAggregate };
  Kind kind = Kind::kStar;
  ColumnRef column;  // kTableStar uses qualifier only
  AggregateFn fn = AggregateFn::kCount;
  bool countStar = false;

  std::string toString() const;
  friend bool operator==(const Projection&, const Projection&) = default;
};

struct TableRef {
  std::string table;
  std::string alias;  // empty when none

  const std::string& visibleName() const { return alias.empty() ? table : alias; }
  friend bool operator==(const TableRef&, const TableRef&) = default;
};

struct OrderKey {
  ColumnRef column;
  bool descending = false;

  friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

enum class StopKind { kLimit, kPaginate };
std::string_view toString(StopKind kind);

struct LimitClause {
  StopKind kind = StopKind::kLimit;
  int64_t count = 1;

  friend bool operator==(const LimitClause&, const LimitClause&) = default;
};

struct QueryAst {
  std::vector<Projection> projections;
  std::vector<TableRef> relations;
  std::vector<Predicate> predicates;
  std::vector<ColumnRef> groupBy;
  std::vector<OrderKey> ordering;
  std::optional<LimitClause> limit;

  bool hasAggregates() const;
  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

QueryAst parseQuery(std::string_view source);
// Splits a file holding several statements separated by ';'.
std::vector<QueryAst> parseQueries(std::string_view source);
std::string renderQuery(const QueryAst& ast);

// Runtime parameter values keyed by parameter name.
class Params {
 public:
  Params& set(std::string name, Value value);
  Params& setList(std::string name, std::vector<Value> values);

  bool has(std::string_view name) const { return values_.find(name) != values_.end(); }
  bool isList(std::string_view name) const;
  // Scalar parameters yield a one-element vector.
  const std::vector<Value>& get(std::string_view name) const;  // throws QueryError
  const std::map<std::string, std::pair<bool, std::vector<Value>>, std::less<>>& all() const {
    return values_;
  }

 private:
  std::map<std::string, std::pair<bool, std::vector<Value>>, std::less<>> values_;
};

}  // namespace boundql
