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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/logical_plan.h"

namespace boundql {

enum class PhysicalOp {
  kIndexScan,
  kIndexFKJoin,
  kSortedIndexJoin,
  kLocalSelection,
  kLocalSort,
  kLocalStop,
  kLocalAggregate,
};
std::string_view toString(PhysicalOp op);
bool isRemote(PhysicalOp op);

// One leading index field fixed before the request is issued.
struct KeyPart {
  enum class Source { kValue, kList, kToken, kJoin };
  Source source = Source::kValue;
  IndexField field;
  ColumnType type = ColumnType::kInt64;
  BoundOperand value;  // kValue, kList (parameter), kToken
  AttrRef joinAttr;    // kJoin: column of the outer row
};

// Where a remote operator's limit hint comes from.
enum class BoundSource { kNone, kPrimaryKey, kConstraint, kStop };

struct PhysicalNode {
  PhysicalOp op = PhysicalOp::kLocalStop;
  int id = 0;
  int logicalId = -1;

  // Remote operators.
  int rel = -1;
  IndexDef index;
  std::vector<ColumnType> fieldTypes;  // one per index field
  std::vector<KeyPart> prefix;
  std::vector<int> rangePreds;  // inequalities on the field after the prefix
  bool descending = false;
  std::optional<int64_t> limitHint;  // per probe / per key; empty = unbounded scan
  int64_t probes = 1;                // IndexScan IN-list fan-out
  bool covering = true;
  bool pointGet = false;  // prefix is the whole primary key: use get
  std::vector<int> residual;  // predicates re-checked on fetched tuples
  BoundSource boundSource = BoundSource::kNone;

  // Local operators.
  int pred = -1;
  std::vector<SortKey> keys;
  int64_t count = 0;
  StopKind stopKind = StopKind::kLimit;

  // Static maximum number of rows produced; empty when unbounded.
  std::optional<int64_t> outputBound;

  std::vector<std::shared_ptr<PhysicalNode>> children;

  const PhysicalNode* child() const { return children.empty() ? nullptr : children[0].get(); }
};

struct OperatorBound {
  int nodeId = 0;
  std::string op;
  std::optional<int64_t> requests;  // empty = unbounded
  std::optional<int64_t> tuples;
};

struct OperationBound {
  bool bounded = true;
  int64_t maxRequests = 0;
  int64_t maxTuples = 0;
  std::vector<OperatorBound> perOperator;
};

enum class ScalingClass { kConstant, kBounded, kRejected };
std::string_view toString(ScalingClass c);  // "I", "II", "III/IV (unbounded)"

struct ScalingClassReport {
  ScalingClass scalingClass = ScalingClass::kConstant;
  std::string reason;
  std::vector<std::string> suggestions;
};

class PhysicalPlan {
 public:
  PhysicalPlan() = default;
  PhysicalPlan(std::shared_ptr<const BoundQuery> query, std::shared_ptr<PhysicalNode> root);

  const BoundQuery& query() const { return *query_; }
  std::shared_ptr<const BoundQuery> sharedQuery() const { return query_; }
  const PhysicalNode* root() const { return root_.get(); }
  const PhysicalNode* find(int id) const;
  std::vector<const PhysicalNode*> nodes() const;  // pre-order

  bool paginated() const {
    return root_ && root_->op == PhysicalOp::kLocalStop && root_->stopKind == StopKind::kPaginate;
  }

  std::string describe(const PhysicalNode& node) const;
  // Indented tree; with a bound each remote node shows its request/tuple share.
  std::string toString(const OperationBound* bound = nullptr) const;
  std::string toJson(const OperationBound* bound = nullptr) const;
  // Stable text identifying the plan, used to tie cursors to their query.
  std::string canonical() const;

 private:
  std::shared_ptr<const BoundQuery> query_;
  std::shared_ptr<PhysicalNode> root_;
};

}  // namespace boundql
