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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/error.h"
#include "boundql/logical_plan.h"
#include "boundql/physical_plan.h"

namespace boundql {

struct CompileOptions {
  // Cost-based mode: unbounded index scans are allowed and IN-lists are
  // filtered client-side. Plans compiled this way are not scale-independent.
  bool unsafe = false;
};

// No bounded remote operator covers part of the plan.
class NotScaleIndependent : public Error {
 public:
  NotScaleIndependent(LogicalPlan plan, int nodeId, int relation, std::vector<int> section,
                      std::vector<std::string> reasons);

  const LogicalPlan& plan() const { return plan_; }
  int nodeId() const { return nodeId_; }
  int relation() const { return relation_; }  // offending relation index
  // Logical node ids of the unmatched section (failing node and the local
  // operators planned directly above it).
  const std::vector<int>& section() const { return section_; }
  // Why the nearest remote operator patterns did not match.
  const std::vector<std::string>& reasons() const { return reasons_; }

 private:
  LogicalPlan plan_;
  int nodeId_;
  int relation_;
  std::vector<int> section_;
  std::vector<std::string> reasons_;
};

struct RemoteMatch {
  std::shared_ptr<PhysicalNode> op;
  const LogicalNode* remaining = nullptr;  // input still to be planned
  const LogicalNode* stop = nullptr;       // standard Stop consumed by the match
};

// Longest Figure-4 style pattern rooted at section: IndexScan, IndexFKJoin or
// SortedIndexJoin. Reasons for rejected candidates are appended to why.
std::optional<RemoteMatch> matchRemoteOperator(const LogicalNode& section, const BoundQuery& query,
                                               const Schema& schema, const CompileOptions& options,
                                               std::vector<std::string>* why = nullptr);

PhysicalPlan planGenerate(const LogicalPlan& plan, const Schema& schema,
                          const CompileOptions& options = {});

OperationBound computeOperationBound(const PhysicalPlan& plan);

// Distinct indexes read by the plan's remote operators.
std::vector<IndexDef> selectIndexes(const PhysicalPlan& plan, const Schema& schema);

ScalingClassReport classifyPlan(const PhysicalPlan& plan, const OperationBound& bound);

struct CompiledQuery {
  LogicalPlan logical;
  PhysicalPlan physical;
  OperationBound bound;
  std::vector<IndexDef> indexes;
  ScalingClassReport report;

  const BoundQuery& query() const { return physical.query(); }
  std::string explain() const;
};

CompiledQuery compile(const QueryAst& ast, const Schema& schema, const CompileOptions& options = {});
CompiledQuery compile(std::string_view text, const Schema& schema, const CompileOptions& options = {});

}  // namespace boundql
