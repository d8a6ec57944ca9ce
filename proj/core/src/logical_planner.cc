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
#include "boundql/logical_planner.h"

#include <algorithm>
#include <map>

#include "boundql/error.h"

namespace boundql {

std::vector<std::size_t> boundEqualityColumns(const BoundQuery& q, int rel) {
  std::vector<std::size_t> out;
  for (const auto& p : q.predicates)
    if (p.lhs.rel == rel && p.bindsValue() &&
        std::find(out.begin(), out.end(), p.lhs.col) == out.end())
      out.push_back(p.lhs.col);
  return out;
}

bool coversKeyOrConstraint(const TableDef& table, const Schema& schema,
                           const std::vector<std::size_t>& cols) {
  auto covers = [&](const std::vector<std::string>& attrs) {
    for (const auto& a : attrs) {
      auto idx = table.columnIndex(a);
      if (!idx || std::find(cols.begin(), cols.end(), *idx) == cols.end()) return false;
    }
    return true;
  };
  if (covers(table.primaryKey)) return true;
  for (const auto* c : schema.constraintsOf(table.name))
    if (covers(c->attributes)) return true;
  return false;
}

LogicalPlan findLinearJoinOrdering(const BoundQuery& query, const Schema& schema) {
  auto q = std::make_shared<const BoundQuery>(query);
  const int n = static_cast<int>(q->relations.size());

  auto rank = [&](int r) {
    if (coversKeyOrConstraint(q->relations[r].table, schema, boundEqualityColumns(*q, r))) return 0;
    if (q->limit)
      for (const auto& p : q->predicates)
        if (p.lhs.rel == r && p.kind != PredicateKind::kJoinEquality) return 1;
    return 2;
  };
  int first = 0;
  for (int r = 1; r < n; ++r)
    if (rank(r) < rank(first)) first = r;

  std::vector<int> order{first};
  std::vector<bool> placed(n, false);
  placed[first] = true;
  auto joinPredsWith = [&](int r) {
    std::vector<int> preds;
    for (std::size_t i = 0; i < q->predicates.size(); ++i) {
      const auto& p = q->predicates[i];
      if (p.kind != PredicateKind::kJoinEquality) continue;
      int a = p.lhs.rel, b = p.rhs.column.rel;
      if ((a == r && placed[b]) || (b == r && placed[a])) preds.push_back(static_cast<int>(i));
    }
    return preds;
  };

  std::unique_ptr<LogicalNode> tree = LogicalNode::make(LogicalOp::kRelationScan);
  tree->rel = first;
  for (int step = 1; step < n; ++step) {
    int next = -1;
    std::vector<int> preds;
    for (int r = 0; r < n && next < 0; ++r) {
      if (placed[r]) continue;
      preds = joinPredsWith(r);
      if (!preds.empty()) next = r;
    }
    if (next < 0) {
      for (int r = 0; r < n; ++r)
        if (!placed[r])
          throw QueryError("relation " + q->relations[r].alias +
                           " is not connected to the rest of the query by a join predicate; "
                           "cross products are not supported");
    }
    auto join = LogicalNode::make(LogicalOp::kJoin);
    join->preds = preds;
    auto scan = LogicalNode::make(LogicalOp::kRelationScan);
    scan->rel = next;
    join->children.push_back(std::move(tree));
    join->children.push_back(std::move(scan));
    tree = std::move(join);
    placed[next] = true;
    order.push_back(next);
  }

  // Single-relation predicates, first one outermost so pushdown can stack
  // them in original order.
  for (int i = static_cast<int>(q->predicates.size()) - 1; i >= 0; --i) {
    if (q->predicates[i].kind == PredicateKind::kJoinEquality) continue;
    auto sel = LogicalNode::make(LogicalOp::kSelection);
    sel->preds = {i};
    sel->children.push_back(std::move(tree));
    tree = std::move(sel);
  }
  if (q->ast.hasAggregates()) {
    auto agg = LogicalNode::make(LogicalOp::kAggregate);
    agg->children.push_back(std::move(tree));
    tree = std::move(agg);
  }
  if (!q->ordering.empty()) {
    auto sort = LogicalNode::make(LogicalOp::kSort);
    sort->keys = q->ordering;
    sort->children.push_back(std::move(tree));
    tree = std::move(sort);
  }
  if (q->limit) {
    auto stop = LogicalNode::make(LogicalOp::kStop);
    stop->count = q->limit->count;
    stop->stopKind = q->limit->kind;
    stop->children.push_back(std::move(tree));
    tree = std::move(stop);
  }
  return LogicalPlan(std::move(q), std::move(tree));
}

namespace {

std::unique_ptr<LogicalNode> strip(std::unique_ptr<LogicalNode> node, std::vector<int>& collected) {
  if (node->op == LogicalOp::kSelection) {
    collected.insert(collected.end(), node->preds.begin(), node->preds.end());
    return strip(std::move(node->children[0]), collected);
  }
  for (auto& c : node->children) c = strip(std::move(c), collected);
  return node;
}

std::unique_ptr<LogicalNode> place(std::unique_ptr<LogicalNode> node, const BoundQuery& q,
                                   const std::vector<int>& preds) {
  if (node->op == LogicalOp::kRelationScan) {
    // The earliest predicate ends up nearest the scan.
    const int rel = node->rel;
    for (auto it = preds.rbegin(); it != preds.rend(); ++it) {
      if (q.predicates[*it].lhs.rel != rel) continue;
      auto sel = LogicalNode::make(LogicalOp::kSelection);
      sel->preds = {*it};
      sel->children.push_back(std::move(node));
      node = std::move(sel);
    }
    return node;
  }
  for (auto& c : node->children) c = place(std::move(c), q, preds);
  return node;
}

}  // namespace

LogicalPlan predicatePushDown(LogicalPlan plan) {
  std::vector<int> preds;
  auto root = strip(std::move(plan.rootSlot()), preds);
  std::reverse(preds.begin(), preds.end());
  root = place(std::move(root), plan.query(), preds);
  return LogicalPlan(plan.sharedQuery(), std::move(root));
}

}  // namespace boundql
