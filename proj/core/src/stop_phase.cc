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
#include "boundql/stop_phase.h"

#include <algorithm>

#include "boundql/logical_planner.h"

namespace boundql {

namespace {

bool hasColumn(const std::vector<std::size_t>& cols, std::size_t c) {
  return std::find(cols.begin(), cols.end(), c) != cols.end();
}

// Finds the DataStop choice for a branch of selections over one scan.
struct DataStopChoice {
  bool found = false;
  bool primary = false;
  int64_t limit = 0;
  std::vector<std::size_t> cols;
};

DataStopChoice chooseDataStop(const TableDef& table, const Schema& schema,
                              const std::vector<std::size_t>& bound) {
  DataStopChoice best;
  auto resolveAll = [&](const std::vector<std::string>& attrs, std::vector<std::size_t>& out) {
    out.clear();
    for (const auto& a : attrs) {
      auto idx = table.columnIndex(a);
      if (!idx || !hasColumn(bound, *idx)) return false;
      out.push_back(*idx);
    }
    return true;
  };
  std::vector<std::size_t> cols;
  if (resolveAll(table.primaryKey, cols)) return {true, true, 1, cols};
  for (const auto* c : schema.constraintsOf(table.name)) {
    if (!resolveAll(c->attributes, cols)) continue;
    if (!best.found || c->limit < best.limit) best = {true, false, c->limit, cols};
  }
  return best;
}

std::unique_ptr<LogicalNode> insertInBranch(std::unique_ptr<LogicalNode> node, const BoundQuery& q,
                                            const Schema& schema) {
  if (node->op != LogicalOp::kSelection && node->op != LogicalOp::kRelationScan) {
    for (auto& c : node->children) c = insertInBranch(std::move(c), q, schema);
    return node;
  }
  // Branch: Selection* RelationScan.
  std::vector<std::unique_ptr<LogicalNode>> sels;
  std::unique_ptr<LogicalNode> cur = std::move(node);
  while (cur->op == LogicalOp::kSelection) {
    auto child = std::move(cur->children[0]);
    cur->children.clear();
    sels.push_back(std::move(cur));
    cur = std::move(child);
  }
  const int rel = cur->rel;
  std::vector<std::size_t> bound;
  for (const auto& s : sels) {
    const auto& p = q.predicates[s->preds[0]];
    if (p.bindsValue() && !hasColumn(bound, p.lhs.col)) bound.push_back(p.lhs.col);
  }
  DataStopChoice choice = chooseDataStop(q.relations[rel].table, schema, bound);
  auto causes = [&](const LogicalNode& s) {
    const auto& p = q.predicates[s.preds[0]];
    return choice.found && p.bindsValue() && hasColumn(choice.cols, p.lhs.col);
  };
  // Rebuild: causing selections lowest, the rest above in their old order.
  std::vector<std::unique_ptr<LogicalNode>> causing, others;
  for (auto& s : sels) (causes(*s) ? causing : others).push_back(std::move(s));
  auto wrap = [&](std::vector<std::unique_ptr<LogicalNode>>& list) {
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      (*it)->children.push_back(std::move(cur));
      cur = std::move(*it);
    }
  };
  wrap(causing);
  if (choice.found) {
    auto ds = LogicalNode::make(LogicalOp::kDataStop);
    ds->rel = rel;
    ds->count = choice.limit;
    ds->fromPrimaryKey = choice.primary;
    for (auto c : choice.cols) ds->causingAttrs.push_back(q.relations[rel].table.columns[c].name);
    // One probe per combination of IN-list values on causing attributes.
    std::vector<std::size_t> seen;
    for (const auto& p : q.predicates)
      if (p.lhs.rel == rel && p.kind == PredicateKind::kInList && hasColumn(choice.cols, p.lhs.col) &&
          !hasColumn(seen, p.lhs.col)) {
        ds->probes *= p.maxItems;
        seen.push_back(p.lhs.col);
      }
    // DataStop goes above every selection of the branch; pushdown sinks it.
    wrap(others);
    ds->children.push_back(std::move(cur));
    return ds;
  }
  wrap(others);
  return cur;
}

bool causedBy(const LogicalNode& ds, const BoundQuery& q, int pred) {
  const auto& p = q.predicates[pred];
  if (p.lhs.rel != ds.rel) return false;
  const auto& name = q.column(p.lhs).name;
  return std::find(ds.causingAttrs.begin(), ds.causingAttrs.end(), name) != ds.causingAttrs.end();
}

std::unique_ptr<LogicalNode> sinkDataStops(std::unique_ptr<LogicalNode> node, const BoundQuery& q) {
  for (auto& c : node->children) c = sinkDataStops(std::move(c), q);
  if (node->op != LogicalOp::kDataStop) return node;
  // Swap downward while the child is a non-causing selection.
  std::unique_ptr<LogicalNode> top;
  LogicalNode* attach = nullptr;
  while (node->children[0]->op == LogicalOp::kSelection && !causedBy(*node, q, node->children[0]->preds[0])) {
    auto sel = std::move(node->children[0]);
    node->children[0] = std::move(sel->children[0]);
    sel->children.clear();
    LogicalNode* raw = sel.get();
    if (!top) {
      top = std::move(sel);
    } else {
      attach->children.push_back(std::move(sel));
    }
    attach = raw;
  }
  if (!top) return node;
  attach->children.push_back(std::move(node));
  return top;
}

bool keyPreserving(const LogicalNode& join, const BoundQuery& q) {
  const LogicalNode& right = *join.children[1];
  if (right.op != LogicalOp::kRelationScan) return false;
  const TableDef& table = q.relations[right.rel].table;
  std::vector<std::size_t> joined;
  for (int pi : join.preds) {
    const auto& p = q.predicates[pi];
    if (p.lhs.rel == right.rel) joined.push_back(p.lhs.col);
    if (p.rhs.column.rel == right.rel) joined.push_back(p.rhs.column.col);
  }
  for (auto idx : table.primaryKeyIndexes())
    if (!hasColumn(joined, idx)) return false;
  return true;
}

void pushStop(LogicalNode& stop, const BoundQuery& q) {
  LogicalNode* below = stop.children[0].get();
  const LogicalNode* sort = nullptr;
  if (below->op == LogicalOp::kSort) {
    sort = below;
    below = below->children[0].get();
  }
  if (below->op != LogicalOp::kJoin || !keyPreserving(*below, q)) return;
  auto left = relationsBelow(*below->children[0]);
  if (sort)
    for (const auto& k : sort->keys)
      if (!left.count(k.attr.rel)) return;
  auto copy = LogicalNode::make(LogicalOp::kStop);
  copy->count = stop.count;
  copy->stopKind = stop.stopKind;
  std::unique_ptr<LogicalNode> inner = std::move(below->children[0]);
  if (sort) {
    auto s = LogicalNode::make(LogicalOp::kSort);
    s->keys = sort->keys;
    s->children.push_back(std::move(inner));
    inner = std::move(s);
  }
  copy->children.push_back(std::move(inner));
  LogicalNode* raw = copy.get();
  below->children[0] = std::move(copy);
  // The join keeps the left order, so the outer Sort is redundant.
  if (sort) stop.children[0] = std::move(stop.children[0]->children[0]);
  pushStop(*raw, q);
}

}  // namespace

LogicalPlan insertDataStops(LogicalPlan plan, const Schema& schema) {
  auto root = insertInBranch(std::move(plan.rootSlot()), plan.query(), schema);
  return LogicalPlan(plan.sharedQuery(), std::move(root));
}

LogicalPlan stopPushDown(LogicalPlan plan, const Schema&) {
  auto root = sinkDataStops(std::move(plan.rootSlot()), plan.query());
  if (root->op == LogicalOp::kStop) pushStop(*root, plan.query());
  return LogicalPlan(plan.sharedQuery(), std::move(root));
}

LogicalPlan optimizeLogical(const BoundQuery& query, const Schema& schema) {
  LogicalPlan plan = predicatePushDown(findLinearJoinOrdering(query, schema));
  return stopPushDown(insertDataStops(std::move(plan), schema), schema);
}

}  // namespace boundql
