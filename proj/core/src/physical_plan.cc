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
#include "boundql/physical_plan.h"

#include <functional>

#include <nlohmann/json.hpp>

namespace boundql {

std::string_view toString(PhysicalOp op) {
  switch (op) {
    case PhysicalOp::kIndexScan:
      return "IndexScan";
    case PhysicalOp::kIndexFKJoin:
      return "IndexFKJoin";
    case PhysicalOp::kSortedIndexJoin:
      return "SortedIndexJoin";
    case PhysicalOp::kLocalSelection:
      return "LocalSelection";
    case PhysicalOp::kLocalSort:
      return "LocalSort";
    case PhysicalOp::kLocalStop:
      return "LocalStop";
    case PhysicalOp::kLocalAggregate:
      return "LocalAggregate";
  }
  return "?";
}

bool isRemote(PhysicalOp op) {
  return op == PhysicalOp::kIndexScan || op == PhysicalOp::kIndexFKJoin ||
         op == PhysicalOp::kSortedIndexJoin;
}

std::string_view toString(ScalingClass c) {
  switch (c) {
    case ScalingClass::kConstant:
      return "I";
    case ScalingClass::kBounded:
      return "II";
    case ScalingClass::kRejected:
      return "III/IV (unbounded)";
  }
  return "?";
}

PhysicalPlan::PhysicalPlan(std::shared_ptr<const BoundQuery> query, std::shared_ptr<PhysicalNode> root)
    : query_(std::move(query)), root_(std::move(root)) {
  int next = 0;
  std::function<void(PhysicalNode&)> walk = [&](PhysicalNode& n) {
    n.id = next++;
    for (auto& c : n.children) walk(*c);
  };
  if (root_) walk(*root_);
}

std::vector<const PhysicalNode*> PhysicalPlan::nodes() const {
  std::vector<const PhysicalNode*> out;
  std::function<void(const PhysicalNode&)> walk = [&](const PhysicalNode& n) {
    out.push_back(&n);
    for (const auto& c : n.children) walk(*c);
  };
  if (root_) walk(*root_);
  return out;
}

const PhysicalNode* PhysicalPlan::find(int id) const {
  for (const auto* n : nodes())
    if (n->id == id) return n;
  return nullptr;
}

namespace {

std::string operandText(const BoundQuery& q, const BoundOperand& o) {
  switch (o.kind) {
    case Operand::Kind::kLiteral:
      return o.literal.toLiteral();
    case Operand::Kind::kColumn:
      return q.attrName(o.column);
    case Operand::Kind::kParam: {
      const ParamInfo* p = q.findParam(o.param);
      return "[" + std::to_string(p ? p->ordinal : 0) + ": " + o.param + "]";
    }
  }
  return {};
}

std::string keyPartText(const BoundQuery& q, const KeyPart& k) {
  switch (k.source) {
    case KeyPart::Source::kValue:
      return k.field.toString() + " = " + operandText(q, k.value);
    case KeyPart::Source::kList:
      return k.field.toString() + " IN " + operandText(q, k.value);
    case KeyPart::Source::kToken:
      return k.field.toString() + " = " + operandText(q, k.value);
    case KeyPart::Source::kJoin:
      return k.field.toString() + " = " + q.attrName(k.joinAttr);
  }
  return {};
}

}  // namespace

std::string PhysicalPlan::describe(const PhysicalNode& n) const {
  const BoundQuery& q = *query_;
  std::string s(boundql::toString(n.op));
  auto relText = [&] {
    const auto& rel = q.relations[n.rel];
    return rel.table.name + (rel.alias != rel.table.name ? " " + rel.alias : "");
  };
  auto prefixText = [&] {
    std::string p;
    for (std::size_t i = 0; i < n.prefix.size(); ++i) p += (i ? ", " : "") + keyPartText(q, n.prefix[i]);
    return p;
  };
  switch (n.op) {
    case PhysicalOp::kIndexScan:
    case PhysicalOp::kIndexFKJoin:
    case PhysicalOp::kSortedIndexJoin: {
      s += " " + relText() + " via " + n.index.table + n.index.fieldList();
      if (!n.prefix.empty()) s += (n.op == PhysicalOp::kIndexScan ? " prefix (" : " key (") + prefixText() + ")";
      for (int p : n.rangePreds) s += " range " + q.predicateText(p);
      if (n.op == PhysicalOp::kIndexScan) {
        s += n.limitHint ? " limit " + std::to_string(*n.limitHint) : std::string(" unbounded");
        if (n.probes > 1) s += " x " + std::to_string(n.probes) + " probes";
      } else if (n.op == PhysicalOp::kSortedIndexJoin) {
        s += " per-key " + std::to_string(n.limitHint.value_or(0));
      }
      if (n.descending) s += " desc";
      if (n.pointGet) s += " (get)";
      else if (!n.covering) s += " (deref)";
      for (int p : n.residual) s += " filter " + q.predicateText(p);
      break;
    }
    case PhysicalOp::kLocalSelection:
      s += " " + q.predicateText(n.pred);
      break;
    case PhysicalOp::kLocalSort:
      for (std::size_t i = 0; i < n.keys.size(); ++i)
        s += (i ? ", " : " ") + q.attrName(n.keys[i].attr) + (n.keys[i].descending ? " DESC" : "");
      break;
    case PhysicalOp::kLocalStop:
      s += " " + std::to_string(n.count) + " (" + std::string(boundql::toString(n.stopKind)) + ")";
      break;
    case PhysicalOp::kLocalAggregate:
      for (const auto& o : q.outputs)
        if (!o.attr) s += " " + o.name;
      if (!q.groupBy.empty()) {
        s += " GROUP BY";
        for (std::size_t i = 0; i < q.groupBy.size(); ++i) s += (i ? ", " : " ") + q.attrName(q.groupBy[i]);
      }
      break;
  }
  return s;
}

std::string PhysicalPlan::toString(const OperationBound* bound) const {
  std::string out;
  std::function<void(const PhysicalNode&, int)> walk = [&](const PhysicalNode& n, int depth) {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + describe(n);
    out += "  [rows<=" + (n.outputBound ? std::to_string(*n.outputBound) : std::string("inf"));
    if (bound)
      for (const auto& e : bound->perOperator)
        if (e.nodeId == n.id)
          out += " requests<=" + (e.requests ? std::to_string(*e.requests) : std::string("inf")) +
                 " tuples<=" + (e.tuples ? std::to_string(*e.tuples) : std::string("inf"));
    out += "]\n";
    for (const auto& c : n.children) walk(*c, depth + 1);
  };
  if (root_) walk(*root_, 0);
  return out;
}

std::string PhysicalPlan::toJson(const OperationBound* bound) const {
  using nlohmann::ordered_json;
  const BoundQuery& q = *query_;
  std::function<ordered_json(const PhysicalNode&)> node = [&](const PhysicalNode& n) {
    ordered_json j;
    j["id"] = n.id;
    j["op"] = std::string(boundql::toString(n.op));
    j["text"] = describe(n);
    if (isRemote(n.op)) {
      j["table"] = q.relations[n.rel].table.name;
      j["index"] = n.index.table + n.index.fieldList();
      j["covering"] = n.covering;
      j["descending"] = n.descending;
      if (n.limitHint) j["limit_hint"] = *n.limitHint;
      j["probes"] = n.probes;
    }
    if (n.op == PhysicalOp::kLocalStop) {
      j["count"] = n.count;
      j["kind"] = std::string(boundql::toString(n.stopKind));
    }
    if (n.outputBound) j["output_bound"] = *n.outputBound;
    if (bound)
      for (const auto& e : bound->perOperator)
        if (e.nodeId == n.id) {
          if (e.requests) j["max_requests"] = *e.requests;
          if (e.tuples) j["max_tuples"] = *e.tuples;
        }
    ordered_json kids = ordered_json::array();
    for (const auto& c : n.children) kids.push_back(node(*c));
    j["children"] = kids;
    return j;
  };
  ordered_json doc;
  doc["query"] = renderQuery(q.ast);
  doc["plan"] = root_ ? node(*root_) : ordered_json();
  if (bound) {
    doc["bounded"] = bound->bounded;
    if (bound->bounded) {
      doc["max_requests"] = bound->maxRequests;
      doc["max_tuples"] = bound->maxTuples;
    }
  }
  return doc.dump(2);
}

std::string PhysicalPlan::canonical() const { return renderQuery(query_->ast) + "\n" + toString(); }

}  // namespace boundql
