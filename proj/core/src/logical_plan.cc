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
#include "boundql/logical_plan.h"

#include <cctype>
#include <functional>

#include "boundql/error.h"

namespace boundql {

std::string BoundQuery::attrName(AttrRef a) const {
  return relations[a.rel].alias + "." + column(a).name;
}

const ParamInfo* BoundQuery::findParam(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const ParamInfo* BoundQuery::findParam(int ordinal) const {
  for (const auto& p : params)
    if (p.ordinal == ordinal) return &p;
  return nullptr;
}

std::string BoundQuery::predicateText(int index) const {
  const BoundPredicate& p = predicates[index];
  auto operand = [&](const BoundOperand& o) -> std::string {
    switch (o.kind) {
      case Operand::Kind::kLiteral:
        return o.literal.toLiteral();
      case Operand::Kind::kColumn:
        return attrName(o.column);
      case Operand::Kind::kParam: {
        const ParamInfo* info = findParam(o.param);
        std::string s = "[" + std::to_string(info ? info->ordinal : 0) + ": " + o.param;
        if (info && info->list) s += " MAX " + std::to_string(info->maxItems);
        return s + "]";
      }
    }
    return {};
  };
  switch (p.kind) {
    case PredicateKind::kTokenMatch:
      if (p.rhs.kind == Operand::Kind::kLiteral)
        return attrName(p.lhs) + " LIKE '%" + p.rhs.literal.asString() + "%'";
      return attrName(p.lhs) + " LIKE " + operand(p.rhs);
    case PredicateKind::kInList:
      return attrName(p.lhs) + " IN " + operand(p.rhs);
    default:
      return attrName(p.lhs) + " " + std::string(toString(p.op)) + " " + operand(p.rhs);
  }
}

namespace {

bool compatible(ColumnType a, ColumnType b) {
  auto numeric = [](ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kTimestamp; };
  return a == b || (numeric(a) && numeric(b));
}

class Binder {
 public:
  Binder(const QueryAst& ast, const Schema& schema) : schema_(schema) { q_.ast = ast; }

  BoundQuery bind() {
    const QueryAst& ast = q_.ast;
    if (ast.relations.empty()) throw QueryError("query has no relations");
    for (const auto& ref : ast.relations) {
      RelationInfo info{schema_.table(ref.table), ref.alias.empty() ? ref.table : ref.alias};
      if (info.table.name != ref.table && ref.alias.empty()) info.alias = info.table.name;
      for (const auto& other : q_.relations)
        if (iequals(other.alias, info.alias))
          throw QueryError("relation name '" + info.alias + "' appears twice in FROM; use aliases");
      q_.relations.push_back(std::move(info));
    }
    for (const auto& p : ast.predicates) q_.predicates.push_back(predicate(p));
    for (const auto& g : ast.groupBy) q_.groupBy.push_back(resolve(g));
    for (const auto& o : ast.ordering) q_.ordering.push_back({resolve(o.column), o.descending});
    q_.limit = ast.limit;
    projections();
    return std::move(q_);
  }

 private:
  AttrRef resolve(const ColumnRef& ref) {
    std::optional<AttrRef> found;
    for (std::size_t r = 0; r < q_.relations.size(); ++r) {
      const auto& rel = q_.relations[r];
      if (!ref.qualifier.empty() && !iequals(rel.alias, ref.qualifier) &&
          !iequals(rel.table.name, ref.qualifier))
        continue;
      if (auto idx = rel.table.columnIndex(ref.column)) {
        if (found) throw QueryError("column reference '" + ref.toString() + "' is ambiguous");
        found = AttrRef{static_cast<int>(r), *idx};
      }
    }
    if (!found) throw QueryError("unknown column '" + ref.toString() + "'");
    return *found;
  }

  void noteParam(const ParamRef& ref, ColumnType type, bool list) {
    for (auto& p : q_.params) {
      if (p.name != ref.name) {
        if (p.ordinal == ref.ordinal)
          throw QueryError("parameter ordinal " + std::to_string(ref.ordinal) + " names both '" +
                           p.name + "' and '" + ref.name + "'");
        continue;
      }
      if (!compatible(p.type, type) || p.list != list || p.ordinal != ref.ordinal)
        throw QueryError("parameter '" + ref.name + "' is used inconsistently");
      return;
    }
    q_.params.push_back({ref.name, ref.ordinal, type, list, ref.maxItems.value_or(1)});
  }

  BoundOperand value(const Operand& o, const ColumnDef& col, const std::string& where) {
    BoundOperand b;
    b.kind = o.kind;
    if (o.kind == Operand::Kind::kLiteral) {
      if (!compatible(o.literal.type(), col.type))
        throw TypeError("literal " + o.literal.toLiteral() + " does not match type " +
                        std::string(toString(col.type)) + " of " + where);
      b.literal = o.literal.coerceTo(col.type);
    } else {
      b.param = o.param.name;
      noteParam(o.param, col.type, false);
    }
    return b;
  }

  BoundPredicate predicate(const Predicate& p) {
    BoundPredicate b;
    b.kind = p.kind;
    b.op = p.op;
    b.lhs = resolve(p.lhs);
    const ColumnDef& col = q_.column(b.lhs);
    std::string where = q_.attrName(b.lhs);
    switch (p.kind) {
      case PredicateKind::kEquality:
      case PredicateKind::kInequality:
        b.rhs = value(p.rhs, col, where);
        break;
      case PredicateKind::kTokenMatch:
        if (col.type != ColumnType::kString)
          throw TypeError("LIKE requires a VARCHAR column, " + where + " is " +
                          std::string(toString(col.type)));
        b.rhs = value(p.rhs, col, where);
        if (b.rhs.kind == Operand::Kind::kLiteral) {
          std::string w = b.rhs.literal.asString();
          for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          b.rhs.literal = Value::string(w);
        }
        break;
      case PredicateKind::kInList:
        b.rhs.kind = Operand::Kind::kParam;
        b.rhs.param = p.rhs.param.name;
        b.maxItems = p.rhs.param.maxItems.value_or(1);
        noteParam(p.rhs.param, col.type, true);
        break;
      case PredicateKind::kJoinEquality: {
        b.rhs.kind = Operand::Kind::kColumn;
        b.rhs.column = resolve(p.rhs.column);
        if (b.rhs.column.rel == b.lhs.rel)
          throw QueryError("comparison of two columns of one relation is not supported: " +
                           p.toString());
        if (!compatible(col.type, q_.column(b.rhs.column).type))
          throw TypeError("join predicate compares incompatible types: " + p.toString());
        break;
      }
    }
    return b;
  }

  void addColumnOutput(AttrRef a) {
    const ColumnDef& c = q_.column(a);
    q_.outputs.push_back({c.name, c.type, a, 0});
  }

  void projections() {
    bool aggregating = q_.ast.hasAggregates();
    auto inGroup = [&](AttrRef a) {
      for (auto g : q_.groupBy)
        if (g == a) return true;
      return false;
    };
    for (const auto& p : q_.ast.projections) {
      switch (p.kind) {
        case Projection::Kind::kStar:
          if (aggregating) throw QueryError("SELECT * cannot be combined with aggregates");
          for (std::size_t r = 0; r < q_.relations.size(); ++r)
            for (std::size_t c = 0; c < q_.relations[r].table.columns.size(); ++c)
              addColumnOutput({static_cast<int>(r), c});
          break;
        case Projection::Kind::kTableStar: {
          if (aggregating) throw QueryError("SELECT t.* cannot be combined with aggregates");
          bool found = false;
          for (std::size_t r = 0; r < q_.relations.size(); ++r) {
            if (!iequals(q_.relations[r].alias, p.column.qualifier)) continue;
            found = true;
            for (std::size_t c = 0; c < q_.relations[r].table.columns.size(); ++c)
              addColumnOutput({static_cast<int>(r), c});
          }
          if (!found) throw QueryError("unknown relation '" + p.column.qualifier + "'");
          break;
        }
        case Projection::Kind::kColumn: {
          AttrRef a = resolve(p.column);
          if (aggregating && !inGroup(a))
            throw QueryError("column " + q_.attrName(a) + " must appear in GROUP BY");
          addColumnOutput(a);
          break;
        }
        case Projection::Kind::kAggregate: {
          AggregateSpec spec;
          spec.fn = p.fn;
          spec.countStar = p.countStar;
          if (!p.countStar) {
            spec.attr = resolve(p.column);
            ColumnType t = q_.column(spec.attr).type;
            if (p.fn == AggregateFn::kSum && t != ColumnType::kInt64)
              throw TypeError("SUM requires an INT column");
            spec.type = p.fn == AggregateFn::kCount ? ColumnType::kInt64 : t;
          }
          q_.aggregates.push_back(spec);
          q_.outputs.push_back({p.toString(), spec.type, std::nullopt, q_.aggregates.size() - 1});
          break;
        }
      }
    }
    if (aggregating)
      for (const auto& k : q_.ordering)
        if (!inGroup(k.attr))
          throw QueryError("ORDER BY column " + q_.attrName(k.attr) + " must appear in GROUP BY");
  }

  const Schema& schema_;
  BoundQuery q_;
};

}  // namespace

BoundQuery bindQuery(const QueryAst& ast, const Schema& schema) { return Binder(ast, schema).bind(); }

std::string_view toString(LogicalOp op) {
  switch (op) {
    case LogicalOp::kRelationScan:
      return "RelationScan";
    case LogicalOp::kSelection:
      return "Selection";
    case LogicalOp::kJoin:
      return "Join";
    case LogicalOp::kSort:
      return "Sort";
    case LogicalOp::kStop:
      return "Stop";
    case LogicalOp::kDataStop:
      return "DataStop";
    case LogicalOp::kAggregate:
      return "Aggregate";
  }
  return "?";
}

std::unique_ptr<LogicalNode> LogicalNode::make(LogicalOp op) {
  auto n = std::make_unique<LogicalNode>();
  n->op = op;
  return n;
}

std::unique_ptr<LogicalNode> LogicalNode::clone() const {
  auto n = std::make_unique<LogicalNode>();
  n->op = op;
  n->id = id;
  n->rel = rel;
  n->preds = preds;
  n->keys = keys;
  n->count = count;
  n->stopKind = stopKind;
  n->causingAttrs = causingAttrs;
  n->fromPrimaryKey = fromPrimaryKey;
  n->probes = probes;
  for (const auto& c : children) n->children.push_back(c->clone());
  return n;
}

LogicalPlan::LogicalPlan(const LogicalPlan& other)
    : query_(other.query_), root_(other.root_ ? other.root_->clone() : nullptr) {}

LogicalPlan& LogicalPlan::operator=(const LogicalPlan& other) {
  if (this != &other) {
    query_ = other.query_;
    root_ = other.root_ ? other.root_->clone() : nullptr;
  }
  return *this;
}

void LogicalPlan::renumber() {
  int next = 0;
  std::function<void(LogicalNode&)> walk = [&](LogicalNode& n) {
    n.id = next++;
    for (auto& c : n.children) walk(*c);
  };
  if (root_) walk(*root_);
}

const LogicalNode* LogicalPlan::find(int id) const {
  std::function<const LogicalNode*(const LogicalNode&)> walk =
      [&](const LogicalNode& n) -> const LogicalNode* {
    if (n.id == id) return &n;
    for (const auto& c : n.children)
      if (auto* f = walk(*c)) return f;
    return nullptr;
  };
  return root_ ? walk(*root_) : nullptr;
}

std::string LogicalPlan::describe(const LogicalNode& n) const {
  const BoundQuery& q = *query_;
  std::string s(boundql::toString(n.op));
  auto keys = [&] {
    std::string k;
    for (std::size_t i = 0; i < n.keys.size(); ++i)
      k += (i ? ", " : " ") + q.attrName(n.keys[i].attr) + (n.keys[i].descending ? " DESC" : "");
    return k;
  };
  switch (n.op) {
    case LogicalOp::kRelationScan: {
      const auto& rel = q.relations[n.rel];
      s += " " + rel.table.name;
      if (rel.alias != rel.table.name) s += " " + rel.alias;
      break;
    }
    case LogicalOp::kSelection:
    case LogicalOp::kJoin:
      for (std::size_t i = 0; i < n.preds.size(); ++i)
        s += (i ? " AND " : " ") + q.predicateText(n.preds[i]);
      break;
    case LogicalOp::kSort:
      s += keys();
      break;
    case LogicalOp::kStop:
      s += " " + std::to_string(n.count) + " (" + std::string(boundql::toString(n.stopKind)) + ")";
      break;
    case LogicalOp::kDataStop: {
      s += " " + std::to_string(n.count);
      if (n.probes > 1) s += " x " + std::to_string(n.probes) + " probes";
      std::string attrs;
      for (std::size_t i = 0; i < n.causingAttrs.size(); ++i) attrs += (i ? ", " : "") + n.causingAttrs[i];
      s += " [" + q.relations[n.rel].table.name + "(" + attrs + ")" +
           (n.fromPrimaryKey ? " primary key]" : " cardinality limit]");
      break;
    }
    case LogicalOp::kAggregate: {
      for (std::size_t i = 0; i < q.outputs.size(); ++i)
        if (!q.outputs[i].attr) s += " " + q.outputs[i].name;
      if (!q.groupBy.empty()) {
        s += " GROUP BY";
        for (std::size_t i = 0; i < q.groupBy.size(); ++i) s += (i ? ", " : " ") + q.attrName(q.groupBy[i]);
      }
      break;
    }
  }
  return s;
}

std::string LogicalPlan::toString(const std::set<int>& highlight) const {
  std::string out;
  std::function<void(const LogicalNode&, int)> walk = [&](const LogicalNode& n, int depth) {
    out += highlight.count(n.id) ? ">> " : "   ";
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + describe(n) + "\n";
    for (const auto& c : n.children) walk(*c, depth + 1);
  };
  if (root_) walk(*root_, 0);
  return out;
}

std::set<int> relationsBelow(const LogicalNode& node) {
  std::set<int> out;
  std::function<void(const LogicalNode&)> walk = [&](const LogicalNode& n) {
    if (n.op == LogicalOp::kRelationScan) out.insert(n.rel);
    for (const auto& c : n.children) walk(*c);
  };
  walk(node);
  return out;
}

}  // namespace boundql
