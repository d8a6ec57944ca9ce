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
#include "boundql/physical_planner.h"

#include <algorithm>
#include <functional>
#include <set>

#include "boundql/stop_phase.h"

namespace boundql {

NotScaleIndependent::NotScaleIndependent(LogicalPlan plan, int nodeId, int relation,
                                         std::vector<int> section, std::vector<std::string> reasons)
    : Error([&] {
        std::string m = "Not scale-independent: no bounded remote operator for '" +
                        plan.describe(*plan.find(nodeId)) + "'";
        for (const auto& r : reasons) m += "; " + r;
        return m;
      }()),
      plan_(std::move(plan)),
      nodeId_(nodeId),
      relation_(relation),
      section_(std::move(section)),
      reasons_(std::move(reasons)) {}

namespace {

using Reasons = std::vector<std::string>;

void note(Reasons* why, std::string r) {
  if (why && std::find(why->begin(), why->end(), r) == why->end()) why->push_back(std::move(r));
}

struct Branch {
  const LogicalNode* dataStop = nullptr;
  std::vector<int> sels;
  int rel = -1;
};

// [DataStop]? Selection* RelationScan, or nothing. Joins also take
// selections left above the DataStop.
std::optional<Branch> scanBranch(const LogicalNode* n, bool selectionsAbove = false) {
  Branch b;
  while (selectionsAbove && n->op == LogicalOp::kSelection) {
    b.sels.push_back(n->preds[0]);
    n = n->child();
  }
  if (n->op == LogicalOp::kDataStop) {
    b.dataStop = n;
    n = n->child();
  }
  while (n->op == LogicalOp::kSelection) {
    b.sels.push_back(n->preds[0]);
    n = n->child();
  }
  if (n->op != LogicalOp::kRelationScan) return std::nullopt;
  b.rel = n->rel;
  return b;
}

ColumnType fieldType(const TableDef& t, const IndexField& f) {
  return f.token ? ColumnType::kString : t.column(f.column).type;
}

bool sameColumn(const std::string& a, const std::string& b) { return iequals(a, b); }

// Uses an existing index whose first fields are exactly 'leading' (in any
// order) followed by 'ordered'; otherwise designs a new one.
IndexDef chooseIndex(const Schema& schema, const TableDef& table, const std::vector<IndexField>& leading,
                     std::vector<std::string> ordered, bool covering) {
  // Sort keys beyond a fully determined primary key change nothing.
  {
    std::set<std::string> fixed;
    for (const auto& f : leading)
      if (!f.token) fixed.insert(f.column);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      bool pkDone = std::all_of(table.primaryKey.begin(), table.primaryKey.end(),
                                [&](const std::string& c) { return fixed.count(c) > 0; });
      if (pkDone) {
        ordered.resize(i);
        break;
      }
      fixed.insert(ordered[i]);
    }
  }
  auto fits = [&](const IndexDef& idx) {
    if (idx.fields.size() < leading.size() + ordered.size()) return false;
    std::vector<IndexField> head(idx.fields.begin(), idx.fields.begin() + static_cast<long>(leading.size()));
    for (const auto& f : leading) {
      auto it = std::find_if(head.begin(), head.end(), [&](const IndexField& h) {
        return h.token == f.token && sameColumn(h.column, f.column);
      });
      if (it == head.end()) return false;
      head.erase(it);
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const auto& f = idx.fields[leading.size() + i];
      if (f.token || !sameColumn(f.column, ordered[i])) return false;
    }
    // A token field past the prefix yields one entry per word of a record.
    return std::none_of(idx.fields.begin() + static_cast<long>(leading.size()), idx.fields.end(),
                        [](const IndexField& f) { return f.token; });
  };
  for (const auto* idx : schema.indexesOf(table.name))
    if (fits(*idx) && (!covering || idx->covering)) return *idx;
  // A fitting non-covering index beats a second copy of the same keys.
  for (const auto* idx : schema.indexesOf(table.name))
    if (fits(*idx)) return *idx;
  IndexDef def;
  def.table = table.name;
  def.fields = leading;
  for (const auto& o : ordered) def.fields.push_back({table.column(o).name, false});
  for (const auto& pk : table.primaryKey) {
    bool present = std::any_of(def.fields.begin(), def.fields.end(),
                               [&](const IndexField& f) { return !f.token && sameColumn(f.column, pk); });
    if (!present) def.fields.push_back({pk, false});
  }
  def.covering = covering;
  bool isPrimary = def.fields.size() == table.primaryKey.size();
  for (std::size_t i = 0; isPrimary && i < def.fields.size(); ++i)
    isPrimary = !def.fields[i].token && sameColumn(def.fields[i].column, table.primaryKey[i]);
  if (isPrimary) return schema.primaryIndex(table.name);
  return def;
}

std::shared_ptr<PhysicalNode> remoteNode(PhysicalOp op, int rel, const IndexDef& index,
                                         const TableDef& table, int logicalId) {
  auto n = std::make_shared<PhysicalNode>();
  n->op = op;
  n->rel = rel;
  n->index = index;
  n->covering = index.primary || index.covering;
  n->logicalId = logicalId;
  for (const auto& f : index.fields) n->fieldTypes.push_back(fieldType(table, f));
  return n;
}

// Orders prefix parts by their position in the index.
void orderPrefix(PhysicalNode& n) {
  auto pos = [&](const KeyPart& k) {
    for (std::size_t i = 0; i < n.index.fields.size(); ++i)
      if (n.index.fields[i].token == k.field.token && sameColumn(n.index.fields[i].column, k.field.column))
        return i;
    return n.index.fields.size();
  };
  std::stable_sort(n.prefix.begin(), n.prefix.end(),
                   [&](const KeyPart& a, const KeyPart& b) { return pos(a) < pos(b); });
}

bool sortDirection(const std::vector<SortKey>& keys, bool& descending) {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i && keys[i].descending != keys[0].descending) return false;
  }
  descending = !keys.empty() && keys[0].descending;
  return true;
}

std::optional<RemoteMatch> tryIndexScan(const LogicalNode& top, const BoundQuery& q, const Schema& schema,
                                        const CompileOptions& opts, Reasons* why) {
  const LogicalNode* n = &top;
  const LogicalNode* stop = nullptr;
  const LogicalNode* sort = nullptr;
  if (n->op == LogicalOp::kStop) {
    stop = n;
    n = n->child();
  }
  if (n->op == LogicalOp::kSort) {
    sort = n;
    n = n->child();
  }
  auto branch = scanBranch(n);
  if (!branch) return std::nullopt;
  const int rel = branch->rel;
  const TableDef& table = q.relations[rel].table;
  const LogicalNode* ds = branch->dataStop;
  if (!stop && !ds && !opts.unsafe) {
    note(why, "no Stop or DataStop bounds the access to " + table.name);
    return std::nullopt;
  }

  std::vector<KeyPart> prefix;
  std::vector<IndexField> leading;
  std::vector<int> rangePreds, residual;
  std::optional<std::size_t> ineqCol;
  int64_t probes = 1;
  bool haveToken = false, haveList = false;
  std::set<std::size_t> eqCols;
  std::set<std::size_t> ineqCols;
  for (int pi : branch->sels) {
    const auto& p = q.predicates[pi];
    if (p.kind == PredicateKind::kInequality) ineqCols.insert(p.lhs.col);
  }
  if (ineqCols.size() > 1) {
    std::string cols;
    for (auto c : ineqCols) cols += (cols.empty() ? "" : ", ") + table.columns[c].name;
    note(why, "inequality touches " + std::to_string(ineqCols.size()) + " attributes (" + cols +
                  ") of " + table.name + "; an index range covers at most one attribute");
    return std::nullopt;
  }
  for (int pi : branch->sels) {
    const auto& p = q.predicates[pi];
    const ColumnDef& col = table.columns[p.lhs.col];
    KeyPart k;
    k.type = col.type;
    k.value = p.rhs;
    k.field = {col.name, false};
    bool served = true;
    switch (p.kind) {
      case PredicateKind::kEquality:
        served = !eqCols.count(p.lhs.col) && !ineqCols.count(p.lhs.col);
        k.source = KeyPart::Source::kValue;
        break;
      case PredicateKind::kInList:
        served = !p.localOnly && !haveList && !eqCols.count(p.lhs.col) && !ineqCols.count(p.lhs.col);
        k.source = KeyPart::Source::kList;
        if (served) {
          haveList = true;
          probes = p.maxItems;
        }
        break;
      case PredicateKind::kTokenMatch:
        served = !haveToken;
        k.source = KeyPart::Source::kToken;
        k.field.token = true;
        k.type = ColumnType::kString;
        haveToken = served;
        break;
      case PredicateKind::kInequality:
        rangePreds.push_back(pi);
        ineqCol = p.lhs.col;
        continue;
      case PredicateKind::kJoinEquality:
        served = false;
        break;
    }
    if (!served) {
      residual.push_back(pi);
      continue;
    }
    if (!k.field.token) eqCols.insert(p.lhs.col);
    leading.push_back(k.field);
    prefix.push_back(std::move(k));
  }
  if (!residual.empty() && stop) {
    note(why, "predicate " + q.predicateText(residual[0]) + " cannot be answered by the same index range");
    return std::nullopt;
  }
  // The DataStop caps tuples per value of its causing attributes, so each must be in the prefix.
  if (ds && !std::all_of(ds->causingAttrs.begin(), ds->causingAttrs.end(), [&](const std::string& a) {
        auto c = table.columnIndex(a);
        return c && eqCols.count(*c);
      })) {
    if (!opts.unsafe && !stop) {
      note(why, "the cardinality bound on " + table.name + " needs all its attributes in one index prefix");
      return std::nullopt;
    }
    ds = nullptr;
  }

  std::vector<std::string> ordered;
  bool descending = false;
  if (sort) {
    if (!sortDirection(sort->keys, descending)) {
      note(why, "mixed ASC/DESC sort on " + table.name + " cannot be served by one index order");
      return std::nullopt;
    }
    for (const auto& k : sort->keys) {
      if (k.attr.rel != rel) return std::nullopt;
      if (eqCols.count(k.attr.col)) {
        bool isList = false;
        for (const auto& kp : prefix)
          if (kp.source == KeyPart::Source::kList && sameColumn(kp.field.column, table.columns[k.attr.col].name))
            isList = true;
        if (isList) {
          note(why, "sorting on the IN-list attribute " + table.columns[k.attr.col].name + " is not supported");
          return std::nullopt;
        }
        continue;
      }
      ordered.push_back(table.columns[k.attr.col].name);
    }
    if (ineqCol && (ordered.empty() || !sameColumn(ordered[0], table.columns[*ineqCol].name))) {
      note(why, "sort on " + table.name + " must start with the inequality attribute " +
                    table.columns[*ineqCol].name);
      return std::nullopt;
    }
  }
  if (ineqCol && ordered.empty()) ordered.push_back(table.columns[*ineqCol].name);

  IndexDef index = chooseIndex(schema, table, leading, ordered, opts.unsafe);
  auto node = remoteNode(PhysicalOp::kIndexScan, rel, index, table, top.id);
  node->prefix = std::move(prefix);
  orderPrefix(*node);
  node->rangePreds = rangePreds;
  node->residual = residual;
  node->descending = descending;
  node->probes = probes;
  if (stop && (!ds || stop->count <= ds->count)) {
    node->limitHint = stop->count;
    node->boundSource = BoundSource::kStop;
  } else if (ds) {
    node->limitHint = ds->count;
    node->boundSource = ds->fromPrimaryKey ? BoundSource::kPrimaryKey : BoundSource::kConstraint;
  }
  node->pointGet = index.primary && node->prefix.size() == index.fields.size() && rangePreds.empty();
  if (node->limitHint) node->outputBound = *node->limitHint * probes;
  RemoteMatch m;
  m.op = node;
  m.stop = stop;
  return m;
}

// Join predicates as (right column, outer attribute) pairs.
std::vector<std::pair<std::size_t, AttrRef>> joinKeys(const LogicalNode& join, const BoundQuery& q, int rightRel) {
  std::vector<std::pair<std::size_t, AttrRef>> out;
  for (int pi : join.preds) {
    const auto& p = q.predicates[pi];
    if (p.lhs.rel == rightRel) out.push_back({p.lhs.col, p.rhs.column});
    else out.push_back({p.rhs.column.col, p.lhs});
  }
  return out;
}

std::optional<RemoteMatch> tryFKJoin(const LogicalNode& join, const BoundQuery& q, const Schema& schema,
                                     Reasons* why) {
  auto branch = scanBranch(join.child(1), true);
  if (!branch) return std::nullopt;
  const int rel = branch->rel;
  const TableDef& table = q.relations[rel].table;
  auto keys = joinKeys(join, q, rel);
  std::vector<bool> joinUsed(keys.size(), false);
  std::vector<bool> selUsed(branch->sels.size(), false);
  std::vector<KeyPart> prefix;
  for (const auto& pk : table.primaryKey) {
    std::size_t col = *table.columnIndex(pk);
    KeyPart k;
    k.field = {table.columns[col].name, false};
    k.type = table.columns[col].type;
    bool found = false;
    for (std::size_t i = 0; i < keys.size() && !found; ++i)
      if (!joinUsed[i] && keys[i].first == col) {
        joinUsed[i] = found = true;
        k.source = KeyPart::Source::kJoin;
        k.joinAttr = keys[i].second;
      }
    for (std::size_t i = 0; i < branch->sels.size() && !found; ++i) {
      const auto& p = q.predicates[branch->sels[i]];
      if (!selUsed[i] && p.kind == PredicateKind::kEquality && !p.localOnly && p.lhs.col == col) {
        selUsed[i] = found = true;
        k.source = KeyPart::Source::kValue;
        k.value = p.rhs;
      }
    }
    if (!found) {
      note(why, "join predicates do not cover the primary key of " + table.name + " (missing " + pk + ")");
      return std::nullopt;
    }
    prefix.push_back(std::move(k));
  }
  auto node = remoteNode(PhysicalOp::kIndexFKJoin, rel, schema.primaryIndex(table.name), table, join.id);
  node->prefix = std::move(prefix);
  node->pointGet = true;
  node->limitHint = 1;
  node->boundSource = BoundSource::kPrimaryKey;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!joinUsed[i]) node->residual.push_back(join.preds[i]);
  for (std::size_t i = 0; i < branch->sels.size(); ++i)
    if (!selUsed[i]) node->residual.push_back(branch->sels[i]);
  RemoteMatch m;
  m.op = node;
  m.remaining = join.child(0);
  return m;
}

std::optional<RemoteMatch> trySortedJoin(const LogicalNode& top, const BoundQuery& q, const Schema& schema,
                                         const CompileOptions& opts, Reasons* why) {
  const LogicalNode* n = &top;
  const LogicalNode* stop = nullptr;
  const LogicalNode* sort = nullptr;
  if (n->op == LogicalOp::kStop) {
    stop = n;
    n = n->child();
  }
  if (n->op == LogicalOp::kSort) {
    sort = n;
    n = n->child();
  }
  if (n->op != LogicalOp::kJoin) return std::nullopt;
  const LogicalNode& join = *n;
  if (tryFKJoin(join, q, schema, nullptr)) return std::nullopt;
  auto branch = scanBranch(join.child(1), true);
  if (!branch) return std::nullopt;
  const int rel = branch->rel;
  const TableDef& table = q.relations[rel].table;

  std::vector<KeyPart> prefix;
  std::vector<IndexField> leading;
  std::set<std::size_t> fixed;
  for (const auto& [col, outer] : joinKeys(join, q, rel)) {
    if (fixed.count(col)) {
      note(why, "two join predicates on " + table.name + "." + table.columns[col].name);
      return std::nullopt;
    }
    KeyPart k;
    k.source = KeyPart::Source::kJoin;
    k.field = {table.columns[col].name, false};
    k.type = table.columns[col].type;
    k.joinAttr = outer;
    fixed.insert(col);
    leading.push_back(k.field);
    prefix.push_back(std::move(k));
  }
  const std::set<std::size_t> joinFixed = fixed;
  std::vector<int> residual;
  for (int pi : branch->sels) {
    const auto& p = q.predicates[pi];
    if (p.kind != PredicateKind::kEquality || p.localOnly || fixed.count(p.lhs.col)) {
      if (opts.unsafe) {
        residual.push_back(pi);
        continue;
      }
      note(why, "predicate " + q.predicateText(pi) + " on the inner relation " + table.name +
                    " prevents a sorted index join");
      return std::nullopt;
    }
    KeyPart k;
    k.source = KeyPart::Source::kValue;
    k.field = {table.columns[p.lhs.col].name, false};
    k.type = table.columns[p.lhs.col].type;
    k.value = p.rhs;
    fixed.insert(p.lhs.col);
    leading.push_back(k.field);
    prefix.push_back(std::move(k));
  }
  std::vector<std::string> ordered;
  bool descending = false;
  if (sort) {
    if (!sortDirection(sort->keys, descending)) {
      note(why, "mixed ASC/DESC sort on " + table.name + " cannot be served by one index order");
      return std::nullopt;
    }
    for (const auto& k : sort->keys) {
      if (k.attr.rel != rel) {
        note(why, "sort keys are not all attributes of the inner relation " + table.name);
        return std::nullopt;
      }
      if (joinFixed.count(k.attr.col)) {
        note(why, "sort on the join attribute " + table.columns[k.attr.col].name +
                      " differs between join keys and cannot be served by one index order");
        return std::nullopt;
      }
      if (!fixed.count(k.attr.col)) ordered.push_back(table.columns[k.attr.col].name);
    }
  }
  // Limit hint per join key.
  std::optional<int64_t> perKey;
  BoundSource source = BoundSource::kNone;
  auto offer = [&](int64_t v, BoundSource s) {
    if (!perKey || v < *perKey) {
      perKey = v;
      source = s;
    }
  };
  // Filtered tuples do not count toward the Stop, so it cannot cap a key.
  if (stop && residual.empty()) offer(stop->count, BoundSource::kStop);
  const LogicalNode* ds = branch->dataStop;
  if (ds && std::all_of(ds->causingAttrs.begin(), ds->causingAttrs.end(), [&](const std::string& a) {
        auto c = table.columnIndex(a);
        return c && fixed.count(*c);
      }))
    offer(ds->count, ds->fromPrimaryKey ? BoundSource::kPrimaryKey : BoundSource::kConstraint);
  for (const auto* c : schema.constraintsOf(table.name)) {
    bool covered = std::all_of(c->attributes.begin(), c->attributes.end(), [&](const std::string& a) {
      auto idx = table.columnIndex(a);
      return idx && fixed.count(*idx);
    });
    if (covered) offer(c->limit, BoundSource::kConstraint);
  }
  if (!perKey && !opts.unsafe) {
    note(why, "no Stop or cardinality constraint bounds the " + table.name + " tuples per join key");
    return std::nullopt;
  }
  IndexDef index = chooseIndex(schema, table, leading, ordered, opts.unsafe);
  auto node = remoteNode(PhysicalOp::kSortedIndexJoin, rel, index, table, top.id);
  node->prefix = std::move(prefix);
  orderPrefix(*node);
  node->descending = descending;
  node->limitHint = perKey;
  node->boundSource = source;
  node->residual = residual;
  RemoteMatch m;
  m.op = node;
  m.remaining = join.child(0);
  m.stop = stop;
  return m;
}

}  // namespace

std::optional<RemoteMatch> matchRemoteOperator(const LogicalNode& section, const BoundQuery& q,
                                               const Schema& schema, const CompileOptions& opts,
                                               Reasons* why) {
  switch (section.op) {
    case LogicalOp::kJoin:
      if (auto m = tryFKJoin(section, q, schema, why)) return m;
      return trySortedJoin(section, q, schema, opts, why);
    case LogicalOp::kStop:
    case LogicalOp::kSort:
      if (auto m = trySortedJoin(section, q, schema, opts, why)) return m;
      return tryIndexScan(section, q, schema, opts, why);
    case LogicalOp::kDataStop:
    case LogicalOp::kSelection:
    case LogicalOp::kRelationScan:
      return tryIndexScan(section, q, schema, opts, why);
    case LogicalOp::kAggregate:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

class Generator {
 public:
  Generator(const LogicalPlan& plan, const Schema& schema, const CompileOptions& opts)
      : plan_(plan), q_(plan.query()), schema_(schema), opts_(opts) {}

  std::shared_ptr<PhysicalNode> gen(const LogicalNode& node, std::vector<int> section, Reasons why) {
    if (auto m = matchRemoteOperator(node, q_, schema_, opts_, &why)) {
      std::shared_ptr<PhysicalNode> op = m->op;
      if (m->remaining) {
        op->children.push_back(gen(*m->remaining, {}, {}));
        auto childBound = op->children[0]->outputBound;
        if (op->op == PhysicalOp::kIndexFKJoin) {
          op->outputBound = childBound;
        } else if (childBound && op->limitHint) {
          op->outputBound = *childBound * *op->limitHint;
        }
      }
      if (m->stop) return local(PhysicalOp::kLocalStop, *m->stop, op);
      return op;
    }
    section.push_back(node.id);
    switch (node.op) {
      case LogicalOp::kStop:
        return local(PhysicalOp::kLocalStop, node, gen(*node.child(), section, why));
      case LogicalOp::kSort:
        return local(PhysicalOp::kLocalSort, node, gen(*node.child(), section, why));
      case LogicalOp::kSelection:
        return local(PhysicalOp::kLocalSelection, node, gen(*node.child(), section, why));
      case LogicalOp::kAggregate:
        return local(PhysicalOp::kLocalAggregate, node, gen(*node.child(), section, why));
      case LogicalOp::kDataStop:
        return gen(*node.child(), section, why);
      case LogicalOp::kRelationScan:
        throw NotScaleIndependent(plan_, node.id, node.rel, section, why);
      case LogicalOp::kJoin:
        throw NotScaleIndependent(plan_, node.id, node.child(1) ? relOf(*node.child(1)) : -1, section, why);
    }
    throw Error("unreachable");
  }

 private:
  static int relOf(const LogicalNode& n) {
    auto rels = relationsBelow(n);
    return rels.empty() ? -1 : *rels.begin();
  }

  std::shared_ptr<PhysicalNode> local(PhysicalOp op, const LogicalNode& src, std::shared_ptr<PhysicalNode> child) {
    auto n = std::make_shared<PhysicalNode>();
    n->op = op;
    n->logicalId = src.id;
    n->outputBound = child->outputBound;
    switch (op) {
      case PhysicalOp::kLocalStop:
        n->count = src.count;
        n->stopKind = src.stopKind;
        n->outputBound = child->outputBound ? std::min(src.count, *child->outputBound) : src.count;
        break;
      case PhysicalOp::kLocalSort:
        n->keys = src.keys;
        break;
      case PhysicalOp::kLocalSelection:
        n->pred = src.preds[0];
        break;
      default:
        break;
    }
    n->children.push_back(std::move(child));
    return n;
  }

  const LogicalPlan& plan_;
  const BoundQuery& q_;
  const Schema& schema_;
  const CompileOptions& opts_;
};

}  // namespace

PhysicalPlan planGenerate(const LogicalPlan& plan, const Schema& schema, const CompileOptions& options) {
  Generator g(plan, schema, options);
  return PhysicalPlan(plan.sharedQuery(), g.gen(*plan.root(), {}, {}));
}

OperationBound computeOperationBound(const PhysicalPlan& plan) {
  OperationBound b;
  for (const auto* n : plan.nodes()) {
    if (!isRemote(n->op)) continue;
    OperatorBound e;
    e.nodeId = n->id;
    e.op = std::string(toString(n->op));
    std::optional<int64_t> child = n->child() ? n->child()->outputBound : std::optional<int64_t>(1);
    switch (n->op) {
      case PhysicalOp::kIndexScan:
        if (n->limitHint) {
          int64_t perProbe = n->pointGet ? 1 : 1 + (n->covering ? 0 : *n->limitHint);
          e.requests = n->probes * perProbe;
          e.tuples = n->probes * *n->limitHint;
        }
        break;
      case PhysicalOp::kIndexFKJoin:
        e.requests = child;
        e.tuples = child;
        break;
      case PhysicalOp::kSortedIndexJoin:
        if (child && n->limitHint) {
          e.requests = *child * (1 + (n->covering ? 0 : *n->limitHint));
          e.tuples = *child * *n->limitHint;
        }
        break;
      default:
        break;
    }
    if (!e.requests || !e.tuples) {
      b.bounded = false;
    } else {
      b.maxRequests += *e.requests;
      b.maxTuples += *e.tuples;
    }
    b.perOperator.push_back(std::move(e));
  }
  return b;
}

std::vector<IndexDef> selectIndexes(const PhysicalPlan& plan, const Schema&) {
  std::vector<IndexDef> out;
  for (const auto* n : plan.nodes()) {
    if (!isRemote(n->op)) continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const IndexDef& d) { return d.name() == n->index.name(); });
    if (!seen) out.push_back(n->index);
  }
  return out;
}

ScalingClassReport classifyPlan(const PhysicalPlan& plan, const OperationBound& bound) {
  ScalingClassReport r;
  if (!bound.bounded) {
    r.scalingClass = ScalingClass::kRejected;
    r.reason = "plan contains an unbounded index scan (compiled in cost-based mode)";
    return r;
  }
  std::vector<std::string> constraints;
  for (const auto* n : plan.nodes())
    if (isRemote(n->op) && n->boundSource == BoundSource::kConstraint)
      constraints.push_back(plan.query().relations[n->rel].table.name);
  if (constraints.empty()) {
    r.scalingClass = ScalingClass::kConstant;
    r.reason = "every remote operator is bounded by a primary key or a Stop";
  } else {
    r.scalingClass = ScalingClass::kBounded;
    r.reason = "bound depends on cardinality constraints of";
    for (std::size_t i = 0; i < constraints.size(); ++i) r.reason += (i ? ", " : " ") + constraints[i];
  }
  return r;
}

std::string CompiledQuery::explain() const {
  std::string s = physical.toString(&bound);
  if (bound.bounded) {
    s += "OperationBound: requests<=" + std::to_string(bound.maxRequests) +
         " tuples<=" + std::to_string(bound.maxTuples) + "\n";
  } else {
    s += "OperationBound: unbounded\n";
  }
  s += "Class: " + std::string(toString(report.scalingClass)) + " (" + report.reason + ")\n";
  s += "Indexes:";
  for (const auto& idx : indexes) s += " " + idx.table + idx.fieldList();
  return s + "\n";
}

CompiledQuery compile(const QueryAst& ast, const Schema& schema, const CompileOptions& options) {
  BoundQuery q = bindQuery(ast, schema);
  if (options.unsafe)
    for (auto& p : q.predicates)
      if (p.kind == PredicateKind::kInList) p.localOnly = true;
  CompiledQuery c;
  c.logical = optimizeLogical(q, schema);
  c.physical = planGenerate(c.logical, schema, options);
  c.bound = computeOperationBound(c.physical);
  c.indexes = selectIndexes(c.physical, schema);
  c.report = classifyPlan(c.physical, c.bound);
  return c;
}

CompiledQuery compile(std::string_view text, const Schema& schema, const CompileOptions& options) {
  return compile(parseQuery(text), schema, options);
}

}  // namespace boundql
