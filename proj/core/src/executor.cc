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
#include "boundql/executor.h"

#include <algorithm>
#include <chrono>
#include <deque>
#include <future>
#include <map>

#include "boundql/error.h"

namespace boundql {

std::string_view toString(Strategy s) {
  switch (s) {
    case Strategy::kLazy:
      return "lazy";
    case Strategy::kSimple:
      return "simple";
    case Strategy::kParallel:
      return "parallel";
  }
  return "?";
}

std::optional<Strategy> strategyFromString(std::string_view s) {
  for (auto st : {Strategy::kLazy, Strategy::kSimple, Strategy::kParallel})
    if (toString(st) == s) return st;
  return std::nullopt;
}

std::string ExecutionStats::summary() const {
  return "requests=" + std::to_string(requests) + " tuples=" + std::to_string(tuples) +
         " wall_ms=" + std::to_string(static_cast<int64_t>(wallMs + 0.5));
}

namespace {

constexpr int64_t kUnboundedBatch = 10;

struct Row {
  std::vector<Tuple> rels;
  Tuple computed;  // aggregate results
  int anchorNode = -1;
  std::string anchorPrefix;
  std::string anchorSuffix;
  int64_t anchorOrdinal = 0;
};

struct Resume {
  int nodeId = -1;
  const PageCursor* cursor = nullptr;
};

class Context {
 public:
  Context(KvStore& store, const CompiledQuery& cq, const Params& params, const ExecuteOptions& opts)
      : store(store), q(cq.query()), opts(opts) {
    for (const auto& info : q.params) {
      if (!params.has(info.name))
        throw QueryError("unbound parameter [" + std::to_string(info.ordinal) + ": " + info.name + "]");
      const auto& vals = params.get(info.name);
      if (info.list) {
        if (static_cast<int64_t>(vals.size()) > info.maxItems)
          throw QueryError("parameter '" + info.name + "' has " + std::to_string(vals.size()) +
                           " values; the query declares MAX " + std::to_string(info.maxItems));
      } else if (params.isList(info.name) || vals.size() != 1) {
        throw QueryError("parameter '" + info.name + "' expects a single value");
      }
      std::vector<Value> coerced;
      for (const auto& v : vals) coerced.push_back(v.coerceTo(info.type));
      this->params[info.name] = std::move(coerced);
    }
    for (const auto* n : cq.physical.nodes())
      if (isRemote(n->op)) stats.perOperator.push_back({n->id, std::string(toString(n->op)), 0, 0, 0.0});
    takeInjectedLatencyMs();
  }

  OperatorStats& op(int id) {
    for (auto& s : stats.perOperator)
      if (s.nodeId == id) return s;
    throw Error("internal: no stats slot for node " + std::to_string(id));
  }

  // One request on the critical path.
  template <typename F>
  auto seq(int node, F&& fn) {
    takeInjectedLatencyMs();
    auto result = fn();
    const double ms = takeInjectedLatencyMs();
    stats.modeledMs += ms;
    op(node).modeledMs += ms;
    ++stats.rounds;
    ++stats.requests;
    ++op(node).requests;
    return result;
  }

  // Independent requests issued together; costs one round.
  template <typename R>
  std::vector<R> wave(int node, const std::vector<std::function<R()>>& tasks) {
    std::vector<R> out;
    if (tasks.empty()) return out;
    out.reserve(tasks.size());
    double worst = 0.0;
    if (opts.threads && tasks.size() > 1) {
      std::vector<std::future<std::pair<R, double>>> futures;
      for (const auto& t : tasks)
        futures.push_back(std::async(std::launch::async, [&t] {
          takeInjectedLatencyMs();
          R r = t();
          return std::pair<R, double>(std::move(r), takeInjectedLatencyMs());
        }));
      for (auto& f : futures) {
        auto [r, ms] = f.get();
        worst = std::max(worst, ms);
        out.push_back(std::move(r));
      }
    } else {
      for (const auto& t : tasks) {
        takeInjectedLatencyMs();
        out.push_back(t());
        worst = std::max(worst, takeInjectedLatencyMs());
      }
    }
    stats.modeledMs += worst;
    op(node).modeledMs += worst;
    ++stats.rounds;
    stats.requests += static_cast<int64_t>(tasks.size());
    op(node).requests += static_cast<int64_t>(tasks.size());
    return out;
  }

  void addTuples(int node, int64_t n) {
    stats.tuples += n;
    op(node).tuples += n;
  }

  const std::vector<Value>& param(const std::string& name) const { return params.at(name); }

  std::vector<Value> operandValues(const BoundOperand& o) const {
    if (o.kind == Operand::Kind::kLiteral) return {o.literal};
    if (o.kind == Operand::Kind::kParam) return param(o.param);
    throw Error("internal: column operand has no constant value");
  }

  std::string tokenOf(const BoundOperand& o) const {
    Value v = operandValues(o).at(0);
    auto tokens = tokenize(v.asString());
    if (tokens.size() != 1)
      throw QueryError("LIKE parameter must be a single word, got '" + v.asString() + "'");
    return tokens[0];
  }

  KvStore& store;
  const BoundQuery& q;
  const ExecuteOptions& opts;
  std::map<std::string, std::vector<Value>> params;
  ExecutionStats stats;
  Resume resume;
  bool anchorTruncated = false;
};

bool evalPredicate(const Context& ctx, int index, const Row& row) {
  const BoundPredicate& p = ctx.q.predicates[index];
  const Value& lhs = row.rels[p.lhs.rel][p.lhs.col];
  switch (p.kind) {
    case PredicateKind::kJoinEquality:
      return lhs == row.rels[p.rhs.column.rel][p.rhs.column.col];
    case PredicateKind::kTokenMatch: {
      std::string word = p.rhs.kind == Operand::Kind::kLiteral ? p.rhs.literal.asString() : ctx.tokenOf(p.rhs);
      auto tokens = tokenize(lhs.asString());
      return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
    }
    case PredicateKind::kInList: {
      const auto& vals = ctx.operandValues(p.rhs);
      return std::find(vals.begin(), vals.end(), lhs) != vals.end();
    }
    case PredicateKind::kEquality:
    case PredicateKind::kInequality: {
      auto c = lhs.compare(ctx.operandValues(p.rhs).at(0));
      switch (p.op) {
        case CompareOp::kEq:
          return c == 0;
        case CompareOp::kLt:
          return c < 0;
        case CompareOp::kLe:
          return c <= 0;
        case CompareOp::kGt:
          return c > 0;
        case CompareOp::kGe:
          return c >= 0;
      }
    }
  }
  return false;
}

// Bytewise-comparable position of a row under the given sort keys, extended
// by the primary keys of all bound relations (or the group values after
// aggregation) so that the order is total.
std::string orderKey(const BoundQuery& q, const Row& row, const std::vector<SortKey>& keys) {
  std::string k;
  for (const auto& s : keys) appendKeyField(k, row.rels[s.attr.rel][s.attr.col], s.descending);
  if (!q.aggregates.empty() || !q.groupBy.empty()) {
    for (const auto& g : q.groupBy) appendKeyField(k, row.rels[g.rel][g.col]);
    return k;
  }
  for (std::size_t r = 0; r < row.rels.size(); ++r) {
    if (row.rels[r].empty()) continue;
    for (auto idx : q.relations[r].table.primaryKeyIndexes()) appendKeyField(k, row.rels[r][idx]);
  }
  return k;
}

class Operator {
 public:
  virtual ~Operator() = default;
  virtual void open() = 0;
  virtual std::optional<Row> next() = 0;
};

using OpPtr = std::unique_ptr<Operator>;

// ---------------------------------------------------------------------------
// Probe-based remote access shared by IndexScan and SortedIndexJoin: one
// key range per probe, merged by (key suffix, probe prefix, probe order).

struct Entry {
  KvRecord rec;
  std::optional<Tuple> tuple;
  bool resolved = false;
};

struct Probe {
  std::string prefix;
  KeyRange range;
  std::optional<int64_t> remaining;
  bool exhausted = false;
  std::deque<Entry> buf;
  Row outer;
  int64_t rank = 0;
};

class ProbeMerger {
 public:
  ProbeMerger(Context& ctx, const PhysicalNode& node)
      : ctx_(ctx), node_(node), table_(ctx.q.relations[node.rel].table) {}

  std::vector<Probe> probes;

  void start() {
    std::sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) { return a.prefix < b.prefix; });
    std::map<std::string, int64_t> seen;
    for (auto& p : probes) {
      p.rank = seen[p.prefix]++;
      p.remaining = node_.limitHint;
      applyResume(p);
    }
    std::vector<Probe*> all;
    for (auto& p : probes)
      if (!p.exhausted) all.push_back(&p);
    if (ctx_.opts.strategy != Strategy::kLazy) fetch(all);
  }

  // Next entry in merged order, with its probe.
  std::optional<std::pair<Entry, Probe*>> next() {
    while (true) {
      std::vector<Probe*> need;
      for (auto& p : probes)
        if (p.buf.empty() && !p.exhausted) need.push_back(&p);
      if (!need.empty()) fetch(need);
      Probe* best = nullptr;
      for (auto& p : probes) {
        if (p.buf.empty()) continue;
        if (!best || before(p, *best)) best = &p;
      }
      if (!best) return std::nullopt;
      Entry e = std::move(best->buf.front());
      best->buf.pop_front();
      if (!e.resolved) resolveOne(e);
      if (e.tuple) return std::make_pair(std::move(e), best);
    }
  }

 private:
  std::string_view suffix(const Probe& p) const {
    return std::string_view(p.buf.front().rec.key).substr(p.prefix.size());
  }

  bool before(const Probe& a, const Probe& b) const {
    int c = compareKeys(suffix(a), suffix(b));
    if (c != 0) return node_.descending ? c > 0 : c < 0;
    if (a.prefix != b.prefix) return a.prefix < b.prefix;
    return a.rank < b.rank;
  }

  void applyResume(Probe& p) {
    if (ctx_.resume.nodeId != node_.id) return;
    const PageCursor& c = *ctx_.resume.cursor;
    bool consumedAtSuffix = p.prefix < c.lastPrefix || (p.prefix == c.lastPrefix && p.rank <= c.ordinal);
    std::string at = p.prefix + c.lastSuffix;
    if (!node_.descending) {
      std::string start = consumedAtSuffix ? keySuccessor(at) : at;
      if (start > p.range.start) p.range.start = start;
    } else {
      std::string end = consumedAtSuffix ? at : keySuccessor(at);
      if (!p.range.end || end < *p.range.end) p.range.end = end;
    }
    if (p.range.end && p.range.start >= *p.range.end) p.exhausted = true;
  }

  int64_t batchFor(const Probe& p) const {
    if (ctx_.opts.strategy == Strategy::kLazy) return 1;
    return p.remaining ? *p.remaining : kUnboundedBatch;
  }

  void absorb(Probe& p, std::vector<KvRecord> recs, int64_t asked) {
    const int64_t got = static_cast<int64_t>(recs.size());
    ctx_.addTuples(node_.id, got);
    if (got > 0) {
      if (!node_.descending) {
        p.range.start = keySuccessor(recs.back().key);
      } else {
        p.range.end = recs.back().key;
      }
    }
    if (p.remaining) *p.remaining -= got;
    if (got < asked) {
      p.exhausted = true;
    } else if (p.remaining && *p.remaining <= 0) {
      p.exhausted = true;
      ctx_.anchorTruncated = true;
    }
    for (auto& r : recs) {
      Entry e;
      e.rec = std::move(r);
      if (node_.covering) {
        e.tuple = decodeTuple(e.rec.value, columnTypes());
        e.resolved = true;
      }
      p.buf.push_back(std::move(e));
    }
  }

  const std::vector<ColumnType>& columnTypes() {
    if (types_.empty())
      for (const auto& c : table_.columns) types_.push_back(c.type);
    return types_;
  }

  void fetch(const std::vector<Probe*>& ps) {
    const Direction dir = node_.descending ? Direction::kDescending : Direction::kAscending;
    std::vector<Entry*> fresh;
    auto collect = [&](Probe& p, std::size_t from) {
      for (std::size_t i = from; i < p.buf.size(); ++i)
        if (!p.buf[i].resolved) fresh.push_back(&p.buf[i]);
    };
    if (ctx_.opts.strategy == Strategy::kParallel && ps.size() > 1) {
      std::vector<std::function<std::vector<KvRecord>()>> tasks;
      std::vector<int64_t> asked;
      for (Probe* p : ps) {
        int64_t n = batchFor(*p);
        asked.push_back(n);
        KeyRange range = p->range;
        tasks.push_back([this, range, n, dir] {
          return ctx_.store.getRange(range, static_cast<std::size_t>(n), dir);
        });
      }
      auto results = ctx_.wave<std::vector<KvRecord>>(node_.id, tasks);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        std::size_t from = ps[i]->buf.size();
        absorb(*ps[i], std::move(results[i]), asked[i]);
        collect(*ps[i], from);
      }
    } else {
      for (Probe* p : ps) {
        int64_t n = batchFor(*p);
        auto recs = ctx_.seq(node_.id, [&] { return ctx_.store.getRange(p->range, static_cast<std::size_t>(n), dir); });
        std::size_t from = p->buf.size();
        absorb(*p, std::move(recs), n);
        collect(*p, from);
      }
    }
    if (node_.covering || ctx_.opts.strategy == Strategy::kLazy) return;
    // Dereference index entries: one wave, or sequential gets.
    if (ctx_.opts.strategy == Strategy::kParallel) {
      std::vector<std::function<std::optional<std::string>()>> tasks;
      for (Entry* e : fresh) {
        KvKey key = recordKeyFromSuffix(table_, e->rec.value);
        tasks.push_back([this, key] { return ctx_.store.get(key); });
      }
      auto results = ctx_.wave<std::optional<std::string>>(node_.id, tasks);
      for (std::size_t i = 0; i < fresh.size(); ++i) finish(*fresh[i], results[i]);
    } else {
      for (Entry* e : fresh) resolveOne(*e);
    }
  }

  void resolveOne(Entry& e) {
    KvKey key = recordKeyFromSuffix(table_, e.rec.value);
    auto v = ctx_.seq(node_.id, [&] { return ctx_.store.get(key); });
    finish(e, v);
  }

  void finish(Entry& e, const std::optional<std::string>& value) {
    e.resolved = true;
    if (!value) return;  // dangling entry
    Tuple t = decodeTuple(*value, columnTypes());
    if (!tupleMatchesEntry(node_.index, table_, t, e.rec.key)) return;  // stale entry
    e.tuple = std::move(t);
  }

  Context& ctx_;
  const PhysicalNode& node_;
  const TableDef& table_;
  std::vector<ColumnType> types_;
};

// Prefix and range of one probe given the outer row (if any).
std::vector<Probe> buildProbes(Context& ctx, const PhysicalNode& node, const Row* outer) {
  std::vector<std::string> prefixes{indexKeyPrefix(node.index)};
  for (const auto& part : node.prefix) {
    std::vector<Value> values;
    switch (part.source) {
      case KeyPart::Source::kValue:
      case KeyPart::Source::kList:
        values = ctx.operandValues(part.value);
        break;
      case KeyPart::Source::kToken:
        values = {Value::string(part.value.kind == Operand::Kind::kLiteral ? part.value.literal.asString()
                                                                            : ctx.tokenOf(part.value))};
        break;
      case KeyPart::Source::kJoin:
        values = {outer->rels[part.joinAttr.rel][part.joinAttr.col]};
        break;
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<std::string> next;
    for (const auto& p : prefixes)
      for (const auto& v : values) {
        std::string k = p;
        appendKeyField(k, v.coerceTo(part.type));
        next.push_back(std::move(k));
      }
    prefixes = std::move(next);
  }
  // Range on the field following the prefix.
  std::optional<Value> lower, upper;
  bool lowerInclusive = true, upperInclusive = true;
  for (int pi : node.rangePreds) {
    const auto& p = ctx.q.predicates[pi];
    Value v = ctx.operandValues(p.rhs).at(0).coerceTo(node.fieldTypes.at(node.prefix.size()));
    bool isLower = p.op == CompareOp::kGt || p.op == CompareOp::kGe;
    bool inclusive = p.op == CompareOp::kGe || p.op == CompareOp::kLe;
    if (isLower) {
      if (!lower || v > *lower || (v == *lower && !inclusive)) {
        lower = v;
        lowerInclusive = inclusive;
      }
    } else if (!upper || v < *upper || (v == *upper && !inclusive)) {
      upper = v;
      upperInclusive = inclusive;
    }
  }
  std::vector<Probe> out;
  for (auto& prefix : prefixes) {
    Probe p;
    p.prefix = prefix;
    p.range = KeyRange::prefix(prefix);
    if (lower) {
      std::string k = prefix;
      appendKeyField(k, *lower);
      p.range.start = lowerInclusive ? k : prefixSuccessor(k).value();
    }
    if (upper) {
      std::string k = prefix;
      appendKeyField(k, *upper);
      p.range.end = upperInclusive ? prefixSuccessor(k).value() : k;
    }
    if (p.range.end && p.range.start >= *p.range.end) p.exhausted = true;
    if (outer) p.outer = *outer;
    out.push_back(std::move(p));
  }
  return out;
}

Row emptyRow(const Context& ctx) {
  Row r;
  r.rels.resize(ctx.q.relations.size());
  return r;
}

class IndexScanOp : public Operator {
 public:
  IndexScanOp(Context& ctx, const PhysicalNode& node) : ctx_(ctx), node_(node), merger_(ctx, node) {}

  void open() override {
    merger_.probes = buildProbes(ctx_, node_, nullptr);
    merger_.start();
  }

  std::optional<Row> next() override {
    while (auto e = merger_.next()) {
      Row r = emptyRow(ctx_);
      r.rels[node_.rel] = std::move(*e->first.tuple);
      setAnchor(r, *e->second, e->first.rec.key);
      bool ok = true;
      for (int pi : node_.residual) ok = ok && evalPredicate(ctx_, pi, r);
      if (ok) return r;
    }
    return std::nullopt;
  }

  void setAnchor(Row& r, const Probe& p, const std::string& key) {
    r.anchorNode = node_.id;
    r.anchorPrefix = p.prefix;
    r.anchorSuffix = key.substr(p.prefix.size());
    r.anchorOrdinal = p.rank;
  }

 private:
  Context& ctx_;
  const PhysicalNode& node_;
  ProbeMerger merger_;
};

class SortedIndexJoinOp : public Operator {
 public:
  SortedIndexJoinOp(Context& ctx, const PhysicalNode& node, OpPtr child)
      : ctx_(ctx), node_(node), child_(std::move(child)), merger_(ctx, node) {}

  void open() override {
    child_->open();
    while (auto outer = child_->next()) {
      auto ps = buildProbes(ctx_, node_, &*outer);
      for (auto& p : ps) merger_.probes.push_back(std::move(p));
    }
    merger_.start();
  }

  std::optional<Row> next() override {
    while (auto e = merger_.next()) {
      Probe& p = *e->second;
      Row r = p.outer;
      r.rels[node_.rel] = std::move(*e->first.tuple);
      bool ok = true;
      for (int pi : node_.residual) ok = ok && evalPredicate(ctx_, pi, r);
      if (!ok) continue;
      r.anchorNode = node_.id;
      r.anchorPrefix = p.prefix;
      r.anchorSuffix = e->first.rec.key.substr(p.prefix.size());
      r.anchorOrdinal = p.rank;
      return r;
    }
    return std::nullopt;
  }

 private:
  Context& ctx_;
  const PhysicalNode& node_;
  OpPtr child_;
  ProbeMerger merger_;
};

class IndexFKJoinOp : public Operator {
 public:
  IndexFKJoinOp(Context& ctx, const PhysicalNode& node, OpPtr child)
      : ctx_(ctx), node_(node), child_(std::move(child)), table_(ctx.q.relations[node.rel].table) {
    for (const auto& c : table_.columns) types_.push_back(c.type);
  }

  void open() override {
    child_->open();
    if (ctx_.opts.strategy == Strategy::kLazy) return;
    std::vector<Row> outers;
    while (auto r = child_->next()) outers.push_back(std::move(*r));
    std::vector<std::optional<std::string>> values;
    if (ctx_.opts.strategy == Strategy::kParallel) {
      std::vector<std::function<std::optional<std::string>()>> tasks;
      for (const auto& o : outers) {
        KvKey key = keyFor(o);
        tasks.push_back([this, key] { return ctx_.store.get(key); });
      }
      values = ctx_.wave<std::optional<std::string>>(node_.id, tasks);
    } else {
      for (const auto& o : outers) {
        KvKey key = keyFor(o);
        values.push_back(ctx_.seq(node_.id, [&] { return ctx_.store.get(key); }));
      }
    }
    for (std::size_t i = 0; i < outers.size(); ++i)
      if (auto r = combine(std::move(outers[i]), values[i])) ready_.push_back(std::move(*r));
  }

  std::optional<Row> next() override {
    if (ctx_.opts.strategy != Strategy::kLazy) {
      if (ready_.empty()) return std::nullopt;
      Row r = std::move(ready_.front());
      ready_.pop_front();
      return r;
    }
    while (auto outer = child_->next()) {
      KvKey key = keyFor(*outer);
      auto v = ctx_.seq(node_.id, [&] { return ctx_.store.get(key); });
      if (auto r = combine(std::move(*outer), v)) return r;
    }
    return std::nullopt;
  }

 private:
  KvKey keyFor(const Row& outer) const {
    KvKey k = indexKeyPrefix(node_.index);
    for (const auto& part : node_.prefix) {
      Value v = part.source == KeyPart::Source::kJoin ? outer.rels[part.joinAttr.rel][part.joinAttr.col]
                                                       : ctx_.operandValues(part.value).at(0);
      appendKeyField(k, v.coerceTo(part.type));
    }
    return k;
  }

  std::optional<Row> combine(Row outer, const std::optional<std::string>& value) {
    if (!value) return std::nullopt;
    ctx_.addTuples(node_.id, 1);
    outer.rels[node_.rel] = decodeTuple(*value, types_);
    for (int pi : node_.residual)
      if (!evalPredicate(ctx_, pi, outer)) return std::nullopt;
    return outer;
  }

  Context& ctx_;
  const PhysicalNode& node_;
  OpPtr child_;
  const TableDef& table_;
  std::vector<ColumnType> types_;
  std::deque<Row> ready_;
};

class SelectionOp : public Operator {
 public:
  SelectionOp(Context& ctx, int pred, OpPtr child) : ctx_(ctx), pred_(pred), child_(std::move(child)) {}
  void open() override { child_->open(); }
  std::optional<Row> next() override {
    while (auto r = child_->next())
      if (evalPredicate(ctx_, pred_, *r)) return r;
    return std::nullopt;
  }

 private:
  Context& ctx_;
  int pred_;
  OpPtr child_;
};

class SortOp : public Operator {
 public:
  SortOp(Context& ctx, std::vector<SortKey> keys, OpPtr child)
      : ctx_(ctx), keys_(std::move(keys)), child_(std::move(child)) {}
  void open() override {
    child_->open();
    std::vector<std::pair<std::string, Row>> rows;
    while (auto r = child_->next()) rows.emplace_back(orderKey(ctx_.q, *r, keys_), std::move(*r));
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return compareKeys(a.first, b.first) < 0; });
    for (auto& [k, r] : rows) out_.push_back(std::move(r));
  }
  std::optional<Row> next() override {
    if (out_.empty()) return std::nullopt;
    Row r = std::move(out_.front());
    out_.pop_front();
    return r;
  }

 private:
  Context& ctx_;
  std::vector<SortKey> keys_;
  OpPtr child_;
  std::deque<Row> out_;
};

class StopOp : public Operator {
 public:
  StopOp(int64_t count, OpPtr child) : count_(count), child_(std::move(child)) {}
  void open() override {
    child_->open();
    emitted_ = 0;
  }
  std::optional<Row> next() override {
    if (emitted_ >= count_) return std::nullopt;
    auto r = child_->next();
    if (r) ++emitted_;
    return r;
  }

 private:
  int64_t count_;
  int64_t emitted_ = 0;
  OpPtr child_;
};

class AggregateOp : public Operator {
 public:
  AggregateOp(Context& ctx, OpPtr child) : ctx_(ctx), child_(std::move(child)) {}

  void open() override {
    child_->open();
    const auto& q = ctx_.q;
    struct Group {
      Row rep;
      std::vector<std::optional<Value>> acc;
      int64_t rows = 0;
    };
    std::map<std::string, Group> groups;
    while (auto r = child_->next()) {
      std::string key;
      for (const auto& g : q.groupBy) appendKeyField(key, r->rels[g.rel][g.col]);
      auto [it, inserted] = groups.try_emplace(key);
      Group& g = it->second;
      if (inserted) {
        g.rep = *r;
        g.acc.resize(q.aggregates.size());
      }
      ++g.rows;
      for (std::size_t i = 0; i < q.aggregates.size(); ++i) {
        const auto& a = q.aggregates[i];
        auto& acc = g.acc[i];
        if (a.fn == AggregateFn::kCount) continue;
        const Value& v = r->rels[a.attr.rel][a.attr.col];
        if (!acc) {
          acc = v;
        } else if (a.fn == AggregateFn::kSum) {
          acc = Value::int64(acc->asInt() + v.asInt());
        } else if ((a.fn == AggregateFn::kMin && v < *acc) || (a.fn == AggregateFn::kMax && v > *acc)) {
          acc = v;
        }
      }
    }
    // A global aggregate over no rows yields COUNT/SUM of 0; with MIN/MAX
    // there is no value to report, so no row is produced.
    if (groups.empty() && q.groupBy.empty()) {
      bool minMax = std::any_of(q.aggregates.begin(), q.aggregates.end(), [](const AggregateSpec& a) {
        return a.fn == AggregateFn::kMin || a.fn == AggregateFn::kMax;
      });
      if (!minMax) {
        Group& g = groups[""];
        g.rep = emptyRow(ctx_);
        g.acc.resize(q.aggregates.size());
      }
    }
    for (auto& [key, g] : groups) {
      Row r = std::move(g.rep);
      r.computed.clear();
      for (std::size_t i = 0; i < q.aggregates.size(); ++i) {
        const auto& a = q.aggregates[i];
        if (a.fn == AggregateFn::kCount) {
          r.computed.push_back(Value::int64(g.rows));
        } else {
          r.computed.push_back(g.acc[i] ? *g.acc[i] : Value::int64(0));
        }
      }
      out_.push_back(std::move(r));
    }
  }

  std::optional<Row> next() override {
    if (out_.empty()) return std::nullopt;
    Row r = std::move(out_.front());
    out_.pop_front();
    return r;
  }

 private:
  Context& ctx_;
  OpPtr child_;
  std::deque<Row> out_;
};

OpPtr build(Context& ctx, const PhysicalNode& n) {
  auto child = [&]() { return build(ctx, *n.children.at(0)); };
  switch (n.op) {
    case PhysicalOp::kIndexScan:
      return std::make_unique<IndexScanOp>(ctx, n);
    case PhysicalOp::kSortedIndexJoin:
      return std::make_unique<SortedIndexJoinOp>(ctx, n, child());
    case PhysicalOp::kIndexFKJoin:
      return std::make_unique<IndexFKJoinOp>(ctx, n, child());
    case PhysicalOp::kLocalSelection:
      return std::make_unique<SelectionOp>(ctx, n.pred, child());
    case PhysicalOp::kLocalSort:
      return std::make_unique<SortOp>(ctx, n.keys, child());
    case PhysicalOp::kLocalStop:
      return std::make_unique<StopOp>(n.count, child());
    case PhysicalOp::kLocalAggregate:
      return std::make_unique<AggregateOp>(ctx, child());
  }
  throw Error("internal: unknown physical operator");
}

Tuple project(const BoundQuery& q, const Row& r) {
  Tuple out;
  out.reserve(q.outputs.size());
  for (const auto& o : q.outputs)
    out.push_back(o.attr ? r.rels[o.attr->rel][o.attr->col] : r.computed.at(o.aggregate));
  return out;
}

std::vector<std::string> columnNames(const BoundQuery& q) {
  std::vector<std::string> names;
  for (const auto& o : q.outputs) names.push_back(o.name);
  return names;
}

void enforceBounds(const CompiledQuery& cq, const ExecutionStats& stats, const ExecuteOptions& opts) {
  if (!opts.checkBounds || !cq.bound.bounded) return;
  bool checkRequests = opts.strategy != Strategy::kLazy;
  if ((checkRequests && stats.requests > cq.bound.maxRequests) || stats.tuples > cq.bound.maxTuples)
    throw ExecutionError("operation bound exceeded: " + stats.summary() + " vs requests<=" +
                         std::to_string(cq.bound.maxRequests) + " tuples<=" + std::to_string(cq.bound.maxTuples));
}

// The operator whose output order the paginated result follows, or null
// when that order is produced by a local sort or aggregation.
const PhysicalNode* anchorOperator(const PhysicalNode* n) {
  while (n) {
    switch (n->op) {
      case PhysicalOp::kIndexScan:
      case PhysicalOp::kSortedIndexJoin:
        return n;
      case PhysicalOp::kLocalSort:
      case PhysicalOp::kLocalAggregate:
        return nullptr;
      default:
        n = n->child();
    }
  }
  return nullptr;
}

const PhysicalNode* firstSort(const PhysicalNode* n) {
  for (; n; n = n->child())
    if (n->op == PhysicalOp::kLocalSort) return n;
  return nullptr;
}

}  // namespace

QueryResult Engine::execute(const CompiledQuery& cq, const Params& params, const ExecuteOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Context ctx(*store_, cq, params, opts);
  QueryResult result;
  result.columns = columnNames(cq.query());
  auto root = build(ctx, *cq.physical.root());
  root->open();
  while (auto r = root->next()) result.rows.push_back(project(cq.query(), *r));
  ctx.stats.wallMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  result.stats = std::move(ctx.stats);
  enforceBounds(cq, result.stats, opts);
  return result;
}

PageResult Engine::executePage(const CompiledQuery& cq, const Params& params,
                               const std::optional<PageCursor>& cursor, const ExecuteOptions& opts) {
  if (!cq.physical.paginated()) throw QueryError("query has no PAGINATE clause");
  auto t0 = std::chrono::steady_clock::now();
  const PhysicalNode* root = cq.physical.root();
  const int64_t pageSize = root->count;
  const uint64_t qid = queryFingerprint(cq.physical, params);
  const PhysicalNode* anchor = anchorOperator(root->child());
  if (cursor) {
    if (cursor->queryId != qid) throw CursorError("cursor belongs to a different query or parameters");
    if (cursor->pageSize != pageSize) throw CursorError("cursor page size does not match the query");
    if (cursor->anchorNode != (anchor ? anchor->id : -1)) throw CursorError("cursor does not match the plan");
  }
  Context ctx(*store_, cq, params, opts);
  if (cursor && anchor) ctx.resume = {anchor->id, &*cursor};
  std::vector<SortKey> orderKeys;
  if (const PhysicalNode* s = firstSort(root)) orderKeys = s->keys;

  PageResult page;
  page.columns = columnNames(cq.query());
  auto op = build(ctx, *root->child());
  op->open();
  std::optional<Row> last;
  while (static_cast<int64_t>(page.rows.size()) < pageSize) {
    auto r = op->next();
    if (!r) break;
    if (cursor && !anchor && compareKeys(orderKey(cq.query(), *r, orderKeys), cursor->lastOrderKey) <= 0) continue;
    page.rows.push_back(project(cq.query(), *r));
    last = std::move(r);
  }
  bool more = static_cast<int64_t>(page.rows.size()) == pageSize || (anchor && ctx.anchorTruncated);
  if (more && last) {
    PageCursor c;
    c.queryId = qid;
    c.pageSize = pageSize;
    c.anchorNode = anchor ? anchor->id : -1;
    if (anchor) {
      c.lastPrefix = last->anchorPrefix;
      c.lastSuffix = last->anchorSuffix;
      c.ordinal = last->anchorOrdinal;
    } else {
      c.lastOrderKey = orderKey(cq.query(), *last, orderKeys);
    }
    page.cursor = std::move(c);
  } else if (more && cursor) {
    page.cursor = cursor;  // nothing new this time, but the scan was cut short
  }
  ctx.stats.wallMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  page.stats = std::move(ctx.stats);
  enforceBounds(cq, page.stats, opts);
  return page;
}

}  // namespace boundql
