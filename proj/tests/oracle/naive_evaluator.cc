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
#include "naive_evaluator.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace oracle {

using namespace boundql;

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Rel {
  const Table* table;
  std::string visible;
};

struct Col {
  int rel;
  int col;
};

Col resolve(const std::vector<Rel>& rels, const ColumnRef& ref) {
  std::vector<Col> hits;
  for (int r = 0; r < static_cast<int>(rels.size()); ++r) {
    if (!ref.qualifier.empty() && lower(ref.qualifier) != lower(rels[r].visible)) continue;
    for (int c = 0; c < static_cast<int>(rels[r].table->columns.size()); ++c)
      if (lower(rels[r].table->columns[c]) == lower(ref.column)) hits.push_back({r, c});
  }
  if (hits.size() != 1) throw std::runtime_error("oracle cannot resolve column " + ref.toString());
  return hits[0];
}

bool numeric(ColumnType t) { return t == ColumnType::kInt64 || t == ColumnType::kTimestamp; }

}  // namespace

void addTable(Database& db, Table t) {
  auto key = lower(t.name);
  db[key] = std::move(t);
}

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int compareValues(const Value& a, const Value& b) {
  if (numeric(a.type()) && numeric(b.type())) return a.asInt() < b.asInt() ? -1 : a.asInt() > b.asInt() ? 1 : 0;
  if (a.type() == ColumnType::kBool && b.type() == ColumnType::kBool) return int(a.asBool()) - int(b.asBool());
  if (a.type() == ColumnType::kString && b.type() == ColumnType::kString) {
    int c = a.asString().compare(b.asString());
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  throw std::runtime_error("oracle compares incompatible values");
}

Result naiveEvaluate(const QueryAst& q, const Database& db, const Bindings& params) {
  std::vector<Rel> rels;
  for (const auto& t : q.relations) {
    auto it = db.find(lower(t.table));
    if (it == db.end()) throw std::runtime_error("oracle has no table " + t.table);
    rels.push_back({&it->second, t.alias.empty() ? t.table : t.alias});
  }
  auto constant = [&](const Operand& o) -> std::vector<Value> {
    if (o.kind == Operand::Kind::kLiteral) return {o.literal};
    return params.at(o.param.name);
  };

  // Every combination of tuples, filtered.
  std::vector<std::vector<const Tuple*>> combos;
  std::vector<const Tuple*> cur(rels.size());
  std::function<void(std::size_t)> loop = [&](std::size_t r) {
    if (r == rels.size()) {
      for (const auto& p : q.predicates) {
        Col l = resolve(rels, p.lhs);
        const Value& v = (*cur[l.rel])[l.col];
        bool ok = false;
        switch (p.kind) {
          case PredicateKind::kJoinEquality: {
            Col rc = resolve(rels, p.rhs.column);
            ok = compareValues(v, (*cur[rc.rel])[rc.col]) == 0;
            break;
          }
          case PredicateKind::kInList:
            for (const auto& x : constant(p.rhs)) ok = ok || compareValues(v, x) == 0;
            break;
          case PredicateKind::kTokenMatch: {
            auto want = words(constant(p.rhs).at(0).asString());
            auto have = words(v.asString());
            ok = want.size() == 1 && std::find(have.begin(), have.end(), want[0]) != have.end();
            break;
          }
          case PredicateKind::kEquality:
          case PredicateKind::kInequality: {
            int c = compareValues(v, constant(p.rhs).at(0));
            switch (p.op) {
              case CompareOp::kEq: ok = c == 0; break;
              case CompareOp::kLt: ok = c < 0; break;
              case CompareOp::kLe: ok = c <= 0; break;
              case CompareOp::kGt: ok = c > 0; break;
              case CompareOp::kGe: ok = c >= 0; break;
            }
            break;
          }
        }
        if (!ok) return;
      }
      combos.push_back(cur);
      return;
    }
    for (const auto& t : rels[r].table->rows) {
      cur[r] = &t;
      loop(r + 1);
    }
  };
  loop(0);

  // Sort on ORDER BY, then every relation's primary key.
  std::vector<std::pair<Col, bool>> keys;
  for (const auto& k : q.ordering) keys.push_back({resolve(rels, k.column), k.descending});
  for (int r = 0; r < static_cast<int>(rels.size()); ++r)
    for (const auto& pk : rels[r].table->primaryKey)
      keys.push_back({resolve(rels, ColumnRef{rels[r].visible, pk}), false});
  std::sort(combos.begin(), combos.end(), [&](const auto& a, const auto& b) {
    for (const auto& [c, desc] : keys) {
      int x = compareValues((*a[c.rel])[c.col], (*b[c.rel])[c.col]);
      if (x != 0) return desc ? x > 0 : x < 0;
    }
    return false;
  });

  Result res;
  std::vector<Col> out;
  for (const auto& p : q.projections) {
    switch (p.kind) {
      case Projection::Kind::kStar:
        for (int r = 0; r < static_cast<int>(rels.size()); ++r)
          for (int c = 0; c < static_cast<int>(rels[r].table->columns.size()); ++c) out.push_back({r, c});
        break;
      case Projection::Kind::kTableStar:
        for (int r = 0; r < static_cast<int>(rels.size()); ++r) {
          if (lower(rels[r].visible) != lower(p.column.qualifier)) continue;
          for (int c = 0; c < static_cast<int>(rels[r].table->columns.size()); ++c) out.push_back({r, c});
        }
        break;
      case Projection::Kind::kColumn:
        out.push_back(resolve(rels, p.column));
        break;
      case Projection::Kind::kAggregate:
        throw std::runtime_error("oracle does not evaluate aggregates");
    }
  }
  for (const auto& c : out) res.columns.push_back(rels[c.rel].table->columns[c.col]);
  for (const auto& combo : combos) {
    Tuple t;
    for (const auto& c : out) t.push_back((*combo[c.rel])[c.col]);
    res.rows.push_back(std::move(t));
  }
  for (const auto& k : q.ordering) {
    Col c = resolve(rels, k.column);
    int pos = -1;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].rel == c.rel && out[i].col == c.col) pos = static_cast<int>(i);
    res.keyColumns.push_back(pos);
    res.keyDescending.push_back(k.descending);
  }
  if (q.limit) res.limit = q.limit->count;
  return res;
}

namespace {

std::string show(const Tuple& t) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < t.size(); ++i) s << (i ? ", " : "") << t[i].toLiteral();
  return s.str() + ")";
}

bool rowLess(const Tuple& a, const Tuple& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    int c = compareValues(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

std::vector<Tuple> sorted(std::vector<Tuple> v) {
  std::sort(v.begin(), v.end(), rowLess);
  return v;
}

bool sameBag(const std::vector<Tuple>& a, const std::vector<Tuple>& b) {
  auto x = sorted(a), y = sorted(b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (rowLess(x[i], y[i]) || rowLess(y[i], x[i])) return false;
  return true;
}

}  // namespace

std::string checkResult(const Result& expected, const std::vector<Tuple>& got, bool respectLimit) {
  const auto& all = expected.rows;
  std::size_t k = all.size();
  if (respectLimit && expected.limit) k = std::min<std::size_t>(k, static_cast<std::size_t>(*expected.limit));
  if (got.size() != k)
    return "expected " + std::to_string(k) + " rows, got " + std::to_string(got.size());

  bool keysVisible = std::all_of(expected.keyColumns.begin(), expected.keyColumns.end(), [](int c) { return c >= 0; });
  auto keyCompare = [&](const Tuple& a, const Tuple& b) {
    for (std::size_t i = 0; i < expected.keyColumns.size(); ++i) {
      int c = compareValues(a[expected.keyColumns[i]], b[expected.keyColumns[i]]);
      if (c != 0) return expected.keyDescending[i] ? -c : c;
    }
    return 0;
  };
  if (keysVisible)
    for (std::size_t i = 1; i < got.size(); ++i)
      if (keyCompare(got[i - 1], got[i]) > 0) return "rows out of order at " + std::to_string(i) + ": " + show(got[i]);

  if (k == all.size()) {
    if (!sameBag(all, got)) return "row sets differ";
    return "";
  }
  // Some top-k: every returned row is a result row, and the sort keys match
  // those of the expected first k rows.
  std::vector<Tuple> pool = sorted(all);
  for (const auto& r : got) {
    auto it = std::lower_bound(pool.begin(), pool.end(), r, rowLess);
    if (it == pool.end() || rowLess(r, *it)) return "row " + show(r) + " is not a result row";
    pool.erase(it);
  }
  if (expected.keyColumns.empty()) return "";
  if (!keysVisible) return "";  // cannot check order keys that are not projected
  auto keysOf = [&](const std::vector<Tuple>& rows, std::size_t n) {
    std::vector<Tuple> ks;
    for (std::size_t i = 0; i < n; ++i) {
      Tuple t;
      for (int c : expected.keyColumns) t.push_back(rows[i][c]);
      ks.push_back(std::move(t));
    }
    return ks;
  };
  if (!sameBag(keysOf(all, k), keysOf(got, k))) return "returned rows are not a top-" + std::to_string(k);
  return "";
}

}  // namespace oracle
