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
// Plan shape, rejection, scaling, strategy and pagination criteria.
#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "acceptance.h"
#include "boundql/error.h"
#include "boundql/executor.h"
#include "boundql/insight.h"
#include "boundql/latency_store.h"
#include "boundql/workloads.h"
#include "naive_evaluator.h"

namespace acceptance {

using namespace boundql;

namespace {

std::string opName(const PhysicalNode* n) { return std::string(toString(n->op)); }

Params userParam(const std::string& name, const std::string& value) {
  Params p;
  p.set(name, Value::string(value));
  return p;
}

}  // namespace

Outcome goldenThoughtstreamPlan() {
  CompiledQuery c = compile(workloads::thoughtstreamQuery(10), workloads::scadrSchema(100));
  // Bottom-up operator sequence.
  std::vector<std::string> seq;
  for (const PhysicalNode* n = c.physical.root(); n; n = n->child()) seq.insert(seq.begin(), opName(n));
  std::vector<std::string> want{"IndexScan", "LocalSelection", "SortedIndexJoin", "LocalStop"};
  std::ostringstream d;
  for (const auto& s : seq) d << s << " ";
  d << "requests<=" << c.bound.maxRequests << " tuples<=" << c.bound.maxTuples;
  const PhysicalNode* scan = c.physical.root();
  while (scan->child()) scan = scan->child();
  const PhysicalNode* sij = c.physical.root()->child();
  bool ok = seq == want && c.bound.maxRequests == 101 && c.bound.maxTuples == 1100 &&
            scan->index.table == "Subscriptions" && sij->index.table == "Thoughts";
  return {ok, d.str()};
}

Outcome goldenSearchByTitlePlan() {
  Schema s = parseDdl(workloads::tpcwDdl());
  CompiledQuery c = compile(workloads::fixture("tpcw/search_by_title.sql"), s);
  const PhysicalNode *scan = nullptr, *join = nullptr;
  for (const auto* n : c.physical.nodes()) {
    if (n->op == PhysicalOp::kIndexScan) scan = n;
    if (n->op == PhysicalOp::kIndexFKJoin) join = n;
  }
  if (!scan || !join) return {false, "missing IndexScan or IndexFKJoin:\n" + c.explain()};
  std::string fields = scan->index.fieldList();
  bool joinOnAuthorId =
      join->index.table == "AUTHOR" && join->prefix.size() == 1 && join->prefix[0].field.column == "A_ID";
  bool ok = fields == "(token(I_TITLE), I_TITLE, I_ID)" && scan->limitHint == 50 && joinOnAuthorId;
  return {ok, "index " + fields + " limit " + std::to_string(scan->limitHint.value_or(-1)) + ", FK join " +
                  join->index.name()};
}

Outcome rejectionAndSuggestion() {
  Schema bare = parseDdl(workloads::scadrDdlWithoutConstraint());
  try {
    compile(workloads::thoughtstreamQuery(), bare);
    return {false, "compiled without the constraint"};
  } catch (const NotScaleIndependent& e) {
    std::string msg = e.what();
    if (msg.find("Not scale-independent") == std::string::npos) return {false, "unexpected message: " + msg};
    Diagnosis d = diagnose(e, bare);
    auto it = std::find_if(d.suggestions.begin(), d.suggestions.end(), [](const ConstraintSuggestion& s) {
      return s.table == "Subscriptions" && s.attributes == std::vector<std::string>{"ownerUserId"};
    });
    if (it == d.suggestions.end()) return {false, "no Subscriptions(ownerUserId) suggestion:\n" + d.toText()};
    Schema fixed = bare;
    fixed.addConstraint({it->table, it->attributes, 100});
    CompiledQuery c = compile(workloads::thoughtstreamQuery(), fixed);
    return {c.bound.bounded, "suggested " + it->ddl(100) + "; recompiled with requests<=" +
                                 std::to_string(c.bound.maxRequests)};
  }
}

Outcome boundsAcrossScales() {
  // Each query is run for the same users at every scale.
  const std::vector<int64_t> scales{1, 4, 10};
  const std::vector<int64_t> probeUsers{0, 1, 17, 123, 999};
  std::map<std::string, std::vector<std::pair<int64_t, int64_t>>> counts;  // query -> (requests, tuples) per scale
  std::ostringstream d;
  bool ok = true;
  for (int64_t scale : scales) {
    auto mem = std::make_shared<MemoryStore>();
    auto counting = std::make_shared<CountingStore>(mem);
    Engine e(workloads::scadrSchema(), counting);
    std::vector<std::pair<std::string, CompiledQuery>> queries;
    for (const auto& nq : workloads::scadrQueries()) queries.emplace_back(nq.name, e.prepare(nq.text));
    workloads::seedScadr(e, {1000 * scale, 100, 10, 7});
    for (const auto& [name, q] : queries) {
      int64_t req = 0, tup = 0;
      for (Strategy s : {Strategy::kSimple, Strategy::kParallel}) {
        ExecuteOptions o;
        o.strategy = s;
        o.threads = false;
        for (int64_t u : probeUsers) {
          counting->reset();
          auto r = e.execute(q, userParam("user", workloads::userName(u)), o);
          if (r.stats.requests != counting->requests() || r.stats.requests > q.bound.maxRequests ||
              r.stats.tuples > q.bound.maxTuples || counting->records() > q.bound.maxTuples) {
            ok = false;
            d << name << " over bound at " << scale << "x; ";
          }
          req += r.stats.requests;
          tup += r.stats.tuples;
        }
      }
      counts[name].push_back({req, tup});
    }
    // The write query: posting a thought.
    int64_t writeReq = 0;
    for (int64_t u : probeUsers) {
      counting->reset();
      auto w = workloads::postThought(e, u, 2'000'000'000'000 + u, "hello scale");
      if (!w.ok()) ok = false;
      writeReq += counting->requests();
    }
    // Thoughts has no secondary index or constraint here: one conditional put.
    if (writeReq != static_cast<int64_t>(probeUsers.size())) ok = false;
    counts["post_thought"].push_back({writeReq, 0});
  }
  for (const auto& [name, v] : counts) {
    bool flat = std::all_of(v.begin(), v.end(), [&](const auto& x) { return x == v.front(); });
    ok = ok && flat;
    d << name << " " << v.front().first << "/" << v.front().second << (flat ? "" : " (varies)") << "; ";
  }
  return {ok, "requests/tuples summed over 5 users and 2 strategies: " + d.str()};
}

namespace {

// Owner "reader" follows n users; every subscription is approved.
void seedReader(Engine& e, const std::vector<int>& thoughtsPerTarget) {
  for (std::size_t i = 0; i < thoughtsPerTarget.size(); ++i) {
    std::string target = "writer" + std::to_string(i);
    e.bulkLoad("Subscriptions", {{Value::string("reader"), Value::string(target), Value::boolean(true)}});
    std::vector<Tuple> th;
    for (int k = 0; k < thoughtsPerTarget[i]; ++k)
      th.push_back({Value::string(target), Value::timestamp(1000 + 10 * k + static_cast<int64_t>(i)),
                    Value::string("thought " + std::to_string(k))});
    e.bulkLoad("Thoughts", th);
  }
}

}  // namespace

Outcome executionStrategies() {
  auto mem = std::make_shared<MemoryStore>();
  {
    Engine seed(workloads::scadrSchema(), mem);
    seedReader(seed, std::vector<int>(10, 20));
  }
  auto slow = std::make_shared<LatencyStore>(mem, LatencyProfile::constant(5.0), LatencyStore::Clock::kSleep);
  Engine e(workloads::scadrSchema(), slow);
  CompiledQuery q = e.prepare(workloads::thoughtstreamQuery());
  Params p = userParam("user", "reader");
  std::map<Strategy, QueryResult> res;
  std::map<Strategy, double> wall;
  for (Strategy s : {Strategy::kLazy, Strategy::kSimple, Strategy::kParallel}) {
    ExecuteOptions o;
    o.strategy = s;
    e.execute(q, p, o);  // warm up thread pools and allocators
    auto t0 = std::chrono::steady_clock::now();
    res[s] = e.execute(q, p, o);
    wall[s] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  bool same = res[Strategy::kLazy].rows == res[Strategy::kSimple].rows &&
              res[Strategy::kSimple].rows == res[Strategy::kParallel].rows && res[Strategy::kSimple].rows.size() == 10;
  const int64_t subs = 10;
  bool ordered = wall[Strategy::kParallel] < wall[Strategy::kSimple] && wall[Strategy::kSimple] < wall[Strategy::kLazy];
  bool rounds = res[Strategy::kParallel].stats.rounds <= 3 && res[Strategy::kSimple].stats.rounds >= 1 + subs;
  char buf[256];
  std::snprintf(buf, sizeof buf, "wall ms parallel=%.0f simple=%.0f lazy=%.0f; rounds %lld/%lld/%lld; identical=%s",
                wall[Strategy::kParallel], wall[Strategy::kSimple], wall[Strategy::kLazy],
                static_cast<long long>(res[Strategy::kParallel].stats.rounds),
                static_cast<long long>(res[Strategy::kSimple].stats.rounds),
                static_cast<long long>(res[Strategy::kLazy].stats.rounds), same ? "yes" : "no");
  return {same && ordered && rounds, buf};
}

Outcome pagination() {
  auto mem = std::make_shared<MemoryStore>();
  std::vector<Tuple> pages;
  std::vector<std::size_t> sizes;
  bool withinBound = true;
  CompiledQuery q;
  {
    Engine e(workloads::scadrSchema(), mem);
    seedReader(e, {10, 8, 7});
  }
  // Every page is served by a fresh engine; only the cursor text is carried over.
  std::optional<std::string> token;
  for (int page = 0; page < 10; ++page) {
    auto counting = std::make_shared<CountingStore>(mem);
    Engine e(workloads::scadrSchema(), counting);
    q = e.prepare(workloads::thoughtstreamQuery(10));
    std::optional<PageCursor> cursor;
    if (token) cursor = PageCursor::deserialize(*token);
    auto r = e.executePage(q, userParam("user", "reader"), cursor);
    withinBound = withinBound && counting->requests() <= q.bound.maxRequests;
    sizes.push_back(r.rows.size());
    pages.insert(pages.end(), r.rows.begin(), r.rows.end());
    if (!r.cursor) break;
    token = r.cursor->serialize();
  }
  // Unpaginated ordered result from the reference evaluator.
  oracle::Database db;
  oracle::Table subs{"Subscriptions", {"ownerUserId", "targetUserId", "approved"},
                     {ColumnType::kString, ColumnType::kString, ColumnType::kBool}, {"ownerUserId", "targetUserId"}, {}};
  oracle::Table th{"Thoughts", {"username", "timestamp", "text"},
                   {ColumnType::kString, ColumnType::kTimestamp, ColumnType::kString}, {"username", "timestamp"}, {}};
  const int counts[] = {10, 8, 7};
  for (int i = 0; i < 3; ++i) {
    std::string target = "writer" + std::to_string(i);
    subs.rows.push_back({Value::string("reader"), Value::string(target), Value::boolean(true)});
    for (int k = 0; k < counts[i]; ++k)
      th.rows.push_back({Value::string(target), Value::timestamp(1000 + 10 * k + i), Value::string("thought " + std::to_string(k))});
  }
  oracle::addTable(db, subs);
  oracle::addTable(db, th);
  auto expected = oracle::naiveEvaluate(parseQuery(workloads::thoughtstreamQuery(10)), db,
                                        {{"user", {Value::string("reader")}}});
  bool equal = expected.rows == pages;
  bool shape = sizes == std::vector<std::size_t>{10, 10, 5};
  std::ostringstream d;
  d << "pages";
  for (auto n : sizes) d << " " << n;
  d << "; equals unpaginated=" << (equal ? "yes" : "no") << "; per-page requests within bound="
    << (withinBound ? "yes" : "no");
  return {equal && shape && withinBound, d.str()};
}

Outcome boundedVersusCostBased() {
  const std::vector<int64_t> popularity{10, 100, 1000, 10000};
  const int64_t owners = 10000;
  auto mem = std::make_shared<MemoryStore>();
  auto slow = std::make_shared<LatencyStore>(mem, LatencyProfile::constant(1.0), LatencyStore::Clock::kVirtual);
  Engine e(workloads::scadrSchema(), slow);
  std::string text(workloads::fixture("scadr/mutual_subscribers.sql"));
  CompiledQuery bounded = e.prepare(text);
  CompileOptions unsafe;
  unsafe.unsafe = true;
  CompiledQuery scan = e.prepare(text, unsafe);
  if (scan.bound.bounded) return {false, "unsafe plan unexpectedly bounded:\n" + scan.explain()};
  std::vector<Tuple> subs;
  for (std::size_t t = 0; t < popularity.size(); ++t)
    for (int64_t o = 0; o < popularity[t]; ++o)
      subs.push_back({Value::string(workloads::userName(o)), Value::string("celebrity" + std::to_string(t)),
                      Value::boolean(true)});
  e.bulkLoad("Subscriptions", subs);

  std::mt19937_64 rng(11);
  std::vector<Value> friends;
  std::vector<int64_t> ids(owners);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int i = 0; i < 50; ++i) friends.push_back(Value::string(workloads::userName(ids[i])));

  std::ostringstream d;
  bool ok = true;
  std::vector<double> scanMs;
  for (std::size_t t = 0; t < popularity.size(); ++t) {
    Params p;
    p.set("target", Value::string("celebrity" + std::to_string(t)));
    p.setList("friends", friends);
    ExecuteOptions o;
    o.strategy = Strategy::kParallel;
    o.threads = false;
    auto b = e.execute(bounded, p, o);
    o.checkBounds = false;
    o.strategy = Strategy::kSimple;
    auto u = e.execute(scan, p, o);
    std::vector<Tuple> x = b.rows, y = u.rows;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    ok = ok && b.stats.requests == 50 && x == y;
    scanMs.push_back(u.stats.modeledMs);
    d << popularity[t] << ": bounded " << b.stats.requests << " req, scan " << u.stats.requests << " req "
      << u.stats.modeledMs << " ms; ";
  }
  // Linear lower envelope: time per subscriber never falls below the largest case's.
  double slope = scanMs.back() / static_cast<double>(popularity.back());
  for (std::size_t i = 0; i < popularity.size(); ++i) {
    if (i && !(scanMs[i] > scanMs[i - 1])) ok = false;
    if (scanMs[i] < 0.9 * slope * static_cast<double>(popularity[i])) ok = false;
  }
  return {ok, d.str()};
}

}  // namespace acceptance
