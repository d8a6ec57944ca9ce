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
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/cursor.h"
#include "boundql/index_layout.h"
#include "boundql/kvstore.h"
#include "boundql/physical_planner.h"
#include "boundql/query.h"

namespace boundql {

enum class Strategy { kLazy, kSimple, kParallel };
std::string_view toString(Strategy s);
std::optional<Strategy> strategyFromString(std::string_view s);

struct OperatorStats {
  int nodeId = 0;
  std::string op;
  int64_t requests = 0;
  int64_t tuples = 0;
  double modeledMs = 0.0;  // injected latency attributed to this operator
};

struct ExecutionStats {
  int64_t requests = 0;
  int64_t tuples = 0;
  // Latency rounds on the critical path: a sequential request is one round,
  // a parallel wave of requests is one round.
  int64_t rounds = 0;
  // Injected store latency along the critical path (sum over sequential
  // requests, max within a wave).
  double modeledMs = 0.0;
  double wallMs = 0.0;
  std::vector<OperatorStats> perOperator;

  std::string summary() const;  // requests=<n> tuples=<n> wall_ms=<n>
};

struct ExecuteOptions {
  Strategy strategy = Strategy::kSimple;
  // Throw ExecutionError when counts exceed the static bound. The lazy
  // strategy issues one request per tuple, so only tuples are checked there.
  bool checkBounds = true;
  // Issue parallel waves from worker threads. When false a wave runs on the
  // calling thread and only its accounting is parallel, which is equivalent
  // under a virtual-clock latency store.
  bool threads = true;
};

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<Tuple> rows;
  ExecutionStats stats;
};

struct PageResult {
  std::vector<std::string> columns;
  std::vector<Tuple> rows;
  ExecutionStats stats;
  std::optional<PageCursor> cursor;  // empty once the result is exhausted
};

enum class WriteStatus { kOk, kDuplicateKey, kCardinalityViolation, kNotFound };
std::string_view toString(WriteStatus s);

struct WriteResult {
  WriteStatus status = WriteStatus::kOk;
  std::string message;
  bool ok() const { return status == WriteStatus::kOk; }
};

// Steps of the index maintenance protocol, in execution order.
enum class WriteStep { kIndexInsert, kRecordWrite, kIndexCleanup, kCardinalityCheck };

// Stateless query engine over a shared store. The schema (including every
// index being maintained) is the only engine state; all query state lives in
// the caller (parameters, cursors).
class Engine {
 public:
  Engine(Schema schema, std::shared_ptr<KvStore> store);

  Schema schema() const;
  KvStore& store() { return *store_; }
  std::shared_ptr<KvStore> sharedStore() { return store_; }

  // Compiles and makes sure the plan's indexes exist (back-filling new ones).
  CompiledQuery prepare(std::string_view text, const CompileOptions& options = {});
  CompiledQuery prepare(const QueryAst& ast, const CompileOptions& options = {});
  void ensureIndex(const IndexDef& index);

  QueryResult execute(const CompiledQuery& query, const Params& params, const ExecuteOptions& options = {});
  PageResult executePage(const CompiledQuery& query, const Params& params,
                         const std::optional<PageCursor>& cursor, const ExecuteOptions& options = {});

  WriteResult insertTuple(std::string_view table, Tuple tuple);
  WriteResult updateTuple(std::string_view table, Tuple tuple);
  WriteResult deleteTuple(std::string_view table, const Tuple& primaryKey);
  // Seeding path: writes records and index entries directly, without
  // constraint checks.
  void bulkLoad(std::string_view table, const std::vector<Tuple>& tuples);

  // Removes index entries whose base record is missing or no longer matches.
  std::size_t sweepDanglingEntries();

  // Called before every protocol step; throwing aborts the write there.
  void setFaultHook(std::function<void(WriteStep)> hook) { faultHook_ = std::move(hook); }

 private:
  Tuple checkTuple(const TableDef& table, Tuple tuple) const;
  WriteResult write(const TableDef& table, const std::optional<Tuple>& before, const Tuple& after);
  void step(WriteStep s) {
    if (faultHook_) faultHook_(s);
  }

  mutable std::shared_mutex schemaMu_;
  Schema schema_;
  std::shared_ptr<KvStore> store_;
  std::function<void(WriteStep)> faultHook_;
};

}  // namespace boundql
