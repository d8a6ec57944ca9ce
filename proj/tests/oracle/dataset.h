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

// Test datasets generated independently of the library's workload seeder,
// loaded both into an engine and into the reference database.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/executor.h"
#include "naive_evaluator.h"

namespace oracle {

using Rows = std::map<std::string, std::vector<boundql::Tuple>>;

Table tableFrom(const boundql::TableDef& def, std::vector<boundql::Tuple> rows = {});
Database databaseFrom(const boundql::Schema& schema, const Rows& rows);
void bulkLoad(boundql::Engine& engine, const Rows& rows);

struct Microblog {
  int64_t users = 30;
  int64_t thoughtsPerUser = 8;
  int64_t maxSubscriptions = 12;  // each owner follows 0..max others
  uint64_t seed = 1;
};

// Users, Subscriptions (with random approval) and Thoughts whose text is
// drawn from a small vocabulary so keyword predicates match.
Rows makeMicroblog(const Microblog& config);
std::string user(int64_t i);
const std::vector<std::string>& vocabulary();

}  // namespace oracle
