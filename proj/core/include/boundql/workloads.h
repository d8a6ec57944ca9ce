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
#include <string>
#include <string_view>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/executor.h"

namespace boundql::workloads {

// Bundled DDL and query files, e.g. "scadr/thoughtstream.sql".
std::string_view fixture(std::string_view path);
std::vector<std::string> fixtureNames();

struct NamedQuery {
  std::string name;
  std::string text;
};

// Users followed, recent thoughts, thoughtstream, find user.
std::vector<NamedQuery> scadrQueries();
std::string scadrDdl();
// The thoughtstream schema without the per-owner subscription limit.
std::string scadrDdlWithoutConstraint();
Schema scadrSchema(int64_t subscriptionLimit = 100);
std::string thoughtstreamQuery(int64_t pageSize = 10);

std::string tpcwDdl();
std::vector<NamedQuery> tpcwQueries();

struct ScadrConfig {
  int64_t users = 1000;
  int64_t thoughtsPerUser = 100;
  int64_t subscriptionsPerUser = 10;
  uint64_t seed = 7;
};

std::string userName(int64_t i);
int64_t thoughtTimestamp(int64_t user, int64_t k);
// Subscription j of any owner is approved unless j % 5 == 4.
bool subscriptionApproved(int64_t j);

// Deterministic population: each user owns exactly subscriptionsPerUser
// subscriptions to distinct other users and thoughtsPerUser thoughts.
void seedScadr(Engine& engine, const ScadrConfig& config);

// Inserts a new thought through the write protocol.
WriteResult postThought(Engine& engine, int64_t user, int64_t timestamp, std::string_view text);

}  // namespace boundql::workloads
