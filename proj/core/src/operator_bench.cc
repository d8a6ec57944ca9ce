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
#include "boundql/operator_bench.h"

#include <algorithm>
#include <memory>

#include "boundql/error.h"
#include "boundql/slo_model.h"
#include "boundql/workloads.h"

namespace boundql {

namespace {

std::string ownerName(int64_t alphaC) { return "bench_owner_" + std::to_string(alphaC); }
std::string targetName(int64_t k) { return "bench_target_" + std::to_string(k); }

void seed(Engine& engine, int64_t maxChild, int64_t maxPerKey, const std::vector<int64_t>& children) {
  std::vector<Tuple> users, subs, thoughts;
  for (int64_t k = 0; k < maxChild; ++k) {
    users.push_back({Value::string(targetName(k)), Value::string("pw"), Value::string("benchville")});
    for (int64_t t = 0; t < maxPerKey; ++t)
      thoughts.push_back({Value::string(targetName(k)), Value::timestamp(1'000'000 + t * 1000 + k),
                          Value::string("bench thought " + std::to_string(t))});
  }
  for (int64_t c : children) {
    users.push_back({Value::string(ownerName(c)), Value::string("pw"), Value::string("benchville")});
    for (int64_t k = 0; k < c; ++k)
      subs.push_back({Value::string(ownerName(c)), Value::string(targetName(k)), Value::boolean(true)});
  }
  engine.bulkLoad("Users", users);
  engine.bulkLoad("Subscriptions", subs);
  engine.bulkLoad("Thoughts", thoughts);
}

struct Job {
  CompiledQuery query;
  Params params;
  std::vector<std::pair<int, ModelKey>> keys;
};

Job job(const std::string& text, const Schema& schema, Params params) {
  CompiledQuery cq = compile(text, schema);
  auto keys = operatorModelKeys(cq.physical, cq.bound);
  return {std::move(cq), std::move(params), std::move(keys)};
}

std::string withLimit(std::string text, std::string_view clause, int64_t n) {
  auto pos = text.rfind(clause);
  if (pos == std::string::npos) throw Error("fixture lacks " + std::string(clause));
  return text.replace(pos, text.size() - pos, std::string(clause) + " " + std::to_string(n) + "\n");
}

}  // namespace

std::vector<TraceRow> benchmarkOperators(const OperatorBenchConfig& config) {
  if (config.childCardinalities.empty() || config.perKeyLimits.empty())
    throw Error("operator benchmark needs at least one cardinality of each kind");
  if (config.intervalMinutes <= 0 || config.minutes < config.intervalMinutes || config.runsPerInterval <= 0)
    throw Error("operator benchmark needs minutes >= interval > 0 and runs > 0");
  const int64_t maxChild = *std::max_element(config.childCardinalities.begin(), config.childCardinalities.end());
  const int64_t maxPerKey = *std::max_element(config.perKeyLimits.begin(), config.perKeyLimits.end());

  auto memory = std::make_shared<MemoryStore>();
  {
    Engine loader(workloads::scadrSchema(maxChild), memory);
    seed(loader, maxChild, maxPerKey, config.childCardinalities);
  }
  auto slow = std::make_shared<LatencyStore>(memory, config.profile, config.clock);
  Engine engine(workloads::scadrSchema(maxChild), slow);

  std::vector<Job> jobs;
  const std::string stream(workloads::fixture("scadr/thoughtstream.sql"));
  const std::string followed(workloads::fixture("scadr/users_followed.sql"));
  const std::string recent(workloads::fixture("scadr/recent_thoughts.sql"));
  for (int64_t c : config.childCardinalities) {
    // Compile against a limit equal to the owner's actual fan-out so that
    // the bound the model is keyed by is the cardinality exercised.
    Schema s = workloads::scadrSchema(c);
    Params p;
    p.set("user", Value::string(ownerName(c)));
    for (int64_t j : config.perKeyLimits) jobs.push_back(job(withLimit(stream, "PAGINATE", j), s, p));
    jobs.push_back(job(followed, s, p));
  }
  for (int64_t j : config.perKeyLimits) {
    Params p;
    p.set("user", Value::string(targetName(0)));
    jobs.push_back(job(withLimit(recent, "LIMIT", j), engine.schema(), p));
  }

  ExecuteOptions opts;
  opts.strategy = config.strategy;
  opts.threads = config.clock == LatencyStore::Clock::kSleep;
  const int64_t intervalMs = config.intervalMinutes * 60'000;
  const int64_t intervals = config.minutes / config.intervalMinutes;
  std::vector<TraceRow> trace;
  for (int64_t i = 0; i < intervals; ++i) {
    for (int64_t r = 0; r < config.runsPerInterval; ++r) {
      const int64_t t = i * intervalMs + (2 * r + 1) * intervalMs / (2 * config.runsPerInterval);
      slow->setVirtualTimeMs(t);
      const int64_t stamp = slow->nowMs();
      for (const Job& jb : jobs) {
        auto result = engine.execute(jb.query, jb.params, opts);
        for (const auto& [nodeId, key] : jb.keys) {
          auto it = std::find_if(result.stats.perOperator.begin(), result.stats.perOperator.end(),
                                 [&](const OperatorStats& s) { return s.nodeId == nodeId; });
          trace.push_back({stamp, std::string(toString(key.kind)), key.alphaText(), key.beta, it->modeledMs});
        }
      }
    }
  }
  return trace;
}

}  // namespace boundql
