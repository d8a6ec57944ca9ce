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
#include "boundql/workloads.h"

#include <map>
#include <random>
#include <set>

#include "boundql/error.h"

namespace boundql {
namespace detail {
const std::map<std::string, std::string_view>& fixtureFiles();
}

namespace workloads {

std::string_view fixture(std::string_view path) {
  const auto& files = detail::fixtureFiles();
  auto it = files.find(std::string(path));
  if (it == files.end()) throw Error("no bundled fixture '" + std::string(path) + "'");
  return it->second;
}

std::vector<std::string> fixtureNames() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::fixtureFiles()) out.push_back(name);
  return out;
}

std::vector<NamedQuery> scadrQueries() {
  std::vector<NamedQuery> out;
  for (const char* name : {"users_followed", "recent_thoughts", "thoughtstream", "find_user"})
    out.push_back({name, std::string(fixture(std::string("scadr/") + name + ".sql"))});
  return out;
}

std::string scadrDdl() { return std::string(fixture("scadr/schema.sql")); }

std::string scadrDdlWithoutConstraint() {
  Schema s = parseDdl(scadrDdl());
  s.removeConstraint("Subscriptions", {"ownerUserId"});
  return renderDdl(s);
}

Schema scadrSchema(int64_t subscriptionLimit) {
  Schema s = parseDdl(scadrDdl());
  s.removeConstraint("Subscriptions", {"ownerUserId"});
  s.addConstraint({"Subscriptions", {"ownerUserId"}, subscriptionLimit});
  return s;
}

std::string thoughtstreamQuery(int64_t pageSize) {
  std::string q(fixture("scadr/thoughtstream.sql"));
  auto pos = q.rfind("PAGINATE 10");
  if (pos == std::string::npos) throw Error("thoughtstream fixture has no PAGINATE clause");
  return q.replace(pos, 11, "PAGINATE " + std::to_string(pageSize));
}

std::string tpcwDdl() { return std::string(fixture("tpcw/schema.sql")); }

std::vector<NamedQuery> tpcwQueries() {
  std::vector<NamedQuery> out;
  for (const char* name : {"home", "new_products", "product_detail", "search_by_title", "order_display_last_order",
                           "order_display_lines", "buy_request"})
    out.push_back({name, std::string(fixture(std::string("tpcw/") + name + ".sql"))});
  return out;
}

std::string userName(int64_t i) {
  std::string digits = std::to_string(i);
  return "user" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

int64_t thoughtTimestamp(int64_t user, int64_t k) {
  return 1'300'000'000'000 + k * 60'000 + user;
}

bool subscriptionApproved(int64_t j) { return j % 5 != 4; }

namespace {

constexpr const char* kWords[] = {"coffee", "rain",  "train", "music", "lunch", "code",  "garden",
                                  "movie",  "sunny", "late",  "happy", "book",  "running", "tea"};

}  // namespace

void seedScadr(Engine& engine, const ScadrConfig& config) {
  if (config.subscriptionsPerUser >= config.users)
    throw Error("need more users than subscriptions per user");
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int64_t> pickUser(0, config.users - 1);
  std::uniform_int_distribution<std::size_t> pickWord(0, std::size(kWords) - 1);

  std::vector<Tuple> users, subs, thoughts;
  for (int64_t u = 0; u < config.users; ++u) {
    users.push_back({Value::string(userName(u)), Value::string("pw" + std::to_string(u)),
                     Value::string(std::string(kWords[u % std::size(kWords)]) + "ville")});
    std::set<int64_t> targets;
    while (static_cast<int64_t>(targets.size()) < config.subscriptionsPerUser) {
      int64_t t = pickUser(rng);
      if (t != u) targets.insert(t);
    }
    int64_t j = 0;
    for (int64_t t : targets)
      subs.push_back({Value::string(userName(u)), Value::string(userName(t)), Value::boolean(subscriptionApproved(j++))});
    for (int64_t k = 0; k < config.thoughtsPerUser; ++k) {
      std::string text = std::string(kWords[pickWord(rng)]) + " " + kWords[pickWord(rng)] + " " + kWords[pickWord(rng)];
      thoughts.push_back({Value::string(userName(u)), Value::timestamp(thoughtTimestamp(u, k)), Value::string(text)});
    }
    if (thoughts.size() >= 100'000) {
      engine.bulkLoad("Thoughts", thoughts);
      thoughts.clear();
    }
  }
  engine.bulkLoad("Users", users);
  engine.bulkLoad("Subscriptions", subs);
  engine.bulkLoad("Thoughts", thoughts);
}

WriteResult postThought(Engine& engine, int64_t user, int64_t timestamp, std::string_view text) {
  return engine.insertTuple("Thoughts", {Value::string(userName(user)), Value::timestamp(timestamp),
                                         Value::string(std::string(text))});
}

}  // namespace workloads
}  // namespace boundql
