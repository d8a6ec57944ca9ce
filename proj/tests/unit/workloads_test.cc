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
#include <gtest/gtest.h>

#include <set>

#include "boundql/workloads.h"

using namespace boundql;

TEST(Workloads, FixturesAreBundled) {
  auto names = workloads::fixtureNames();
  std::set<std::string> s(names.begin(), names.end());
  EXPECT_TRUE(s.count("scadr/schema.sql"));
  EXPECT_TRUE(s.count("tpcw/search_by_title.sql"));
  EXPECT_NE(workloads::fixture("scadr/thoughtstream.sql").find("PAGINATE 10"), std::string::npos);
  EXPECT_THROW(workloads::fixture("nope.sql"), Error);
}

TEST(Workloads, ThoughtstreamPageSize) {
  EXPECT_NE(workloads::thoughtstreamQuery(25).find("PAGINATE 25"), std::string::npos);
  EXPECT_EQ(workloads::scadrSchema(7).constraints()[0].limit, 7);
}

TEST(Workloads, SeederIsDeterministicAndShaped) {
  workloads::ScadrConfig cfg{40, 5, 3, 11};
  auto a = std::make_shared<MemoryStore>();
  auto b = std::make_shared<MemoryStore>();
  Engine ea(workloads::scadrSchema(), a), eb(workloads::scadrSchema(), b);
  workloads::seedScadr(ea, cfg);
  workloads::seedScadr(eb, cfg);
  EXPECT_EQ(a->size(), b->size());
  CompiledQuery subs = ea.prepare("SELECT * FROM Subscriptions WHERE ownerUserId = [1: u]");
  CompiledQuery th = ea.prepare(workloads::fixture("scadr/recent_thoughts.sql"));
  for (int u = 0; u < 40; u += 9) {
    Params p;
    p.set("u", Value::string(workloads::userName(u)));
    auto rows = ea.execute(subs, p).rows;
    EXPECT_EQ(rows.size(), 3u);
    std::set<std::string> targets;
    for (const auto& r : rows) {
      targets.insert(r[1].asString());
      EXPECT_NE(r[1].asString(), workloads::userName(u));
    }
    EXPECT_EQ(targets.size(), 3u);
    Params q;
    q.set("user", Value::string(workloads::userName(u)));
    EXPECT_EQ(ea.execute(th, q).rows.size(), 5u);
  }
}

TEST(Workloads, PostThoughtGoesThroughWritePath) {
  Engine e(workloads::scadrSchema(), std::make_shared<MemoryStore>());
  EXPECT_TRUE(workloads::postThought(e, 1, 10, "hello").ok());
  EXPECT_EQ(workloads::postThought(e, 1, 10, "again").status, WriteStatus::kDuplicateKey);
}
