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

#include "boundql/physical_planner.h"
#include "boundql/workloads.h"

using namespace boundql;

namespace {

std::vector<const PhysicalNode*> remotes(const CompiledQuery& c) {
  std::vector<const PhysicalNode*> out;
  for (const auto* n : c.physical.nodes())
    if (isRemote(n->op)) out.push_back(n);
  return out;
}

}  // namespace

TEST(PhysicalPlanner, ThoughtstreamShape) {
  CompiledQuery c = compile(workloads::thoughtstreamQuery(), workloads::scadrSchema());
  const PhysicalNode* root = c.physical.root();
  EXPECT_EQ(root->op, PhysicalOp::kLocalStop);
  EXPECT_EQ(root->count, 10);
  EXPECT_TRUE(c.physical.paginated());
  const PhysicalNode* sij = root->child();
  ASSERT_EQ(sij->op, PhysicalOp::kSortedIndexJoin);
  EXPECT_EQ(sij->limitHint, 10);
  EXPECT_TRUE(sij->descending);
  const PhysicalNode* sel = sij->child();
  ASSERT_EQ(sel->op, PhysicalOp::kLocalSelection);
  const PhysicalNode* scan = sel->child();
  ASSERT_EQ(scan->op, PhysicalOp::kIndexScan);
  EXPECT_EQ(scan->limitHint, 100);
  EXPECT_EQ(scan->boundSource, BoundSource::kConstraint);
  EXPECT_EQ(c.bound.maxRequests, 101);
  EXPECT_EQ(c.bound.maxTuples, 1100);
  EXPECT_EQ(c.report.scalingClass, ScalingClass::kBounded);
}

TEST(PhysicalPlanner, RecentThoughtsIsConstant) {
  CompiledQuery c = compile(workloads::fixture("scadr/recent_thoughts.sql"), workloads::scadrSchema());
  auto r = remotes(c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0]->limitHint, 10);
  EXPECT_TRUE(r[0]->descending);
  EXPECT_EQ(c.bound.maxRequests, 1);
  EXPECT_EQ(c.report.scalingClass, ScalingClass::kConstant);
}

TEST(PhysicalPlanner, PointLookupUsesGet) {
  CompiledQuery c = compile(workloads::fixture("scadr/find_user.sql"), workloads::scadrSchema());
  auto r = remotes(c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0]->pointGet);
  EXPECT_EQ(r[0]->boundSource, BoundSource::kPrimaryKey);
}

TEST(PhysicalPlanner, ForeignKeyJoin) {
  CompiledQuery c = compile(workloads::fixture("scadr/users_followed.sql"), workloads::scadrSchema());
  EXPECT_EQ(c.physical.root()->op, PhysicalOp::kIndexFKJoin);
  EXPECT_EQ(c.bound.maxRequests, 101);
  EXPECT_EQ(c.bound.maxTuples, 200);
}

TEST(PhysicalPlanner, TokenIndexForKeywordSearch) {
  Schema s = parseDdl(workloads::tpcwDdl());
  CompiledQuery c = compile(workloads::fixture("tpcw/search_by_title.sql"), s);
  auto r = remotes(c);
  ASSERT_EQ(r.size(), 2u);
  const PhysicalNode* join = r[0];
  const PhysicalNode* scan = r[1];
  EXPECT_EQ(join->op, PhysicalOp::kIndexFKJoin);
  EXPECT_EQ(join->index.table, "AUTHOR");
  EXPECT_EQ(scan->index.fieldList(), "(token(I_TITLE), I_TITLE, I_ID)");
  EXPECT_EQ(scan->limitHint, 50);
  bool sawTokenIndex = false;
  for (const auto& idx : c.indexes) sawTokenIndex = sawTokenIndex || idx.hasTokenField();
  EXPECT_TRUE(sawTokenIndex);
}

TEST(PhysicalPlanner, InListFansOut) {
  CompiledQuery c = compile(workloads::fixture("scadr/mutual_subscribers.sql"), workloads::scadrSchema());
  auto r = remotes(c);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0]->probes, 50);
  EXPECT_EQ(c.bound.maxRequests, 50);
}

TEST(PhysicalPlanner, RejectsUnboundedQueries) {
  Schema bare = parseDdl(workloads::scadrDdlWithoutConstraint());
  EXPECT_THROW(compile(workloads::thoughtstreamQuery(), bare), NotScaleIndependent);
  Schema s = workloads::scadrSchema();
  EXPECT_THROW(compile("SELECT * FROM Users", s), NotScaleIndependent);
  EXPECT_THROW(compile("SELECT * FROM Thoughts WHERE timestamp > 5 AND text > 'a' LIMIT 10", s), NotScaleIndependent);
  EXPECT_THROW(compile("SELECT * FROM Subscriptions WHERE targetUserId = [1: t]", s), NotScaleIndependent);
}

TEST(PhysicalPlanner, SingleRangeWithLimitIsBounded) {
  CompiledQuery c = compile("SELECT * FROM Thoughts WHERE timestamp > 5 LIMIT 10", workloads::scadrSchema());
  EXPECT_EQ(c.bound.maxTuples, 10);
  EXPECT_EQ(c.indexes.front().fields.front().column, "timestamp");
}

TEST(PhysicalPlanner, RejectionNamesRelationAndReasons) {
  Schema bare = parseDdl(workloads::scadrDdlWithoutConstraint());
  try {
    compile(workloads::thoughtstreamQuery(), bare);
    FAIL();
  } catch (const NotScaleIndependent& e) {
    EXPECT_EQ(e.plan().query().relations[e.relation()].table.name, "Subscriptions");
    EXPECT_FALSE(e.reasons().empty());
    EXPECT_FALSE(e.section().empty());
  }
}

TEST(PhysicalPlanner, UnsafeModeCompilesUnboundedPlans) {
  Schema s = workloads::scadrSchema();
  CompileOptions o;
  o.unsafe = true;
  CompiledQuery c = compile("SELECT * FROM Subscriptions WHERE targetUserId = [1: t]", s, o);
  EXPECT_FALSE(c.bound.bounded);
  EXPECT_EQ(c.report.scalingClass, ScalingClass::kRejected);
}

TEST(PhysicalPlanner, BoundsSumPerOperator) {
  CompiledQuery c = compile(workloads::thoughtstreamQuery(), workloads::scadrSchema());
  int64_t req = 0, tup = 0;
  for (const auto& b : c.bound.perOperator) {
    req += b.requests.value_or(0);
    tup += b.tuples.value_or(0);
  }
  EXPECT_EQ(req, c.bound.maxRequests);
  EXPECT_EQ(tup, c.bound.maxTuples);
}

TEST(PhysicalPlanner, ExplainAndJson) {
  CompiledQuery c = compile(workloads::thoughtstreamQuery(), workloads::scadrSchema());
  std::string text = c.explain();
  EXPECT_NE(text.find("SortedIndexJoin"), std::string::npos);
  EXPECT_NE(text.find("requests<=101"), std::string::npos);
  std::string json = c.physical.toJson(&c.bound);
  EXPECT_NE(json.find("IndexScan"), std::string::npos);
  EXPECT_EQ(c.physical.canonical(), compile(workloads::thoughtstreamQuery(), workloads::scadrSchema()).physical.canonical());
}

TEST(PhysicalPlanner, TpcwQueriesAllCompile) {
  Schema s = parseDdl(workloads::tpcwDdl());
  for (const auto& q : workloads::tpcwQueries()) EXPECT_NO_THROW(compile(q.text, s)) << q.name;
}
