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

#include <cmath>

#include "boundql/error.h"
#include "boundql/operator_bench.h"
#include "boundql/slo_model.h"
#include "boundql/workloads.h"
#include "monte_carlo.h"

using namespace boundql;

TEST(Distribution, BinningRoundsUp) {
  EXPECT_EQ(LatencyDistribution::binOf(0.0), 0);
  EXPECT_EQ(LatencyDistribution::binOf(1.0), 1);
  EXPECT_EQ(LatencyDistribution::binOf(1.2), 2);
  EXPECT_EQ(LatencyDistribution::binOf(1e9), kDefaultCeilingMs);
  double xs[] = {0.5, 1.5, 1.7, 3.0};
  auto d = LatencyDistribution::fromSamples(xs);
  EXPECT_DOUBLE_EQ(d.mass(1), 0.25);
  EXPECT_DOUBLE_EQ(d.mass(2), 0.5);
  EXPECT_DOUBLE_EQ(d.mass(3), 0.25);
  EXPECT_EQ(d.quantile(0.5), 2);
  EXPECT_EQ(d.quantile(0.76), 3);
  EXPECT_DOUBLE_EQ(d.cdf(2), 0.75);
}

TEST(Distribution, DeltaConvolutionAddsShifts) {
  auto d = convolve(LatencyDistribution::delta(3), LatencyDistribution::delta(4));
  EXPECT_EQ(d.firstBin(), 7);
  EXPECT_EQ(d.lastBin(), 7);
  EXPECT_DOUBLE_EQ(d.totalMass(), 1.0);
}

TEST(Distribution, UniformConvolutionIsTriangular) {
  auto u = LatencyDistribution::fromMasses(1, {0.25, 0.25, 0.25, 0.25});
  auto t = convolve(u, u);
  EXPECT_EQ(t.firstBin(), 2);
  EXPECT_EQ(t.lastBin(), 8);
  const double expected[] = {1, 2, 3, 4, 3, 2, 1};
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(t.mass(2 + i), expected[i] / 16.0, 1e-12);
  EXPECT_NEAR(t.mean(), 2 * u.mean(), 1e-12);
}

TEST(Distribution, MaxOfUniforms) {
  auto u = LatencyDistribution::fromMasses(1, {0.25, 0.25, 0.25, 0.25});
  auto m = maxCombine(u, u);
  for (int b = 1; b <= 4; ++b) EXPECT_NEAR(m.cdf(b), std::pow(b / 4.0, 2), 1e-12);
  auto m3 = maxPower(u, 3);
  for (int b = 1; b <= 4; ++b) EXPECT_NEAR(m3.cdf(b), std::pow(b / 4.0, 3), 1e-12);
}

TEST(Distribution, ConvolutionClampsAtCeiling) {
  auto d = convolve(LatencyDistribution::delta(8), LatencyDistribution::delta(5), 10);
  EXPECT_EQ(d.quantile(1.0), 10);
}

TEST(Distribution, AgreesWithMonteCarlo) {
  auto a = LatencyDistribution::fromMasses(2, {0.1, 0.5, 0.0, 0.2, 0.2});
  auto b = LatencyDistribution::fromMasses(1, {0.6, 0.3, 0.1});
  auto sum = oracle::monteCarloCompose({a, b}, oracle::Combine::kSum, 200'000, 5);
  EXPECT_LT(oracle::totalVariation(sum, convolve(a, b)), 0.01);
  auto mx = oracle::monteCarloCompose({a, b}, oracle::Combine::kMax, 200'000, 6);
  EXPECT_LT(oracle::totalVariation(mx, maxCombine(a, b)), 0.01);
}

TEST(Models, KeysAndParsing) {
  ModelKey k{ModelKind::kSortedIndexJoin, {100, 10}, 188};
  EXPECT_EQ(k.alphaText(), "100x10");
  EXPECT_EQ(k.toString(), "SortedIndexJoin(100x10, 188B)");
  EXPECT_EQ(parseAlpha("100x10"), (std::vector<int64_t>{100, 10}));
  EXPECT_EQ(modelKindFromString("IndexFKJoin"), ModelKind::kIndexFKJoin);
  EXPECT_FALSE(modelKindFromString("Nope"));
}

TEST(Models, TrainGroupsByIntervalAndKey) {
  std::vector<TraceRow> trace{
      {0, "IndexScan", "10", 81, 2.0},     {100, "IndexScan", "10", 81, 4.0},
      {600'000, "IndexScan", "10", 81, 9.0}, {1'200'001, "IndexFKJoin", "10x1", 123, 1.0},
  };
  ModelSet m = trainModels(trace, 600'000);
  ASSERT_EQ(m.intervals.size(), 3u);
  const auto& first = m.intervals[0].models.at(ModelKey{ModelKind::kIndexScan, {10}, 81});
  EXPECT_EQ(first.samples(), 2);
  EXPECT_EQ(first.dist.quantile(0.5), 2);
  EXPECT_EQ(first.dist.quantile(1.0), 4);
  ModelSet back = ModelSet::fromJson(m.toJson());
  EXPECT_EQ(back.toJson(), m.toJson());
}

TEST(Models, LookupPrefersExactThenSmallestDominating) {
  IntervalModels im;
  auto add = [&](std::vector<int64_t> alpha, int64_t beta, int64_t ms) {
    ModelKey k{ModelKind::kIndexScan, alpha, beta};
    im.models[k] = OperatorModel::fromCounts(k, ms, {1});
  };
  add({10}, 100, 1);
  add({50}, 100, 2);
  add({100}, 100, 3);
  EXPECT_EQ(lookupModel(im, {ModelKind::kIndexScan, {50}, 100}).firstBin, 2);
  EXPECT_EQ(lookupModel(im, {ModelKind::kIndexScan, {20}, 100}).firstBin, 2);
  EXPECT_EQ(lookupModel(im, {ModelKind::kIndexScan, {20}, 50}).firstBin, 2);
  EXPECT_THROW(lookupModel(im, {ModelKind::kIndexScan, {200}, 100}), ModelError);
  EXPECT_THROW(lookupModel(im, {ModelKind::kIndexFKJoin, {1, 1}, 100}), ModelError);
}

TEST(Models, OperatorKeysFollowThePlan) {
  CompiledQuery c = compile(workloads::thoughtstreamQuery(), workloads::scadrSchema());
  auto keys = operatorModelKeys(c.physical, c.bound);
  ASSERT_EQ(keys.size(), 2u);
  EXPECT_EQ(keys[0].second.kind, ModelKind::kIndexScan);
  EXPECT_EQ(keys[0].second.alpha, std::vector<int64_t>{100});
  EXPECT_EQ(keys[1].second.kind, ModelKind::kSortedIndexJoin);
  EXPECT_EQ(keys[1].second.alpha, (std::vector<int64_t>{100, 10}));
}

TEST(Models, SloSpecParsing) {
  SloSpec s = SloSpec::parse("q=0.99,t=500ms,interval=10m");
  EXPECT_DOUBLE_EQ(s.quantile, 0.99);
  EXPECT_EQ(s.thresholdMs, 500);
  EXPECT_EQ(s.intervalMs, 600'000);
  EXPECT_THROW(SloSpec::parse("q=2"), Error);
  EXPECT_THROW(SloSpec::parse("bogus=1"), Error);
}

TEST(Models, HeatmapAxisParsing) {
  auto a = HeatmapAxis::parse("limit=1..100:10");
  EXPECT_EQ(a.kind, HeatmapAxis::Kind::kStopCount);
  EXPECT_EQ(a.values.front(), 1);
  EXPECT_EQ(a.values.back(), 100);
  auto b = HeatmapAxis::parse("Subscriptions(ownerUserId)=10,50,100");
  EXPECT_EQ(b.kind, HeatmapAxis::Kind::kConstraint);
  EXPECT_EQ(b.table, "Subscriptions");
  EXPECT_EQ(b.values, (std::vector<int64_t>{10, 50, 100}));
  EXPECT_THROW(HeatmapAxis::parse("limit=5..1"), Error);
  auto c = HeatmapAxis::parse("limit=1,25..100:25");
  EXPECT_EQ(c.values, (std::vector<int64_t>{1, 25, 50, 75, 100}));
}

namespace {

ModelSet constantModels(double ms) {
  OperatorBenchConfig cfg;
  cfg.profile = LatencyProfile::constant(ms);
  cfg.minutes = 20;
  cfg.runsPerInterval = 3;
  cfg.childCardinalities = {1, 10, 100};
  cfg.perKeyLimits = {1, 10};
  return trainModels(benchmarkOperators(cfg), 600'000);
}

}  // namespace

TEST(Prediction, ConstantLatencyIsExact) {
  ModelSet m = constantModels(2.0);
  EXPECT_EQ(m.intervals.size(), 2u);
  CompiledQuery c = compile(workloads::thoughtstreamQuery(), workloads::scadrSchema());
  auto d = predictQuery(c, m.intervals[0]);
  EXPECT_EQ(d.quantile(0.99), 4);
  SloVerdict ok = checkSlo(c, m, SloSpec::parse("q=0.99,t=4ms,interval=10m"));
  EXPECT_TRUE(ok.pass);
  EXPECT_DOUBLE_EQ(ok.marginMs, 0.0);
  SloVerdict bad = checkSlo(c, m, SloSpec::parse("q=0.99,t=3ms,interval=10m"));
  EXPECT_FALSE(bad.pass);
}

TEST(Prediction, MissingModelsAreReported) {
  ModelSet m = constantModels(1.0);
  CompiledQuery c = compile(workloads::thoughtstreamQuery(1000), workloads::scadrSchema(500));
  auto series = percentileDistribution(c, m, 0.99);
  EXPECT_TRUE(series.values.empty());
  EXPECT_FALSE(series.warnings.empty());
}

TEST(Prediction, HeatmapGrid) {
  ModelSet m = constantModels(1.0);
  QueryAst q = parseQuery(workloads::thoughtstreamQuery());
  Heatmap h = heatmap(q, workloads::scadrSchema(), HeatmapAxis::parse("limit=1,10"),
                      HeatmapAxis::parse("Subscriptions(ownerUserId)=1,10,100,200"), m, 0.99);
  ASSERT_EQ(h.ms.size(), 2u);
  EXPECT_EQ(h.ms[0][0], 2);
  EXPECT_EQ(h.ms[0][3], -1);  // no model for 200 subscriptions
  EXPECT_NE(h.toCsv().find("limit"), std::string::npos);
}
