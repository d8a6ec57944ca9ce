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
// Latency composition, SLO prediction and heatmap criteria.
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "acceptance.h"
#include "boundql/executor.h"
#include "boundql/insight.h"
#include "boundql/latency_store.h"
#include "boundql/operator_bench.h"
#include "boundql/slo_model.h"
#include "boundql/workloads.h"
#include "monte_carlo.h"

namespace acceptance {

using namespace boundql;

namespace {

LatencyDistribution randomHistogram(std::mt19937_64& rng) {
  int64_t first = std::uniform_int_distribution<int64_t>(0, 40)(rng);
  int64_t width = std::uniform_int_distribution<int64_t>(1, 40)(rng);
  std::vector<double> m(static_cast<std::size_t>(width));
  for (auto& x : m) x = std::bernoulli_distribution(0.2)(rng) ? 0.0 : std::uniform_real_distribution<double>(0, 1)(rng);
  m.back() += 0.01;
  return LatencyDistribution::fromMasses(first, m);
}

}  // namespace

Outcome distributionComposition() {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto a = randomHistogram(rng), b = randomHistogram(rng);
    auto sum = oracle::monteCarloCompose({a, b}, oracle::Combine::kSum, 1'000'000, 100 + i);
    auto mx = oracle::monteCarloCompose({a, b}, oracle::Combine::kMax, 1'000'000, 200 + i);
    worst = std::max({worst, oracle::totalVariation(sum, convolve(a, b)), oracle::totalVariation(mx, maxCombine(a, b))});
  }
  // Analytic cases.
  bool exact = true;
  auto d = convolve(LatencyDistribution::delta(3), LatencyDistribution::delta(9));
  exact = exact && d.firstBin() == 12 && d.lastBin() == 12 && std::abs(d.mass(12) - 1.0) < 1e-12;
  auto dm = maxCombine(LatencyDistribution::delta(3), LatencyDistribution::delta(9));
  exact = exact && dm.firstBin() == 9 && dm.lastBin() == 9;
  const int n = 6;
  auto u = LatencyDistribution::fromMasses(1, std::vector<double>(n, 1.0 / n));
  auto tri = convolve(u, u);
  for (int s = 2; s <= 2 * n; ++s) {
    double want = static_cast<double>(n - std::abs(s - (n + 1))) / (n * n);
    exact = exact && std::abs(tri.mass(s) - want) < 1e-12;
  }
  auto umax = maxCombine(u, u);
  for (int b = 1; b <= n; ++b) exact = exact && std::abs(umax.cdf(b) - std::pow(static_cast<double>(b) / n, 2)) < 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst total variation %.4f over 40 compositions at 1e6 draws; analytic cases %s", worst,
                exact ? "exact" : "WRONG");
  return {worst <= 0.02 && exact, buf};
}

Outcome predictionConservatism() {
  const int64_t minutes = 120, intervalMin = 10;
  const int64_t degraded = 6;  // interval index of the slow window
  auto profileWithWindow = [&](uint64_t seed) {
    LatencyProfile p(DelaySet{DelaySpec::lognormal(2.0, 0.4), {}});
    p.addWindow({degraded * intervalMin * 60'000, (degraded + 1) * intervalMin * 60'000,
                 DelaySet{DelaySpec::lognormal(6.0, 0.6), {}}});
    p.setSeed(seed);
    return p;
  };

  // Train on operator benchmarks.
  OperatorBenchConfig cfg;
  cfg.profile = profileWithWindow(1);
  cfg.minutes = minutes;
  cfg.intervalMinutes = intervalMin;
  cfg.runsPerInterval = 1000;
  cfg.childCardinalities = {100};
  cfg.perKeyLimits = {10};
  ModelSet models = trainModels(benchmarkOperators(cfg), intervalMin * 60'000);
  CompiledQuery q = compile(workloads::thoughtstreamQuery(10), workloads::scadrSchema(100));
  PercentileSeries predicted = percentileDistribution(q, models, 0.99);

  // Measure the real query over a seeded database under the same profile.
  auto mem = std::make_shared<MemoryStore>();
  {
    Engine seed(workloads::scadrSchema(100), mem);
    workloads::seedScadr(seed, {400, 30, 100, 3});
  }
  auto slow = std::make_shared<LatencyStore>(mem, profileWithWindow(2), LatencyStore::Clock::kVirtual);
  Engine e(workloads::scadrSchema(100), slow);
  CompiledQuery run = e.prepare(workloads::thoughtstreamQuery(10));
  const int64_t executions = 10'000;
  std::map<int64_t, std::vector<double>> measured;
  ExecuteOptions o;
  o.strategy = Strategy::kParallel;
  o.threads = false;
  for (int64_t i = 0; i < executions; ++i) {
    int64_t t = i * minutes * 60'000 / executions;
    slow->setVirtualTimeMs(t);
    Params p;
    p.set("user", Value::string(workloads::userName(i % 400)));
    auto r = e.executePage(run, p, std::nullopt, o);
    measured[t / (intervalMin * 60'000)].push_back(r.stats.modeledMs);
  }
  std::map<int64_t, double> measuredP99;
  for (auto& [k, v] : measured) {
    std::sort(v.begin(), v.end());
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(v.size())));
    measuredP99[k] = v[rank - 1];
  }
  int64_t ok = 0, total = 0;
  int64_t predMaxAt = -1, measMaxAt = -1;
  double predMax = -1, measMax = -1;
  std::ostringstream d;
  for (const auto& iq : predicted.values) {
    auto it = measuredP99.find(iq.interval);
    if (it == measuredP99.end()) continue;
    ++total;
    ok += static_cast<double>(iq.valueMs) >= it->second - 1.0;
    if (iq.valueMs > predMax) predMax = static_cast<double>(iq.valueMs), predMaxAt = iq.interval;
    if (it->second > measMax) measMax = it->second, measMaxAt = iq.interval;
    d << iq.interval << ":" << iq.valueMs << "/" << std::lround(it->second) << " ";
  }
  bool pass = total >= 12 && ok * 100 >= 95 * total && predMaxAt == degraded && measMaxAt == degraded;
  std::ostringstream s;
  s << ok << "/" << total << " intervals predicted >= measured - 1 ms; max at " << predMaxAt << "/" << measMaxAt
    << "; predicted/measured p99: " << d.str();
  return {pass, s.str()};
}

Outcome heatmapAndRecommendation() {
  DelaySpec spec = DelaySpec::constant(1.0);
  spec.perRecordMs = 0.02;
  OperatorBenchConfig cfg;
  cfg.profile = LatencyProfile(DelaySet{spec, {}});
  cfg.minutes = 10;
  cfg.intervalMinutes = 10;
  cfg.runsPerInterval = 3;
  cfg.childCardinalities = {1, 50, 100, 150, 200};
  cfg.perKeyLimits = {1, 25, 50, 75, 100};
  cfg.strategy = Strategy::kSimple;
  ModelSet models = trainModels(benchmarkOperators(cfg), 600'000);
  QueryAst q = parseQuery(workloads::thoughtstreamQuery());
  auto rows = HeatmapAxis::parse("Subscriptions(ownerUserId)=1,50..200:50");
  auto cols = HeatmapAxis::parse("limit=1,25..100:25");
  Schema s = workloads::scadrSchema();
  Heatmap h = heatmap(q, s, rows, cols, models, 0.99);

  bool monotone = true, complete = true;
  std::vector<int64_t> all;
  for (std::size_t i = 0; i < h.ms.size(); ++i)
    for (std::size_t j = 0; j < h.ms[i].size(); ++j) {
      complete = complete && h.ms[i][j] >= 0;
      all.push_back(h.ms[i][j]);
      if (i && h.ms[i][j] < h.ms[i - 1][j]) monotone = false;
      if (j && h.ms[i][j] < h.ms[i][j - 1]) monotone = false;
    }
  std::sort(all.begin(), all.end());
  int64_t threshold = all[all.size() / 2];
  SloSpec slo;
  slo.thresholdMs = threshold;
  slo.intervalMs = 600'000;
  LimitRecommendation rec = recommendLimits(q, s, rows, cols, models, slo);

  // Pareto frontier of feasible cells computed directly from the grid.
  std::vector<std::pair<int64_t, int64_t>> feasible, frontier;
  for (std::size_t i = 0; i < h.ms.size(); ++i)
    for (std::size_t j = 0; j < h.ms[i].size(); ++j)
      if (h.ms[i][j] >= 0 && h.ms[i][j] <= threshold) feasible.push_back({h.rows.values[i], h.cols.values[j]});
  for (const auto& c : feasible) {
    bool dominated = std::any_of(feasible.begin(), feasible.end(), [&](const auto& o) {
      return o != c && o.first >= c.first && o.second >= c.second;
    });
    if (!dominated) frontier.push_back(c);
  }
  std::sort(frontier.begin(), frontier.end());
  std::vector<std::pair<int64_t, int64_t>> got;
  for (const auto& c : rec.frontier) got.push_back({c.row, c.col});
  std::sort(got.begin(), got.end());

  std::ostringstream d;
  d << "grid " << h.ms.size() << "x" << (h.ms.empty() ? 0 : h.ms[0].size()) << " " << (monotone ? "monotone" : "NOT monotone")
    << (complete ? "" : " (missing cells)") << "; threshold " << threshold << " ms; frontier";
  for (const auto& [r, c] : got) d << " (" << r << "," << c << ")";
  d << (got == frontier ? " matches" : " DIFFERS from") << " the reference frontier";
  return {monotone && complete && got == frontier && !frontier.empty(), d.str()};
}

}  // namespace acceptance
