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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/latency_store.h"
#include "boundql/physical_planner.h"

namespace boundql {

inline constexpr int64_t kDefaultCeilingMs = 10'000;

// Probability mass per 1 ms bin. Bin b holds latencies in (b-1, b], so a
// bin index is an upper edge and quantiles round up.
class LatencyDistribution {
 public:
  LatencyDistribution() : masses_{1.0} {}

  static LatencyDistribution delta(int64_t ms);
  static LatencyDistribution fromMasses(int64_t firstBin, std::vector<double> masses);
  static LatencyDistribution fromCounts(int64_t firstBin, const std::vector<int64_t>& counts);
  static LatencyDistribution fromSamples(std::span<const double> samplesMs, int64_t ceilingMs = kDefaultCeilingMs);
  static int64_t binOf(double ms, int64_t ceilingMs = kDefaultCeilingMs);

  int64_t firstBin() const { return first_; }
  int64_t lastBin() const { return first_ + static_cast<int64_t>(masses_.size()) - 1; }
  const std::vector<double>& masses() const { return masses_; }
  double mass(int64_t bin) const;
  double cdf(int64_t bin) const;
  double totalMass() const;
  double mean() const;
  // Smallest bin whose CDF reaches q.
  int64_t quantile(double q) const;

 private:
  void trim();

  int64_t first_ = 0;
  std::vector<double> masses_;
};

// Sum of independent variables; mass beyond the ceiling lands in its bin.
LatencyDistribution convolve(const LatencyDistribution& a, const LatencyDistribution& b,
                             int64_t ceilingMs = kDefaultCeilingMs);
// Max of independent variables.
LatencyDistribution maxCombine(const LatencyDistribution& a, const LatencyDistribution& b);
// Max of k independent copies.
LatencyDistribution maxPower(const LatencyDistribution& a, int64_t k);
double totalVariation(const LatencyDistribution& a, const LatencyDistribution& b);

enum class ModelKind { kIndexScan, kIndexFKJoin, kSortedIndexJoin };
std::string_view toString(ModelKind k);
std::optional<ModelKind> modelKindFromString(std::string_view s);

// Scans: alpha = {expected tuples}; joins: {child tuples, per-key tuples}.
struct ModelKey {
  ModelKind kind = ModelKind::kIndexScan;
  std::vector<int64_t> alpha;
  int64_t beta = 0;

  std::string alphaText() const;  // "100" or "100x10"
  std::string toString() const;   // "SortedIndexJoin(100x10, 200B)"
  friend auto operator<=>(const ModelKey&, const ModelKey&) = default;
};

std::vector<int64_t> parseAlpha(std::string_view text);

struct OperatorModel {
  ModelKey key;
  int64_t firstBin = 0;
  std::vector<int64_t> counts;  // histogram from firstBin on
  LatencyDistribution dist;     // counts normalized

  int64_t samples() const;
  static OperatorModel fromCounts(ModelKey key, int64_t firstBin, std::vector<int64_t> counts);
};

struct IntervalModels {
  int64_t index = 0;
  std::map<ModelKey, OperatorModel> models;
};

struct ModelSet {
  int64_t intervalMs = 600'000;
  std::vector<IntervalModels> intervals;

  std::string toJson() const;
  static ModelSet fromJson(std::string_view json);
  void save(const std::string& path) const;
  static ModelSet load(const std::string& path);
};

// Groups rows by interval (timestamp / intervalMs) and model key.
ModelSet trainModels(const std::vector<TraceRow>& trace, int64_t intervalMs);

// Exact key, else the dominating model with the smallest alpha, then beta.
const OperatorModel& lookupModel(const IntervalModels& models, const ModelKey& key);

// Model key each remote operator of the plan is predicted with.
std::vector<std::pair<int, ModelKey>> operatorModelKeys(const PhysicalPlan& plan, const OperationBound& bound);

LatencyDistribution predictQuery(const CompiledQuery& query, const IntervalModels& models);

struct IntervalQuantile {
  int64_t interval = 0;
  int64_t valueMs = 0;
};

struct PercentileSeries {
  std::vector<IntervalQuantile> values;
  std::vector<std::string> warnings;  // intervals skipped for missing models
  int64_t maxMs() const;
};

PercentileSeries percentileDistribution(const CompiledQuery& query, const ModelSet& models, double quantile);

struct SloSpec {
  double quantile = 0.99;
  int64_t thresholdMs = 500;
  int64_t intervalMs = 600'000;
  double compliance = 1.0;  // fraction of intervals that must meet the threshold

  // "q=0.99,t=500ms,interval=10m[,compliance=0.9]"
  static SloSpec parse(std::string_view text);
};

struct SloVerdict {
  bool pass = false;
  double marginMs = 0.0;  // threshold minus the worst interval
  int64_t intervalsMeeting = 0;
  int64_t intervals = 0;
  PercentileSeries series;
};

SloVerdict checkSlo(const CompiledQuery& query, const ModelSet& models, const SloSpec& slo);

// Grid axis: either the count of the query's LIMIT/PAGINATE clause or the
// limit of a cardinality constraint.
struct HeatmapAxis {
  enum class Kind { kStopCount, kConstraint };
  Kind kind = Kind::kStopCount;
  std::string table;
  std::vector<std::string> attributes;
  std::vector<int64_t> values;

  std::string label() const;
  // "limit=1..100:10" or "Subscriptions(ownerUserId)=1..200:20"; also
  // comma separated explicit lists.
  static HeatmapAxis parse(std::string_view text);
};

struct Heatmap {
  HeatmapAxis rows;
  HeatmapAxis cols;
  // Conservative headline per cell: the max per-interval quantile.
  std::vector<std::vector<int64_t>> ms;

  std::string toCsv() const;
  std::string toTable() const;
};

Heatmap heatmap(const QueryAst& query, const Schema& schema, const HeatmapAxis& rows, const HeatmapAxis& cols,
                const ModelSet& models, double quantile);

}  // namespace boundql
