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

#include <optional>
#include <string>
#include <vector>

#include "boundql/catalog.h"
#include "boundql/physical_planner.h"
#include "boundql/slo_model.h"

namespace boundql {

struct ConstraintSuggestion {
  std::string table;
  std::vector<std::string> attributes;
  std::string ddl(int64_t limit = 100) const;  // "CARDINALITY LIMIT 100 (ownerUserId)"
};

struct Diagnosis {
  std::vector<std::string> relations;  // offending relations
  std::vector<std::string> reasons;
  std::string plan;                    // logical plan, offending section marked ">>"
  std::vector<int> highlighted;        // logical node ids of that section
  std::vector<ConstraintSuggestion> suggestions;
  std::vector<std::string> advice;
  std::string scalingClass = "III/IV (unbounded)";

  std::string toText() const;
  std::string toJson() const;
};

// Explains a rejection. Suggested constraints are re-checked by compiling
// the query with each one added on its own; only those that suffice are kept.
Diagnosis diagnose(const NotScaleIndependent& error, const Schema& schema);

struct LimitCell {
  int64_t row = 0;  // value on the row axis
  int64_t col = 0;
  int64_t ms = 0;
};

struct LimitRecommendation {
  Heatmap grid;
  std::vector<LimitCell> frontier;      // Pareto-maximal feasible cells, by row value
  std::optional<LimitCell> nearestMiss;  // set when no cell is feasible
  int64_t thresholdMs = 0;

  bool feasible() const { return !frontier.empty(); }
  std::string toText() const;
};

// Feasible means the cell's worst per-interval quantile meets the threshold.
LimitRecommendation recommendLimits(const QueryAst& query, const Schema& schema, const HeatmapAxis& rows,
                                    const HeatmapAxis& cols, const ModelSet& models, const SloSpec& slo);

}  // namespace boundql
