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
#include "boundql/insight.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "boundql/logical_planner.h"

namespace boundql {

std::string ConstraintSuggestion::ddl(int64_t limit) const {
  std::string s = "CARDINALITY LIMIT " + std::to_string(limit) + " (";
  for (std::size_t i = 0; i < attributes.size(); ++i) s += (i ? ", " : "") + attributes[i];
  return s + ")";
}

namespace {

// Columns of rel that equalities (constants, parameters or join predicates)
// pin down, excluding booleans: a limit per boolean value bounds nothing
// useful.
std::vector<std::size_t> candidateColumns(const BoundQuery& q, int rel) {
  std::set<std::size_t> cols;
  for (auto c : boundEqualityColumns(q, rel)) cols.insert(c);
  for (const auto& p : q.predicates) {
    if (p.kind != PredicateKind::kJoinEquality) continue;
    if (p.lhs.rel == rel) cols.insert(p.lhs.col);
    if (p.rhs.column.rel == rel) cols.insert(p.rhs.column.col);
  }
  std::vector<std::size_t> out;
  for (auto c : cols)
    if (q.relations[rel].table.columns[c].type != ColumnType::kBool) out.push_back(c);
  return out;
}

bool compiles(const QueryAst& ast, const Schema& schema) {
  try {
    compile(ast, schema);
    return true;
  } catch (const NotScaleIndependent&) {
    return false;
  }
}

}  // namespace

Diagnosis diagnose(const NotScaleIndependent& error, const Schema& schema) {
  const LogicalPlan& plan = error.plan();
  const BoundQuery& q = plan.query();
  Diagnosis d;
  d.reasons = error.reasons();
  d.highlighted = error.section();
  d.plan = plan.toString(std::set<int>(d.highlighted.begin(), d.highlighted.end()));
  if (error.relation() < 0) {
    d.advice.push_back("no candidate attributes; add a selective equality predicate or LIMIT");
    return d;
  }
  const TableDef& table = q.relations[error.relation()].table;
  d.relations.push_back(table.name);

  const auto cols = candidateColumns(q, error.relation());
  const auto pk = table.primaryKeyIndexes();
  // Subsets in size order so that supersets of a sufficient set are skipped.
  std::vector<std::vector<std::size_t>> subsets;
  const std::size_t n = std::min<std::size_t>(cols.size(), 12);
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(cols[i]);
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<std::vector<std::size_t>> sufficient;
  for (const auto& s : subsets) {
    if (std::all_of(pk.begin(), pk.end(), [&](std::size_t k) { return std::count(s.begin(), s.end(), k) > 0; }))
      continue;  // the primary key already limits these to one tuple
    bool covered = std::any_of(sufficient.begin(), sufficient.end(), [&](const auto& t) {
      return std::includes(s.begin(), s.end(), t.begin(), t.end());
    });
    if (covered) continue;
    ConstraintSuggestion sug{table.name, {}};
    for (auto c : s) sug.attributes.push_back(table.columns[c].name);
    bool ok = true;
    for (int64_t limit : {1, 1'000'000}) {
      Schema trial = schema;
      trial.removeConstraint(table.name, sug.attributes);
      trial.addConstraint({table.name, sug.attributes, limit});
      ok = ok && compiles(q.ast, trial);
    }
    if (!ok) continue;
    sufficient.push_back(s);
    d.suggestions.push_back(std::move(sug));
  }

  bool inequality = std::any_of(d.reasons.begin(), d.reasons.end(),
                                [](const std::string& r) { return r.find("inequality") != std::string::npos; });
  if (inequality)
    d.advice.push_back(
        "an index range can only serve inequalities on one attribute directly after the equality prefix; split the "
        "query so that each part ranges over a single attribute");
  if (d.suggestions.empty())
    d.advice.push_back("no candidate attributes; add a selective equality predicate or LIMIT");
  return d;
}

std::string Diagnosis::toText() const {
  std::string s = "Not scale-independent";
  if (!relations.empty()) {
    s += ": unbounded access to ";
    for (std::size_t i = 0; i < relations.size(); ++i) s += (i ? ", " : "") + relations[i];
  }
  s += "\nClass: " + scalingClass + "\n";
  for (const auto& r : reasons) s += "  reason: " + r + "\n";
  s += "Plan (offending section marked >>):\n" + plan;
  if (!plan.empty() && plan.back() != '\n') s += "\n";
  for (const auto& sug : suggestions) s += "  suggestion: add " + sug.ddl() + " to " + sug.table + "\n";
  for (const auto& a : advice) s += "  advice: " + a + "\n";
  return s;
}

std::string Diagnosis::toJson() const {
  nlohmann::ordered_json j;
  j["relations"] = relations;
  j["class"] = scalingClass;
  j["reasons"] = reasons;
  j["highlighted_nodes"] = highlighted;
  j["plan"] = plan;
  j["suggestions"] = nlohmann::ordered_json::array();
  for (const auto& s : suggestions) j["suggestions"].push_back({{"table", s.table}, {"attributes", s.attributes}});
  j["advice"] = advice;
  return j.dump(2);
}

LimitRecommendation recommendLimits(const QueryAst& query, const Schema& schema, const HeatmapAxis& rows,
                                    const HeatmapAxis& cols, const ModelSet& models, const SloSpec& slo) {
  LimitRecommendation rec{heatmap(query, schema, rows, cols, models, slo.quantile), {}, std::nullopt, slo.thresholdMs};
  std::vector<LimitCell> feasible, all;
  for (std::size_t i = 0; i < rows.values.size(); ++i)
    for (std::size_t j = 0; j < cols.values.size(); ++j) {
      int64_t ms = rec.grid.ms[i][j];
      if (ms < 0) continue;
      LimitCell c{rows.values[i], cols.values[j], ms};
      all.push_back(c);
      if (ms <= slo.thresholdMs) feasible.push_back(c);
    }
  for (const auto& c : feasible) {
    bool dominated = std::any_of(feasible.begin(), feasible.end(), [&](const LimitCell& o) {
      return o.row >= c.row && o.col >= c.col && (o.row > c.row || o.col > c.col);
    });
    if (!dominated) rec.frontier.push_back(c);
  }
  std::sort(rec.frontier.begin(), rec.frontier.end(),
            [](const LimitCell& a, const LimitCell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  if (rec.frontier.empty() && !all.empty())
    rec.nearestMiss = *std::min_element(all.begin(), all.end(), [](const LimitCell& a, const LimitCell& b) {
      return a.ms != b.ms ? a.ms < b.ms : std::tie(a.row, a.col) > std::tie(b.row, b.col);
    });
  return rec;
}

std::string LimitRecommendation::toText() const {
  std::string s = grid.toTable();
  if (feasible()) {
    s += "Recommended (" + grid.rows.label() + ", " + grid.cols.label() + ") within " + std::to_string(thresholdMs) +
         " ms:\n";
    for (const auto& c : frontier)
      s += "  " + std::to_string(c.row) + ", " + std::to_string(c.col) + " -> " + std::to_string(c.ms) + " ms (margin " +
           std::to_string(thresholdMs - c.ms) + " ms)\n";
  } else if (nearestMiss) {
    s += "No limits meet " + std::to_string(thresholdMs) + " ms; nearest miss " + std::to_string(nearestMiss->row) +
         ", " + std::to_string(nearestMiss->col) + " -> " + std::to_string(nearestMiss->ms) + " ms\n";
  } else {
    s += "No grid cell could be predicted\n";
  }
  return s;
}

}  // namespace boundql
