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

#include "boundql/catalog.h"
#include "boundql/logical_plan.h"

namespace boundql {

// Left-deep join tree with Stop, Sort, Aggregate and all single-relation
// selections stacked above it. The leftmost relation is one whose bound
// equalities cover its primary key or a cardinality constraint; failing that
// (for queries with a LIMIT/PAGINATE) one carrying predicates; ties go to
// FROM order. Throws QueryError on a disconnected join graph.
LogicalPlan findLinearJoinOrdering(const BoundQuery& query, const Schema& schema);

// Moves every single-relation selection directly above its RelationScan,
// keeping the original predicate order.
LogicalPlan predicatePushDown(LogicalPlan plan);

// Attributes of rel fixed by literal, parameter or IN-list equalities.
std::vector<std::size_t> boundEqualityColumns(const BoundQuery& query, int rel);

// True when cols covers the primary key or some constraint of the table.
bool coversKeyOrConstraint(const TableDef& table, const Schema& schema,
                           const std::vector<std::size_t>& cols);

}  // namespace boundql
