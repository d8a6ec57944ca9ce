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

// For every relation whose value-binding equalities cover its primary key
// (count 1) or a cardinality constraint (smallest limit), places a DataStop
// at the top of the relation's branch with the causing selections moved
// directly above the scan. IN-lists on causing attributes multiply the
// bound by their declared length.
LogicalPlan insertDataStops(LogicalPlan plan, const Schema& schema);

// DataStops sink below every selection except the causing ones. A Stop (with
// its Sort when every key is on the left input) is copied into the left
// input of a key-preserving join: the join predicates cover the right
// relation's primary key and nothing filters the right side. Stops never
// pass a Selection, Aggregate or DataStop.
LogicalPlan stopPushDown(LogicalPlan plan, const Schema& schema);

// Both steps plus the preceding logical planning.
LogicalPlan optimizeLogical(const BoundQuery& query, const Schema& schema);

}  // namespace boundql
