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
#include <string>
#include <string_view>

namespace boundql {

class Params;
class PhysicalPlan;

// Client-held resumption token for PAGINATE queries. It records where the
// last page stopped in the ordered output of the plan's ordering operator
// (an index scan or sorted index join): the probe prefix and key suffix of
// the last returned row. Plans whose order comes from a local sort instead
// record the last row's full sort key (anchorNode == -1).
struct PageCursor {
  uint64_t queryId = 0;
  int64_t pageSize = 0;
  int anchorNode = -1;
  std::string lastPrefix;
  std::string lastSuffix;
  int64_t ordinal = 0;  // rank among probes sharing lastPrefix
  std::string lastOrderKey;

  // Versioned, checksummed, URL-safe base64 text.
  std::string serialize() const;
  static PageCursor deserialize(std::string_view text);  // throws CursorError

  friend bool operator==(const PageCursor&, const PageCursor&) = default;
};

// Identity of a plan plus its parameter values; a cursor only resumes the
// query it was produced by.
uint64_t queryFingerprint(const PhysicalPlan& plan, const Params& params);

}  // namespace boundql
