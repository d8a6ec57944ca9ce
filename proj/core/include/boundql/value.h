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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace boundql {

enum class ColumnType { kInt64, kString, kBool, kTimestamp };

std::string_view toString(ColumnType type);
std::optional<ColumnType> columnTypeFromString(std::string_view name);

// A typed scalar. Timestamps are milliseconds since the epoch.
class Value {
 public:
  Value() : type_(ColumnType::kInt64), data_(int64_t{0}) {}

  static Value int64(int64_t v) { return Value(ColumnType::kInt64, v); }
  static Value timestamp(int64_t ms) { return Value(ColumnType::kTimestamp, ms); }
  static Value boolean(bool v) { return Value(ColumnType::kBool, v); }
  static Value string(std::string v) {
    return Value(ColumnType::kString, std::move(v));
  }

  ColumnType type() const { return type_; }
  int64_t asInt() const { return std::get<int64_t>(data_); }
  bool asBool() const { return std::get<bool>(data_); }
  const std::string& asString() const { return std::get<std::string>(data_); }

  // Same value reinterpreted as another column type when the representation
  // allows it (int64 <-> timestamp). Throws TypeError otherwise.
  Value coerceTo(ColumnType target) const;

  // Order within one type. Comparing different types throws TypeError,
  // except int64 and timestamp which compare numerically.
  std::strong_ordering compare(const Value& other) const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.compare(b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    return a.compare(b);
  }

  // Literal form as accepted by the query parser ('text', 42, true).
  std::string toLiteral() const;
  // Plain display form (no quotes), used for TSV output.
  std::string toDisplay() const;

 private:
  template <typename T>
  Value(ColumnType t, T v) : type_(t), data_(std::move(v)) {}

  ColumnType type_;
  std::variant<int64_t, bool, std::string> data_;
};

using Tuple = std::vector<Value>;

// Parses a display-form string into a value of the given type.
Value parseValue(std::string_view text, ColumnType type);

}  // namespace boundql
