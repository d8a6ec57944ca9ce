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
#include "boundql/value.h"

#include <charconv>
#include <cctype>

#include "boundql/error.h"

namespace boundql {

std::string_view toString(ColumnType type) {
  switch (type) {
    case ColumnType::kInt64:
      return "INT";
    case ColumnType::kString:
      return "VARCHAR";
    case ColumnType::kBool:
      return "BOOLEAN";
    case ColumnType::kTimestamp:
      return "TIMESTAMP";
  }
  return "?";
}

std::optional<ColumnType> columnTypeFromString(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "INT" || upper == "INTEGER" || upper == "BIGINT" || upper == "INT64")
    return ColumnType::kInt64;
  if (upper == "VARCHAR" || upper == "STRING" || upper == "TEXT" || upper == "CHAR")
    return ColumnType::kString;
  if (upper == "BOOLEAN" || upper == "BOOL") return ColumnType::kBool;
  if (upper == "TIMESTAMP") return ColumnType::kTimestamp;
  return std::nullopt;
}

namespace {
bool isNumeric(ColumnType t) {
  return t == ColumnType::kInt64 || t == ColumnType::kTimestamp;
}
}  // namespace

Value Value::coerceTo(ColumnType target) const {
  if (type_ == target) return *this;
  if (isNumeric(type_) && isNumeric(target)) return Value(target, asInt());
  throw TypeError("cannot use " + std::string(toString(type_)) + " value " +
                  toLiteral() + " as " + std::string(toString(target)));
}

std::strong_ordering Value::compare(const Value& other) const {
  if (isNumeric(type_) && isNumeric(other.type_)) return asInt() <=> other.asInt();
  if (type_ != other.type_) {
    throw TypeError("cannot compare " + std::string(toString(type_)) + " with " +
                    std::string(toString(other.type_)));
  }
  if (type_ == ColumnType::kBool) return asBool() <=> other.asBool();
  int c = asString().compare(other.asString());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Value::toLiteral() const {
  switch (type_) {
    case ColumnType::kString: {
      std::string out = "'";
      for (char c : asString()) {
        if (c == '\'') out += "''";
        else out += c;
      }
      return out + "'";
    }
    default:
      return toDisplay();
  }
}

std::string Value::toDisplay() const {
  switch (type_) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp:
      return std::to_string(asInt());
    case ColumnType::kBool:
      return asBool() ? "true" : "false";
    case ColumnType::kString:
      return asString();
  }
  return {};
}

Value parseValue(std::string_view text, ColumnType type) {
  switch (type) {
    case ColumnType::kInt64:
    case ColumnType::kTimestamp: {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size())
        throw TypeError("not an integer: '" + std::string(text) + "'");
      return type == ColumnType::kInt64 ? Value::int64(v) : Value::timestamp(v);
    }
    case ColumnType::kBool:
      if (text == "true" || text == "TRUE" || text == "1") return Value::boolean(true);
      if (text == "false" || text == "FALSE" || text == "0") return Value::boolean(false);
      throw TypeError("not a boolean: '" + std::string(text) + "'");
    case ColumnType::kString:
      return Value::string(std::string(text));
  }
  throw TypeError("unknown type");
}

}  // namespace boundql
