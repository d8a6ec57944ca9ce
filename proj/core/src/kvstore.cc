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
#include "boundql/kvstore.h"

#include <fstream>
#include <mutex>

#include "boundql/error.h"

namespace boundql {

namespace {
thread_local double tInjectedMs = 0.0;
}

double takeInjectedLatencyMs() {
  double v = tInjectedMs;
  tInjectedMs = 0.0;
  return v;
}

void addInjectedLatencyMs(double ms) { tInjectedMs += ms; }

KeyRange KeyRange::prefix(std::string_view prefix) {
  return KeyRange{std::string(prefix), prefixSuccessor(prefix)};
}

bool KeyRange::contains(std::string_view key) const {
  if (compareKeys(key, start) < 0) return false;
  return !end || compareKeys(key, *end) < 0;
}

std::string_view toString(StoreOp op) {
  switch (op) {
    case StoreOp::kGet:
      return "get";
    case StoreOp::kPut:
      return "put";
    case StoreOp::kDelete:
      return "delete";
    case StoreOp::kRange:
      return "range";
    case StoreOp::kCount:
      return "count";
    case StoreOp::kTestAndSet:
      return "test_and_set";
  }
  return "?";
}

std::optional<std::string> MemoryStore::get(std::string_view key) {
  std::shared_lock lock(mu_);
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return it->second;
}

void MemoryStore::put(std::string_view key, std::string_view value) {
  std::unique_lock lock(mu_);
  data_.insert_or_assign(std::string(key), std::string(value));
}

void MemoryStore::erase(std::string_view key) {
  std::unique_lock lock(mu_);
  auto it = data_.find(key);
  if (it != data_.end()) data_.erase(it);
}

std::vector<KvRecord> MemoryStore::getRange(const KeyRange& range, std::size_t limit,
                                            Direction direction) {
  if (limit == 0) throw Error("getRange limit must be ≥ 1");
  if (range.end && compareKeys(range.start, *range.end) > 0)
    throw Error("invalid range: start key is after end key");
  std::vector<KvRecord> out;
  std::shared_lock lock(mu_);
  auto lo = data_.lower_bound(range.start);
  auto hi = range.end ? data_.lower_bound(*range.end) : data_.end();
  if (direction == Direction::kAscending) {
    for (auto it = lo; it != hi && out.size() < limit; ++it) out.push_back({it->first, it->second});
  } else {
    for (auto it = hi; it != lo && out.size() < limit;) {
      --it;
      out.push_back({it->first, it->second});
    }
  }
  return out;
}

std::size_t MemoryStore::countRange(const KeyRange& range) {
  std::shared_lock lock(mu_);
  auto lo = data_.lower_bound(range.start);
  auto hi = range.end ? data_.lower_bound(*range.end) : data_.end();
  if (range.end && compareKeys(range.start, *range.end) > 0) return 0;
  return static_cast<std::size_t>(std::distance(lo, hi));
}

bool MemoryStore::testAndSet(std::string_view key, const std::optional<std::string>& expected,
                             const std::optional<std::string>& newValue) {
  std::unique_lock lock(mu_);
  auto it = data_.find(key);
  bool matches = (it == data_.end()) ? !expected.has_value()
                                     : (expected.has_value() && *expected == it->second);
  if (!matches) return false;
  if (newValue) {
    if (it == data_.end()) data_.emplace(std::string(key), *newValue);
    else it->second = *newValue;
  } else if (it != data_.end()) {
    data_.erase(it);
  }
  return true;
}

std::size_t MemoryStore::size() const {
  std::shared_lock lock(mu_);
  return data_.size();
}

namespace {
void writeBlob(std::ostream& out, const std::string& s) {
  auto n = static_cast<uint32_t>(s.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
bool readBlob(std::istream& in, std::string& s) {
  uint32_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) return false;
  s.resize(n);
  return static_cast<bool>(in.read(s.data(), n));
}
constexpr char kSnapshotMagic[] = "BQLSNAP1";
}  // namespace

void MemoryStore::saveTo(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreUnavailable("cannot write snapshot " + path);
  out.write(kSnapshotMagic, 8);
  std::shared_lock lock(mu_);
  for (const auto& [k, v] : data_) {
    writeBlob(out, k);
    writeBlob(out, v);
  }
}

void MemoryStore::loadFrom(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreUnavailable("cannot read snapshot " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::string_view(magic, 8) != std::string_view(kSnapshotMagic, 8))
    throw StoreUnavailable("not a store snapshot: " + path);
  std::unique_lock lock(mu_);
  data_.clear();
  std::string k, v;
  while (readBlob(in, k)) {
    if (!readBlob(in, v)) throw StoreUnavailable("truncated snapshot " + path);
    data_.insert_or_assign(k, v);
  }
}

void FaultyStore::check(StoreOp op) {
  if (fail_ && fail_(op)) throw StoreUnavailable("injected failure on " + std::string(toString(op)));
}

std::optional<std::string> FaultyStore::get(std::string_view key) {
  check(StoreOp::kGet);
  return inner_->get(key);
}
void FaultyStore::put(std::string_view key, std::string_view value) {
  check(StoreOp::kPut);
  inner_->put(key, value);
}
void FaultyStore::erase(std::string_view key) {
  check(StoreOp::kDelete);
  inner_->erase(key);
}
std::vector<KvRecord> FaultyStore::getRange(const KeyRange& range, std::size_t limit,
                                            Direction direction) {
  check(StoreOp::kRange);
  return inner_->getRange(range, limit, direction);
}
std::size_t FaultyStore::countRange(const KeyRange& range) {
  check(StoreOp::kCount);
  return inner_->countRange(range);
}
bool FaultyStore::testAndSet(std::string_view key, const std::optional<std::string>& expected,
                             const std::optional<std::string>& newValue) {
  check(StoreOp::kTestAndSet);
  return inner_->testAndSet(key, expected, newValue);
}

std::optional<std::string> CountingStore::get(std::string_view key) {
  ++requests_;
  auto v = inner_->get(key);
  if (v) ++records_;
  return v;
}

void CountingStore::put(std::string_view key, std::string_view value) {
  ++requests_;
  inner_->put(key, value);
}

void CountingStore::erase(std::string_view key) {
  ++requests_;
  inner_->erase(key);
}

std::vector<KvRecord> CountingStore::getRange(const KeyRange& range, std::size_t limit, Direction direction) {
  ++requests_;
  auto recs = inner_->getRange(range, limit, direction);
  records_ += static_cast<int64_t>(recs.size());
  return recs;
}

std::size_t CountingStore::countRange(const KeyRange& range) {
  ++requests_;
  return inner_->countRange(range);
}

bool CountingStore::testAndSet(std::string_view key, const std::optional<std::string>& expected,
                               const std::optional<std::string>& newValue) {
  ++requests_;
  return inner_->testAndSet(key, expected, newValue);
}

}  // namespace boundql
