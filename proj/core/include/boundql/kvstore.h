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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/key_codec.h"

namespace boundql {

enum class Direction { kAscending, kDescending };

struct KvRecord {
  KvKey key;
  std::string value;

  friend bool operator==(const KvRecord&, const KvRecord&) = default;
};

// Half-open key interval [start, end). An absent end means unbounded above.
struct KeyRange {
  KvKey start;
  std::optional<KvKey> end;

  static KeyRange prefix(std::string_view prefix);
  bool contains(std::string_view key) const;
};

enum class StoreOp { kGet, kPut, kDelete, kRange, kCount, kTestAndSet };
std::string_view toString(StoreOp op);

// Ordered key/value store. Implementations are safe for concurrent callers
// and each call counts as one request.
class KvStore {
 public:
  virtual ~KvStore() = default;

  virtual std::optional<std::string> get(std::string_view key) = 0;
  virtual void put(std::string_view key, std::string_view value) = 0;
  virtual void erase(std::string_view key) = 0;
  // Up to limit records inside range, in the requested direction.
  virtual std::vector<KvRecord> getRange(const KeyRange& range, std::size_t limit,
                                         Direction direction) = 0;
  virtual std::size_t countRange(const KeyRange& range) = 0;
  // Writes newValue iff the current value equals expected (absence matches
  // nullopt). newValue == nullopt deletes the key.
  virtual bool testAndSet(std::string_view key, const std::optional<std::string>& expected,
                          const std::optional<std::string>& newValue) = 0;
};

inline constexpr std::size_t kUnlimited = static_cast<std::size_t>(-1);

// Linearizable in-memory reference store.
class MemoryStore final : public KvStore {
 public:
  std::optional<std::string> get(std::string_view key) override;
  void put(std::string_view key, std::string_view value) override;
  void erase(std::string_view key) override;
  std::vector<KvRecord> getRange(const KeyRange& range, std::size_t limit,
                                 Direction direction) override;
  std::size_t countRange(const KeyRange& range) override;
  bool testAndSet(std::string_view key, const std::optional<std::string>& expected,
                  const std::optional<std::string>& newValue) override;

  std::size_t size() const;
  // Snapshot support for the command-line tool.
  void saveTo(const std::string& path) const;
  void loadFrom(const std::string& path);

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string, std::less<>> data_;
};

// Failure injection wrapper: every call consults the predicate and throws
// StoreUnavailable when it returns true.
class FaultyStore final : public KvStore {
 public:
  using Predicate = std::function<bool(StoreOp)>;
  FaultyStore(std::shared_ptr<KvStore> inner, Predicate fail)
      : inner_(std::move(inner)), fail_(std::move(fail)) {}

  std::optional<std::string> get(std::string_view key) override;
  void put(std::string_view key, std::string_view value) override;
  void erase(std::string_view key) override;
  std::vector<KvRecord> getRange(const KeyRange& range, std::size_t limit,
                                 Direction direction) override;
  std::size_t countRange(const KeyRange& range) override;
  bool testAndSet(std::string_view key, const std::optional<std::string>& expected,
                  const std::optional<std::string>& newValue) override;

 private:
  void check(StoreOp op);
  std::shared_ptr<KvStore> inner_;
  Predicate fail_;
};

// Latency injected by a decorating store on the calling thread since the
// last call. Executors use it to account modeled time per request.
double takeInjectedLatencyMs();
void addInjectedLatencyMs(double ms);

// Counts every call reaching the wrapped store, independently of the
// executor's own accounting.
class CountingStore final : public KvStore {
 public:
  explicit CountingStore(std::shared_ptr<KvStore> inner) : inner_(std::move(inner)) {}

  std::optional<std::string> get(std::string_view key) override;
  void put(std::string_view key, std::string_view value) override;
  void erase(std::string_view key) override;
  std::vector<KvRecord> getRange(const KeyRange& range, std::size_t limit,
                                 Direction direction) override;
  std::size_t countRange(const KeyRange& range) override;
  bool testAndSet(std::string_view key, const std::optional<std::string>& expected,
                  const std::optional<std::string>& newValue) override;

  int64_t requests() const { return requests_.load(); }
  int64_t records() const { return records_.load(); }  // returned by get/getRange
  void reset() {
    requests_ = 0;
    records_ = 0;
  }

 private:
  std::shared_ptr<KvStore> inner_;
  std::atomic<int64_t> requests_{0};
  std::atomic<int64_t> records_{0};
};

}  // namespace boundql
