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
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "boundql/kvstore.h"

namespace boundql {

// Delay distribution for one operation kind. Range requests additionally
// pay perRecordMs for every record returned.
struct DelaySpec {
  enum class Kind { kConstant, kUniform, kLognormal, kEmpirical };
  Kind kind = Kind::kConstant;
  double a = 0.0;  // constant ms | uniform min | lognormal median
  double b = 0.0;  // uniform max | lognormal sigma (log space)
  std::vector<double> samples;  // empirical
  double perRecordMs = 0.0;

  static DelaySpec constant(double ms) { return {Kind::kConstant, ms, 0.0, {}, 0.0}; }
  static DelaySpec uniform(double lo, double hi) { return {Kind::kUniform, lo, hi, {}, 0.0}; }
  static DelaySpec lognormal(double medianMs, double sigma) {
    return {Kind::kLognormal, medianMs, sigma, {}, 0.0};
  }

  double mean() const;  // excluding the per-record component
  double sample(std::mt19937_64& rng, std::size_t records) const;
};

struct DelaySet {
  DelaySpec fallback;
  std::map<StoreOp, DelaySpec> perOp;

  const DelaySpec& forOp(StoreOp op) const;
};

struct LatencyWindow {
  int64_t startMs = 0;
  int64_t endMs = 0;
  DelaySet delays;
};

// Per-operation delay distributions, optionally overridden inside time
// windows to emulate periods of degraded service.
class LatencyProfile {
 public:
  LatencyProfile() = default;
  explicit LatencyProfile(DelaySet base) : base_(std::move(base)) {}

  static LatencyProfile constant(double ms) { return LatencyProfile(DelaySet{DelaySpec::constant(ms), {}}); }
  // JSON document; empirical "file" entries resolve relative to baseDir.
  static LatencyProfile fromJson(const std::string& text, const std::string& baseDir = ".");

  void addWindow(LatencyWindow window) { windows_.push_back(std::move(window)); }
  const DelaySpec& specFor(StoreOp op, int64_t timeMs) const;
  uint64_t seed() const { return seed_; }
  void setSeed(uint64_t seed) { seed_ = seed; }

 private:
  DelaySet base_;
  std::vector<LatencyWindow> windows_;
  uint64_t seed_ = 42;
};

// One latency observation. For store requests kind is the store operation,
// alpha the record count and beta the payload bytes; operator benchmarks
// write operator kinds with "alpha" or "alphaC x alphaJ".
struct TraceRow {
  int64_t timestampMs = 0;
  std::string kind;
  std::string alpha;
  int64_t betaBytes = 0;
  double latencyMs = 0.0;
};

void writeTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows, bool header = true);
std::vector<TraceRow> readTraceCsv(std::istream& in);

// Decorator that delays each request by a sample from the profile.
// kSleep blocks the caller for real; kVirtual only accounts the delay (see
// takeInjectedLatencyMs) against a caller-driven clock, which lets hours of
// simulated load run in seconds.
class LatencyStore final : public KvStore {
 public:
  enum class Clock { kSleep, kVirtual };

  LatencyStore(std::shared_ptr<KvStore> inner, LatencyProfile profile, Clock clock = Clock::kSleep);

  std::optional<std::string> get(std::string_view key) override;
  void put(std::string_view key, std::string_view value) override;
  void erase(std::string_view key) override;
  std::vector<KvRecord> getRange(const KeyRange& range, std::size_t limit,
                                 Direction direction) override;
  std::size_t countRange(const KeyRange& range) override;
  bool testAndSet(std::string_view key, const std::optional<std::string>& expected,
                  const std::optional<std::string>& newValue) override;

  void setVirtualTimeMs(int64_t t) { virtualMs_.store(t); }
  int64_t nowMs() const;

  void setTracing(bool on) { tracing_.store(on); }
  std::vector<TraceRow> takeTrace();

  KvStore& inner() { return *inner_; }

 private:
  void delay(StoreOp op, std::size_t records, std::size_t bytes);

  std::shared_ptr<KvStore> inner_;
  LatencyProfile profile_;
  Clock clock_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<int64_t> virtualMs_{0};
  std::atomic<bool> tracing_{false};
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::vector<TraceRow> trace_;
};

}  // namespace boundql
