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
#include "boundql/latency_store.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "boundql/error.h"

namespace boundql {

double DelaySpec::mean() const {
  switch (kind) {
    case Kind::kConstant:
      return a;
    case Kind::kUniform:
      return (a + b) / 2.0;
    case Kind::kLognormal:
      return a * std::exp(b * b / 2.0);
    case Kind::kEmpirical: {
      if (samples.empty()) return 0.0;
      double s = 0;
      for (double x : samples) s += x;
      return s / static_cast<double>(samples.size());
    }
  }
  return 0.0;
}

double DelaySpec::sample(std::mt19937_64& rng, std::size_t records) const {
  double base = 0.0;
  switch (kind) {
    case Kind::kConstant:
      base = a;
      break;
    case Kind::kUniform:
      base = std::uniform_real_distribution<double>(a, b)(rng);
      break;
    case Kind::kLognormal:
      base = std::lognormal_distribution<double>(std::log(a), b)(rng);
      break;
    case Kind::kEmpirical:
      if (!samples.empty())
        base = samples[std::uniform_int_distribution<std::size_t>(0, samples.size() - 1)(rng)];
      break;
  }
  return std::max(0.0, base + perRecordMs * static_cast<double>(records));
}

const DelaySpec& DelaySet::forOp(StoreOp op) const {
  auto it = perOp.find(op);
  return it == perOp.end() ? fallback : it->second;
}

const DelaySpec& LatencyProfile::specFor(StoreOp op, int64_t timeMs) const {
  for (const auto& w : windows_)
    if (timeMs >= w.startMs && timeMs < w.endMs) return w.delays.forOp(op);
  return base_.forOp(op);
}

namespace {

std::optional<StoreOp> storeOpFromString(const std::string& s) {
  for (auto op : {StoreOp::kGet, StoreOp::kPut, StoreOp::kDelete, StoreOp::kRange,
                  StoreOp::kCount, StoreOp::kTestAndSet})
    if (toString(op) == s) return op;
  return std::nullopt;
}

DelaySpec parseSpec(const nlohmann::json& j, const std::string& baseDir) {
  DelaySpec spec;
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    spec = DelaySpec::constant(j.value("ms", 0.0));
  } else if (kind == "uniform") {
    spec = DelaySpec::uniform(j.at("min_ms").get<double>(), j.at("max_ms").get<double>());
  } else if (kind == "lognormal") {
    spec = DelaySpec::lognormal(j.at("median_ms").get<double>(), j.at("sigma").get<double>());
  } else if (kind == "empirical") {
    spec.kind = DelaySpec::Kind::kEmpirical;
    if (j.contains("samples")) {
      spec.samples = j.at("samples").get<std::vector<double>>();
    } else {
      std::string path = j.at("file").get<std::string>();
      if (!path.empty() && path[0] != '/') path = baseDir + "/" + path;
      std::ifstream in(path);
      if (!in) throw Error("cannot read empirical latency file " + path);
      double x;
      while (in >> x) spec.samples.push_back(x);
    }
    if (spec.samples.empty()) throw Error("empirical latency distribution has no samples");
  } else {
    throw Error("unknown latency distribution kind '" + kind + "'");
  }
  spec.perRecordMs = j.value("per_record_ms", 0.0);
  if (spec.a < 0 || spec.b < 0 || spec.perRecordMs < 0)
    throw Error("latency parameters must be non-negative");
  return spec;
}

DelaySet parseSet(const nlohmann::json& j, const std::string& baseDir, const DelaySet* inherit) {
  DelaySet set;
  if (inherit) set = *inherit;
  if (j.contains("default")) set.fallback = parseSpec(j.at("default"), baseDir);
  if (j.contains("ops")) {
    for (auto& [name, spec] : j.at("ops").items()) {
      auto op = storeOpFromString(name);
      if (!op) throw Error("unknown store operation '" + name + "' in latency profile");
      set.perOp[*op] = parseSpec(spec, baseDir);
    }
  }
  return set;
}

}  // namespace

LatencyProfile LatencyProfile::fromJson(const std::string& text, const std::string& baseDir) {
  try {
    auto j = nlohmann::json::parse(text);
    LatencyProfile profile(parseSet(j, baseDir, nullptr));
    profile.seed_ = j.value("seed", uint64_t{42});
    if (j.contains("windows")) {
      for (const auto& jw : j.at("windows")) {
        LatencyWindow w;
        w.startMs = static_cast<int64_t>(jw.at("start_min").get<double>() * 60000.0);
        w.endMs = static_cast<int64_t>(jw.at("end_min").get<double>() * 60000.0);
        if (w.endMs <= w.startMs) throw Error("latency window must have end_min > start_min");
        w.delays = parseSet(jw, baseDir, &profile.base_);
        profile.windows_.push_back(std::move(w));
      }
    }
    return profile;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid latency profile: ") + e.what());
  }
}

void writeTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows, bool header) {
  if (header) out << "timestamp_ms,op_kind,alpha,beta_bytes,latency_ms\n";
  for (const auto& r : rows)
    out << r.timestampMs << ',' << r.kind << ',' << r.alpha << ',' << r.betaBytes << ','
        << r.latencyMs << '\n';
}

std::vector<TraceRow> readTraceCsv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty() || line.rfind("timestamp_ms", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw Error("trace line " + std::to_string(lineNo) + ": expected 5 fields");
    try {
      rows.push_back({std::stoll(cells[0]), cells[1], cells[2], std::stoll(cells[3]),
                      std::stod(cells[4])});
    } catch (const std::exception&) {
      throw Error("trace line " + std::to_string(lineNo) + ": malformed number");
    }
  }
  return rows;
}

LatencyStore::LatencyStore(std::shared_ptr<KvStore> inner, LatencyProfile profile, Clock clock)
    : inner_(std::move(inner)),
      profile_(std::move(profile)),
      clock_(clock),
      start_(std::chrono::steady_clock::now()),
      rng_(profile_.seed()) {}

int64_t LatencyStore::nowMs() const {
  if (clock_ == Clock::kVirtual) return virtualMs_.load();
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start_)
      .count();
}

void LatencyStore::delay(StoreOp op, std::size_t records, std::size_t bytes) {
  int64_t now = nowMs();
  double ms;
  {
    std::lock_guard lock(mu_);
    ms = profile_.specFor(op, now).sample(rng_, records);
    if (tracing_.load())
      trace_.push_back({now, std::string(toString(op)), std::to_string(records),
                        static_cast<int64_t>(bytes), ms});
  }
  if (clock_ == Clock::kSleep && ms > 0)
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
  addInjectedLatencyMs(ms);
}

std::vector<TraceRow> LatencyStore::takeTrace() {
  std::lock_guard lock(mu_);
  return std::exchange(trace_, {});
}

std::optional<std::string> LatencyStore::get(std::string_view key) {
  auto v = inner_->get(key);
  delay(StoreOp::kGet, v ? 1 : 0, v ? v->size() : 0);
  return v;
}

void LatencyStore::put(std::string_view key, std::string_view value) {
  inner_->put(key, value);
  delay(StoreOp::kPut, 1, value.size());
}

void LatencyStore::erase(std::string_view key) {
  inner_->erase(key);
  delay(StoreOp::kDelete, 0, 0);
}

std::vector<KvRecord> LatencyStore::getRange(const KeyRange& range, std::size_t limit,
                                             Direction direction) {
  auto out = inner_->getRange(range, limit, direction);
  std::size_t bytes = 0;
  for (const auto& r : out) bytes += r.value.size();
  delay(StoreOp::kRange, out.size(), bytes);
  return out;
}

std::size_t LatencyStore::countRange(const KeyRange& range) {
  auto n = inner_->countRange(range);
  delay(StoreOp::kCount, 0, 0);
  return n;
}

bool LatencyStore::testAndSet(std::string_view key, const std::optional<std::string>& expected,
                              const std::optional<std::string>& newValue) {
  bool ok = inner_->testAndSet(key, expected, newValue);
  delay(StoreOp::kTestAndSet, 1, newValue ? newValue->size() : 0);
  return ok;
}

}  // namespace boundql
