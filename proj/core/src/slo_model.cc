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
#include "boundql/slo_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "boundql/error.h"
#include "boundql/logical_plan.h"

namespace boundql {

namespace {

constexpr double kEps = 1e-12;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int64_t parseInt(std::string_view s, std::string_view what) {
  s = trim(s);
  int64_t v = 0;
  std::size_t used = 0;
  try {
    v = std::stoll(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

// --- LatencyDistribution ---------------------------------------------------

LatencyDistribution LatencyDistribution::delta(int64_t ms) {
  return fromMasses(std::max<int64_t>(ms, 0), {1.0});
}

LatencyDistribution LatencyDistribution::fromMasses(int64_t firstBin, std::vector<double> masses) {
  if (masses.empty()) throw ModelError("empty distribution");
  if (firstBin < 0) throw ModelError("negative latency bin");
  double total = 0.0;
  for (double m : masses) {
    if (m < 0.0 || !std::isfinite(m)) throw ModelError("invalid probability mass");
    total += m;
  }
  if (total <= 0.0) throw ModelError("distribution has no mass");
  for (double& m : masses) m /= total;
  LatencyDistribution d;
  d.first_ = firstBin;
  d.masses_ = std::move(masses);
  d.trim();
  return d;
}

LatencyDistribution LatencyDistribution::fromCounts(int64_t firstBin, const std::vector<int64_t>& counts) {
  return fromMasses(firstBin, std::vector<double>(counts.begin(), counts.end()));
}

int64_t LatencyDistribution::binOf(double ms, int64_t ceilingMs) {
  if (!(ms > 0.0)) return 0;
  // Tolerate representation noise so that 7.0000000001 stays in bin 7.
  double c = std::ceil(ms - 1e-9);
  return std::min<int64_t>(static_cast<int64_t>(c), ceilingMs);
}

LatencyDistribution LatencyDistribution::fromSamples(std::span<const double> samplesMs, int64_t ceilingMs) {
  if (samplesMs.empty()) throw ModelError("no samples");
  int64_t lo = ceilingMs, hi = 0;
  for (double s : samplesMs) {
    lo = std::min(lo, binOf(s, ceilingMs));
    hi = std::max(hi, binOf(s, ceilingMs));
  }
  std::vector<double> m(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (double s : samplesMs) m[static_cast<std::size_t>(binOf(s, ceilingMs) - lo)] += 1.0;
  return fromMasses(lo, std::move(m));
}

void LatencyDistribution::trim() {
  std::size_t lead = 0;
  while (lead + 1 < masses_.size() && masses_[lead] == 0.0) ++lead;
  std::size_t end = masses_.size();
  while (end > lead + 1 && masses_[end - 1] == 0.0) --end;
  if (lead > 0 || end < masses_.size()) {
    masses_ = std::vector<double>(masses_.begin() + static_cast<std::ptrdiff_t>(lead),
                                  masses_.begin() + static_cast<std::ptrdiff_t>(end));
    first_ += static_cast<int64_t>(lead);
  }
}

double LatencyDistribution::mass(int64_t bin) const {
  if (bin < first_ || bin > lastBin()) return 0.0;
  return masses_[static_cast<std::size_t>(bin - first_)];
}

double LatencyDistribution::cdf(int64_t bin) const {
  if (bin < first_) return 0.0;
  double c = 0.0;
  for (int64_t b = first_; b <= std::min(bin, lastBin()); ++b) c += masses_[static_cast<std::size_t>(b - first_)];
  return std::min(c, 1.0);
}

double LatencyDistribution::totalMass() const { return std::accumulate(masses_.begin(), masses_.end(), 0.0); }

double LatencyDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) m += masses_[i] * static_cast<double>(first_ + static_cast<int64_t>(i));
  return m;
}

int64_t LatencyDistribution::quantile(double q) const {
  if (!(q > 0.0 && q <= 1.0)) throw ModelError("quantile must be in (0, 1]");
  double c = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    c += masses_[i];
    if (c >= q - kEps) return first_ + static_cast<int64_t>(i);
  }
  return lastBin();
}

LatencyDistribution convolve(const LatencyDistribution& a, const LatencyDistribution& b, int64_t ceilingMs) {
  const auto& x = a.masses();
  const auto& y = b.masses();
  const int64_t first = std::min(a.firstBin() + b.firstBin(), ceilingMs);
  const int64_t last = std::min(a.lastBin() + b.lastBin(), ceilingMs);
  std::vector<double> out(static_cast<std::size_t>(last - first + 1), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      int64_t bin = std::min(a.firstBin() + b.firstBin() + static_cast<int64_t>(i + j), ceilingMs);
      out[static_cast<std::size_t>(bin - first)] += x[i] * y[j];
    }
  }
  return LatencyDistribution::fromMasses(first, std::move(out));
}

LatencyDistribution maxCombine(const LatencyDistribution& a, const LatencyDistribution& b) {
  const int64_t first = std::max(a.firstBin(), b.firstBin());
  const int64_t last = std::max(a.lastBin(), b.lastBin());
  std::vector<double> out;
  double ca = a.cdf(first - 1), cb = b.cdf(first - 1), prev = ca * cb;
  for (int64_t bin = first; bin <= last; ++bin) {
    ca += a.mass(bin);
    cb += b.mass(bin);
    double cur = std::min(ca, 1.0) * std::min(cb, 1.0);
    out.push_back(std::max(cur - prev, 0.0));
    prev = cur;
  }
  // Bins below 'first' carry no mass since one operand is always >= first.
  return LatencyDistribution::fromMasses(first, std::move(out));
}

LatencyDistribution maxPower(const LatencyDistribution& a, int64_t k) {
  if (k < 1) throw ModelError("maxPower needs k >= 1");
  std::vector<double> out;
  double prev = 0.0, c = 0.0;
  for (int64_t bin = a.firstBin(); bin <= a.lastBin(); ++bin) {
    c = std::min(c + a.mass(bin), 1.0);
    double cur = std::pow(c, static_cast<double>(k));
    out.push_back(std::max(cur - prev, 0.0));
    prev = cur;
  }
  return LatencyDistribution::fromMasses(a.firstBin(), std::move(out));
}

double totalVariation(const LatencyDistribution& a, const LatencyDistribution& b) {
  double tv = 0.0;
  for (int64_t bin = std::min(a.firstBin(), b.firstBin()); bin <= std::max(a.lastBin(), b.lastBin()); ++bin)
    tv += std::abs(a.mass(bin) - b.mass(bin));
  return tv / 2.0;
}

// --- models ----------------------------------------------------------------

std::string_view toString(ModelKind k) {
  switch (k) {
    case ModelKind::kIndexScan:
      return "IndexScan";
    case ModelKind::kIndexFKJoin:
      return "IndexFKJoin";
    case ModelKind::kSortedIndexJoin:
      return "SortedIndexJoin";
  }
  return "?";
}

std::optional<ModelKind> modelKindFromString(std::string_view s) {
  for (auto k : {ModelKind::kIndexScan, ModelKind::kIndexFKJoin, ModelKind::kSortedIndexJoin})
    if (toString(k) == s) return k;
  return std::nullopt;
}

std::string ModelKey::alphaText() const {
  std::string s;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "x" : "") + std::to_string(alpha[i]);
  return s;
}

std::string ModelKey::toString() const {
  return std::string(boundql::toString(kind)) + "(" + alphaText() + ", " + std::to_string(beta) + "B)";
}

std::vector<int64_t> parseAlpha(std::string_view text) {
  std::vector<int64_t> out;
  for (auto part : split(text, 'x')) out.push_back(parseInt(part, "alpha"));
  return out;
}

int64_t OperatorModel::samples() const { return std::accumulate(counts.begin(), counts.end(), int64_t{0}); }

OperatorModel OperatorModel::fromCounts(ModelKey key, int64_t firstBin, std::vector<int64_t> counts) {
  OperatorModel m;
  m.key = std::move(key);
  m.firstBin = firstBin;
  m.dist = LatencyDistribution::fromCounts(firstBin, counts);
  m.counts = std::move(counts);
  return m;
}

ModelSet trainModels(const std::vector<TraceRow>& trace, int64_t intervalMs) {
  if (trace.empty()) throw ModelError("cannot train on an empty trace");
  if (intervalMs <= 0) throw ModelError("interval must be positive");
  std::map<int64_t, std::map<ModelKey, std::vector<int64_t>>> bins;
  int64_t lo = INT64_MAX, hi = INT64_MIN;
  for (const auto& r : trace) {
    auto kind = modelKindFromString(r.kind);
    if (!kind) throw ModelError("unknown operator kind '" + r.kind + "' in trace");
    if (r.timestampMs < 0) throw ModelError("negative trace timestamp");
    int64_t idx = r.timestampMs / intervalMs;
    lo = std::min(lo, idx);
    hi = std::max(hi, idx);
    bins[idx][ModelKey{*kind, parseAlpha(r.alpha), r.betaBytes}].push_back(LatencyDistribution::binOf(r.latencyMs));
  }
  ModelSet set;
  set.intervalMs = intervalMs;
  for (int64_t idx = lo; idx <= hi; ++idx) {
    IntervalModels im;
    im.index = idx;
    for (auto& [key, samples] : bins[idx]) {
      auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
      std::vector<int64_t> counts(static_cast<std::size_t>(*mx - *mn + 1), 0);
      for (auto b : samples) ++counts[static_cast<std::size_t>(b - *mn)];
      im.models.emplace(key, OperatorModel::fromCounts(key, *mn, std::move(counts)));
    }
    set.intervals.push_back(std::move(im));
  }
  return set;
}

const OperatorModel& lookupModel(const IntervalModels& models, const ModelKey& key) {
  if (auto it = models.models.find(key); it != models.models.end()) return it->second;
  const OperatorModel* best = nullptr;
  for (const auto& [k, m] : models.models) {
    if (k.kind != key.kind || k.alpha.size() != key.alpha.size() || k.beta < key.beta) continue;
    bool dominates = true;
    for (std::size_t i = 0; i < k.alpha.size(); ++i) dominates = dominates && k.alpha[i] >= key.alpha[i];
    if (!dominates) continue;
    if (!best || std::tie(k.alpha, k.beta) < std::tie(best->key.alpha, best->key.beta)) best = &m;
  }
  if (!best)
    throw ModelError("no model dominates " + key.toString() + " in interval " + std::to_string(models.index));
  return *best;
}

std::string ModelSet::toJson() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["bin_ms"] = 1;
  j["interval_ms"] = intervalMs;
  j["intervals"] = nlohmann::ordered_json::array();
  for (const auto& iv : intervals) {
    nlohmann::ordered_json ij;
    ij["index"] = iv.index;
    ij["models"] = nlohmann::ordered_json::array();
    for (const auto& [key, m] : iv.models) {
      nlohmann::ordered_json mj;
      mj["kind"] = std::string(toString(key.kind));
      mj["alpha"] = key.alpha;
      mj["beta"] = key.beta;
      mj["first_bin"] = m.firstBin;
      mj["counts"] = m.counts;
      ij["models"].push_back(std::move(mj));
    }
    j["intervals"].push_back(std::move(ij));
  }
  return j.dump(1);
}

ModelSet ModelSet::fromJson(std::string_view text) {
  ModelSet set;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw ModelError("unsupported model file version");
    if (j.at("bin_ms").get<int>() != 1) throw ModelError("only 1 ms bins are supported");
    set.intervalMs = j.at("interval_ms").get<int64_t>();
    for (const auto& ij : j.at("intervals")) {
      IntervalModels iv;
      iv.index = ij.at("index").get<int64_t>();
      for (const auto& mj : ij.at("models")) {
        auto kind = modelKindFromString(mj.at("kind").get<std::string>());
        if (!kind) throw ModelError("unknown operator kind in model file");
        ModelKey key{*kind, mj.at("alpha").get<std::vector<int64_t>>(), mj.at("beta").get<int64_t>()};
        iv.models.emplace(key, OperatorModel::fromCounts(key, mj.at("first_bin").get<int64_t>(),
                                                         mj.at("counts").get<std::vector<int64_t>>()));
      }
      set.intervals.push_back(std::move(iv));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  return set;
}

void ModelSet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << toJson() << "\n";
}

ModelSet ModelSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fromJson(ss.str());
}

// --- prediction ------------------------------------------------------------

std::vector<std::pair<int, ModelKey>> operatorModelKeys(const PhysicalPlan& plan, const OperationBound&) {
  const BoundQuery& q = plan.query();
  std::vector<std::pair<int, ModelKey>> out;
  auto bytes = [&](int rel) { return static_cast<int64_t>(q.relations[rel].table.maxTupleBytes()); };
  auto need = [&](const std::optional<int64_t>& v, const PhysicalNode& n) {
    if (!v) throw ModelError("operator " + std::to_string(n.id) + " (" + plan.describe(n) + ") has no cardinality bound");
    return *v;
  };
  for (const PhysicalNode* n : plan.nodes()) {
    switch (n->op) {
      case PhysicalOp::kIndexScan:
        out.push_back({n->id, {ModelKind::kIndexScan, {need(n->outputBound, *n)}, bytes(n->rel)}});
        break;
      case PhysicalOp::kIndexFKJoin:
        out.push_back({n->id, {ModelKind::kIndexFKJoin, {need(n->child()->outputBound, *n->child()), 1}, bytes(n->rel)}});
        break;
      case PhysicalOp::kSortedIndexJoin:
        out.push_back({n->id,
                       {ModelKind::kSortedIndexJoin, {need(n->child()->outputBound, *n->child()), need(n->limitHint, *n)},
                        bytes(n->rel)}});
        break;
      default:
        break;  // local operators are not modeled
    }
  }
  // Pre-order lists the plan top-down; operators run bottom-up.
  std::reverse(out.begin(), out.end());
  return out;
}

LatencyDistribution predictQuery(const CompiledQuery& query, const IntervalModels& models) {
  LatencyDistribution total = LatencyDistribution::delta(0);
  // Remote operators form a chain in every plan the compiler produces, so
  // their latencies add.
  for (const auto& [nodeId, key] : operatorModelKeys(query.physical, query.bound)) {
    try {
      total = convolve(total, lookupModel(models, key).dist);
    } catch (const ModelError& e) {
      throw ModelError("operator " + std::to_string(nodeId) + ": " + e.what());
    }
  }
  return total;
}

int64_t PercentileSeries::maxMs() const {
  int64_t m = 0;
  for (const auto& v : values) m = std::max(m, v.valueMs);
  return m;
}

PercentileSeries percentileDistribution(const CompiledQuery& query, const ModelSet& models, double quantile) {
  PercentileSeries s;
  for (const auto& iv : models.intervals) {
    try {
      s.values.push_back({iv.index, predictQuery(query, iv).quantile(quantile)});
    } catch (const ModelError& e) {
      s.warnings.push_back("interval " + std::to_string(iv.index) + " skipped: " + e.what());
    }
  }
  return s;
}

namespace {

// "500ms", "2s", "10m", "1h"; bare numbers use the given default unit.
int64_t parseDurationMs(std::string_view text, int64_t defaultUnitMs) {
  text = trim(text);
  struct Unit {
    std::string_view suffix;
    int64_t ms;
  };
  for (Unit u : {Unit{"ms", 1}, Unit{"s", 1000}, Unit{"m", 60'000}, Unit{"min", 60'000}, Unit{"h", 3'600'000}}) {
    if (text.size() > u.suffix.size() && text.substr(text.size() - u.suffix.size()) == u.suffix) {
      auto num = text.substr(0, text.size() - u.suffix.size());
      if (!num.empty() && std::isdigit(static_cast<unsigned char>(num.back()))) return parseInt(num, "duration") * u.ms;
    }
  }
  return parseInt(text, "duration") * defaultUnitMs;
}

}  // namespace

SloSpec SloSpec::parse(std::string_view text) {
  SloSpec s;
  for (auto part : split(text, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string_view::npos) throw Error("SLO term '" + std::string(part) + "' is not key=value");
    auto key = trim(part.substr(0, eq));
    auto value = trim(part.substr(eq + 1));
    if (key == "q" || key == "quantile") {
      s.quantile = std::stod(std::string(value));
    } else if (key == "t" || key == "threshold") {
      s.thresholdMs = parseDurationMs(value, 1);
    } else if (key == "interval") {
      s.intervalMs = parseDurationMs(value, 60'000);
    } else if (key == "compliance") {
      s.compliance = std::stod(std::string(value));
    } else {
      throw Error("unknown SLO term '" + std::string(key) + "'");
    }
  }
  if (!(s.quantile > 0.0 && s.quantile <= 1.0)) throw Error("SLO quantile must be in (0, 1]");
  if (!(s.compliance > 0.0 && s.compliance <= 1.0)) throw Error("SLO compliance must be in (0, 1]");
  return s;
}

SloVerdict checkSlo(const CompiledQuery& query, const ModelSet& models, const SloSpec& slo) {
  if (models.intervalMs != slo.intervalMs)
    throw ModelError("models were trained with " + std::to_string(models.intervalMs) + " ms intervals, SLO asks for " +
                     std::to_string(slo.intervalMs));
  SloVerdict v;
  v.series = percentileDistribution(query, models, slo.quantile);
  v.intervals = static_cast<int64_t>(v.series.values.size());
  if (v.intervals == 0) throw ModelError("no interval has models for every operator");
  for (const auto& iq : v.series.values)
    if (iq.valueMs <= slo.thresholdMs) ++v.intervalsMeeting;
  v.pass = static_cast<double>(v.intervalsMeeting) >= slo.compliance * static_cast<double>(v.intervals) - kEps;
  v.marginMs = static_cast<double>(slo.thresholdMs - v.series.maxMs());
  return v;
}

// --- heatmap ---------------------------------------------------------------

std::string HeatmapAxis::label() const {
  if (kind == Kind::kStopCount) return "limit";
  std::string s = table + "(";
  for (std::size_t i = 0; i < attributes.size(); ++i) s += (i ? "," : "") + attributes[i];
  return s + ")";
}

HeatmapAxis HeatmapAxis::parse(std::string_view text) {
  HeatmapAxis a;
  auto eq = text.rfind('=');
  if (eq == std::string_view::npos) throw Error("grid axis '" + std::string(text) + "' is not name=range");
  auto name = trim(text.substr(0, eq));
  auto range = trim(text.substr(eq + 1));
  if (name == "limit" || name == "page" || name == "stop") {
    a.kind = Kind::kStopCount;
  } else {
    auto open = name.find('(');
    if (open == std::string_view::npos || name.back() != ')')
      throw Error("grid axis name must be 'limit' or Table(attr, ...), got '" + std::string(name) + "'");
    a.kind = Kind::kConstraint;
    a.table = std::string(trim(name.substr(0, open)));
    for (auto attr : split(name.substr(open + 1, name.size() - open - 2), ','))
      a.attributes.emplace_back(trim(attr));
  }
  // Comma-separated values and lo..hi[:step] ranges.
  for (auto item : split(range, ',')) {
    item = trim(item);
    auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      a.values.push_back(parseInt(item, "grid value"));
      continue;
    }
    auto rest = item.substr(dots + 2);
    int64_t step = 1;
    if (auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = parseInt(rest.substr(colon + 1), "grid step");
      rest = rest.substr(0, colon);
    }
    int64_t lo = parseInt(item.substr(0, dots), "grid start"), hi = parseInt(rest, "grid end");
    if (step <= 0 || lo > hi) throw Error("empty grid range '" + std::string(item) + "'");
    for (int64_t v = lo; v <= hi; v += step) a.values.push_back(v);
    if (a.values.back() != hi) a.values.push_back(hi);
  }
  std::sort(a.values.begin(), a.values.end());
  a.values.erase(std::unique(a.values.begin(), a.values.end()), a.values.end());
  for (auto v : a.values)
    if (v < 1) throw Error("grid values must be >= 1");
  return a;
}

std::string Heatmap::toCsv() const {
  std::ostringstream out;
  out << rows.label() << "\\" << cols.label();
  for (auto c : cols.values) out << "," << c;
  out << "\n";
  for (std::size_t i = 0; i < rows.values.size(); ++i) {
    out << rows.values[i];
    for (auto v : ms[i]) {
      out << ",";
      if (v >= 0) out << v;
    }
    out << "\n";
  }
  return out.str();
}

std::string Heatmap::toTable() const {
  std::ostringstream out;
  const int w = 7;
  auto pad = [&](const std::string& s) { return std::string(s.size() < w ? w - s.size() : 0, ' ') + s; };
  out << pad("") << " " << cols.label() << "\n" << pad(rows.label().substr(0, w));
  for (auto c : cols.values) out << pad(std::to_string(c));
  out << "\n";
  for (std::size_t i = 0; i < rows.values.size(); ++i) {
    out << pad(std::to_string(rows.values[i]));
    for (auto v : ms[i]) out << pad(v >= 0 ? std::to_string(v) : "-");
    out << "\n";
  }
  return out.str();
}

namespace {

void applyAxis(const HeatmapAxis& axis, int64_t value, QueryAst& ast, Schema& schema) {
  if (axis.kind == HeatmapAxis::Kind::kStopCount) {
    if (!ast.limit) throw Error("heatmap axis 'limit' needs a query with LIMIT or PAGINATE");
    ast.limit->count = value;
    return;
  }
  schema.removeConstraint(axis.table, axis.attributes);
  schema.addConstraint({axis.table, axis.attributes, value});
}

}  // namespace

Heatmap heatmap(const QueryAst& query, const Schema& schema, const HeatmapAxis& rows, const HeatmapAxis& cols,
                const ModelSet& models, double quantile) {
  Heatmap h{rows, cols, {}};
  for (auto r : rows.values) {
    std::vector<int64_t> line;
    for (auto c : cols.values) {
      QueryAst ast = query;
      Schema s = schema;
      applyAxis(rows, r, ast, s);
      applyAxis(cols, c, ast, s);
      auto series = percentileDistribution(compile(ast, s), models, quantile);
      line.push_back(series.values.empty() ? -1 : series.maxMs());
    }
    h.ms.push_back(std::move(line));
  }
  return h;
}

}  // namespace boundql
