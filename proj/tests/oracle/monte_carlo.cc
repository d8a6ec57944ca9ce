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
#include "monte_carlo.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace oracle {

BinSampler::BinSampler(const boundql::LatencyDistribution& d) {
  double c = 0.0;
  const auto& m = d.masses();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] <= 0.0) continue;
    c += m[i];
    bins_.push_back(d.firstBin() + static_cast<int64_t>(i));
    cumulative_.push_back(c);
  }
}

int64_t BinSampler::draw(std::mt19937_64& rng) const {
  double u = std::uniform_real_distribution<double>(0.0, cumulative_.back())(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return bins_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::map<int64_t, double> monteCarloCompose(const std::vector<boundql::LatencyDistribution>& inputs, Combine how,
                                            int64_t draws, uint64_t seed) {
  std::vector<BinSampler> samplers;
  for (const auto& d : inputs) samplers.emplace_back(d);
  std::mt19937_64 rng(seed);
  std::map<int64_t, int64_t> counts;
  for (int64_t i = 0; i < draws; ++i) {
    int64_t acc = 0;
    for (const auto& s : samplers) {
      int64_t x = s.draw(rng);
      acc = how == Combine::kSum ? acc + x : std::max(acc, x);
    }
    ++counts[acc];
  }
  std::map<int64_t, double> out;
  for (const auto& [bin, n] : counts) out[bin] = static_cast<double>(n) / static_cast<double>(draws);
  return out;
}

double totalVariation(const std::map<int64_t, double>& empirical, const boundql::LatencyDistribution& d) {
  std::set<int64_t> bins;
  for (const auto& [b, m] : empirical) bins.insert(b);
  for (int64_t b = d.firstBin(); b <= d.lastBin(); ++b) bins.insert(b);
  double tv = 0.0;
  for (int64_t b : bins) {
    auto it = empirical.find(b);
    double e = it == empirical.end() ? 0.0 : it->second;
    tv += std::abs(e - d.mass(b));
  }
  return tv / 2.0;
}

}  // namespace oracle
