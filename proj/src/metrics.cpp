// Copyright 2026 The Setchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setchain/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace setchain {

std::string to_string(Stage s) {
  switch (s) {
    case Stage::kMempool1: return "mempool_1";
    case Stage::kMempoolQuorum: return "mempool_quorum";
    case Stage::kMempoolAll: return "mempool_all";
    case Stage::kLedger: return "ledger";
    case Stage::kCommit: return "commit";
  }
  return "unknown";
}

std::optional<VirtualTime> stage_time(const ElementTrace& t, Stage s) {
  switch (s) {
    case Stage::kMempool1: return t.t_mempool_1;
    case Stage::kMempoolQuorum: return t.t_mempool_quorum;
    case Stage::kMempoolAll: return t.t_mempool_all;
    case Stage::kLedger: return t.t_ledger;
    case Stage::kCommit: return t.t_commit;
  }
  return std::nullopt;
}

double efficiency(const std::vector<ElementTrace>& trace, double t_seconds) {
  if (trace.empty()) return 1.0;
  const VirtualTime limit = from_millis(t_seconds * 1000.0);
  std::uint64_t committed = 0;
  for (const ElementTrace& e : trace) {
    if (e.t_commit && *e.t_commit <= limit) ++committed;
  }
  return static_cast<double>(committed) / static_cast<double>(trace.size());
}

ThroughputSeries throughput_series(const std::vector<ElementTrace>& trace, std::uint64_t horizon_s) {
  ThroughputSeries s;
  std::uint64_t bins = horizon_s;
  for (const ElementTrace& e : trace) {
    if (e.t_commit) bins = std::max<std::uint64_t>(bins, static_cast<std::uint64_t>(e.t_commit->count() / 1'000'000) + 1);
  }
  s.commits.assign(bins, 0);
  for (const ElementTrace& e : trace) {
    if (e.t_commit) ++s.commits[static_cast<std::size_t>(e.t_commit->count() / 1'000'000)];
  }
  s.rolling9.resize(bins);
  std::uint64_t window = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    window += s.commits[i];
    if (i >= 9) window -= s.commits[i - 9];
    s.rolling9[i] = static_cast<double>(window) / 9.0;
  }
  return s;
}

std::vector<double> latency_cdf(const std::vector<ElementTrace>& trace, Stage s) {
  std::vector<double> out;
  for (const ElementTrace& e : trace) {
    if (auto t = stage_time(e, s)) out.push_back(to_seconds(*t - e.t_add));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nullopt;
  const double rank = std::ceil(p / 100.0 * static_cast<double>(sorted.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size()))) - 1;
  return sorted[idx];
}

CommitMarks commit_marks(const std::vector<ElementTrace>& trace) {
  std::vector<double> times;
  for (const ElementTrace& e : trace) {
    if (e.t_commit) times.push_back(to_seconds(*e.t_commit));
  }
  std::sort(times.begin(), times.end());
  CommitMarks m;
  if (!times.empty()) m.first = times.front();
  for (int pct = 10; pct <= 50; pct += 10) {
    const auto need = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(trace.size())));
    if (need >= 1 && need <= times.size()) {
      m.fractions.push_back(times[need - 1]);
    } else {
      m.fractions.push_back(std::nullopt);
    }
  }
  return m;
}

MetricsReport build_report(const std::vector<ElementTrace>& trace, double end_time_s) {
  MetricsReport r;
  r.eff_50 = efficiency(trace, 50.0);
  r.eff_75 = efficiency(trace, 75.0);
  r.eff_100 = efficiency(trace, 100.0);
  for (Stage s : {Stage::kMempool1, Stage::kMempoolQuorum, Stage::kMempoolAll, Stage::kLedger, Stage::kCommit}) {
    const auto cdf = latency_cdf(trace, s);
    r.latency.push_back(
        StageLatency{s, cdf.size(), percentile(cdf, 50), percentile(cdf, 90), percentile(cdf, 99), percentile(cdf, 100)});
  }
  r.marks = commit_marks(trace);
  r.throughput = throughput_series(trace, static_cast<std::uint64_t>(std::ceil(end_time_s)));
  r.end_time_s = end_time_s;
  r.counters.generated = trace.size();
  for (const ElementTrace& e : trace) {
    if (e.add_status == AddStatus::kAccepted) {
      ++r.counters.accepted;
    } else {
      ++r.counters.rejected;
    }
    if (e.t_commit) ++r.counters.committed;
  }
  return r;
}

}  // namespace setchain
