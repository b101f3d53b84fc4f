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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "setchain/server.hpp"
#include "setchain/types.hpp"

namespace setchain {

/// Life of one generated element. Unset stages never happened.
struct ElementTrace {
  std::uint64_t id = 0;
  ProcessId client;
  ProcessId server;
  std::size_t size = 0;
  VirtualTime t_add{};
  std::optional<VirtualTime> t_mempool_1;
  std::optional<VirtualTime> t_mempool_quorum;
  std::optional<VirtualTime> t_mempool_all;
  std::optional<VirtualTime> t_ledger;
  std::optional<VirtualTime> t_commit;
  std::uint64_t epoch = 0;
  AddStatus add_status = AddStatus::kIgnored;
  bool submitted = false;
  bool accepted_by_correct = false;
};

enum class Stage { kMempool1 = 1, kMempoolQuorum = 2, kMempoolAll = 3, kLedger = 4, kCommit = 5 };

std::string to_string(Stage s);
std::optional<VirtualTime> stage_time(const ElementTrace& t, Stage s);

/// Committed by `t` over added by injection end; 1.0 when nothing was added.
double efficiency(const std::vector<ElementTrace>& trace, double t_seconds);

struct ThroughputSeries {
  /// commits[s] counts commits in [s, s+1).
  std::vector<std::uint64_t> commits;
  /// rolling9[s] = mean of commits[s-8..s], missing bins counted as zero.
  std::vector<double> rolling9;
};

/// Bins cover seconds 0..horizon_s-1 (at least up to the last commit).
ThroughputSeries throughput_series(const std::vector<ElementTrace>& trace, std::uint64_t horizon_s = 0);

/// Sorted latencies (seconds) of every element with the stage defined.
std::vector<double> latency_cdf(const std::vector<ElementTrace>& trace, Stage s);

/// Nearest-rank percentile of a sorted sample; nullopt when empty.
std::optional<double> percentile(const std::vector<double>& sorted, double p);

struct StageLatency {
  Stage stage = Stage::kMempool1;
  std::uint64_t count = 0;
  std::optional<double> p50, p90, p99, max;
};

struct CommitMarks {
  std::optional<double> first;
  /// Time by which 10, 20, 30, 40, 50 % of added elements were committed.
  std::vector<std::optional<double>> fractions;
};

CommitMarks commit_marks(const std::vector<ElementTrace>& trace);

struct RunCounters {
  std::uint64_t generated = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t committed = 0;
  std::uint64_t mempool_reject = 0;
  std::uint64_t garbage_tx = 0;
  std::uint64_t bad_batch_response = 0;
  std::uint64_t batch_responses_served_by_faulty = 0;
  std::uint64_t blocks = 0;
  std::uint64_t epochs = 0;
  std::uint64_t ledger_bytes = 0;
  std::uint64_t signature_verifications = 0;
};

struct MetricsReport {
  double eff_50 = 0;
  double eff_75 = 0;
  double eff_100 = 0;
  std::vector<StageLatency> latency;
  CommitMarks marks;
  RunCounters counters;
  ThroughputSeries throughput;
  bool saturated = false;
  double end_time_s = 0;
  double drained_at_s = -1;
  int brotli_quality = 0;
};

MetricsReport build_report(const std::vector<ElementTrace>& trace, double end_time_s);

}  // namespace setchain
