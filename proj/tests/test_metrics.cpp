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

#include <gtest/gtest.h>

#include <random>

#include "setchain/metrics.hpp"

namespace setchain {
namespace {

ElementTrace committed_at(double seconds) {
  ElementTrace t;
  t.t_add = VirtualTime{0};
  t.add_status = AddStatus::kAccepted;
  t.t_commit = from_millis(seconds * 1000.0);
  return t;
}

TEST(Efficiency, RatioDefinition) {
  std::vector<ElementTrace> trace(4);
  EXPECT_EQ(efficiency(trace, 10), 0.0);
  trace[0] = committed_at(1);
  trace[1] = committed_at(2);
  EXPECT_EQ(efficiency(trace, 5), 0.5);
  EXPECT_EQ(efficiency(trace, 1.5), 0.25);
  trace[2] = committed_at(3);
  trace[3] = committed_at(4);
  EXPECT_EQ(efficiency(trace, 4), 1.0);
  EXPECT_EQ(efficiency({}, 1), 1.0);
}

TEST(Efficiency, BoundedAndNonDecreasing) {
  std::mt19937_64 rng(1);
  std::vector<ElementTrace> trace(500);
  for (auto& t : trace) {
    if (rng() % 3 != 0) t = committed_at(static_cast<double>(rng() % 100000) / 1000.0);
  }
  double last = 0;
  for (double s = 0; s <= 120; s += 0.5) {
    const double e = efficiency(trace, s);
    EXPECT_GE(e, last);
    EXPECT_LE(e, 1.0);
    last = e;
  }
}

TEST(Throughput, ConstantRateIsFlatAfterWarmup) {
  std::vector<ElementTrace> trace;
  for (int s = 0; s < 30; ++s) {
    for (int k = 0; k < 100; ++k) trace.push_back(committed_at(s + k / 100.0));
  }
  const ThroughputSeries ts = throughput_series(trace);
  ASSERT_EQ(ts.commits.size(), 30u);
  for (std::size_t s = 0; s < 30; ++s) {
    EXPECT_EQ(ts.commits[s], 100u);
    if (s >= 8) {
      EXPECT_DOUBLE_EQ(ts.rolling9[s], 100.0);
    } else {
      EXPECT_NEAR(ts.rolling9[s], 100.0 * static_cast<double>(s + 1) / 9.0, 1e-9);
    }
  }
}

TEST(Throughput, BurstSpreadsOverNineSeconds) {
  std::vector<ElementTrace> trace;
  for (int k = 0; k < 900; ++k) trace.push_back(committed_at(10.25));
  const ThroughputSeries ts = throughput_series(trace, 25);
  ASSERT_EQ(ts.rolling9.size(), 25u);
  for (std::size_t s = 0; s < 25; ++s) {
    EXPECT_DOUBLE_EQ(ts.rolling9[s], s >= 10 && s <= 18 ? 100.0 : 0.0) << s;
  }
}

TEST(Throughput, EmptyTraceIsAllZero) {
  const ThroughputSeries ts = throughput_series({}, 12);
  ASSERT_EQ(ts.commits.size(), 12u);
  for (std::size_t s = 0; s < 12; ++s) {
    EXPECT_EQ(ts.commits[s], 0u);
    EXPECT_EQ(ts.rolling9[s], 0.0);
  }
  std::vector<ElementTrace> uncommitted(5);
  EXPECT_TRUE(throughput_series(uncommitted).commits.empty());
}

TEST(Percentile, NearestRank) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(percentile(v, 50), 5.0);
  EXPECT_EQ(percentile(v, 90), 9.0);
  EXPECT_EQ(percentile(v, 99), 10.0);
  EXPECT_EQ(percentile(v, 100), 10.0);
  EXPECT_EQ(percentile(v, 0), 1.0);
  EXPECT_EQ(percentile({7.5}, 50), 7.5);
  EXPECT_FALSE(percentile({}, 50));
}

TEST(Latency, StageTimesAndCdf) {
  ElementTrace t;
  t.t_add = std::chrono::seconds(1);
  t.t_mempool_1 = std::chrono::milliseconds(1100);
  t.t_mempool_quorum = std::chrono::milliseconds(1200);
  t.t_mempool_all = std::chrono::milliseconds(1300);
  t.t_ledger = std::chrono::milliseconds(2250);
  t.t_commit = std::chrono::milliseconds(4750);
  EXPECT_EQ(stage_time(t, Stage::kMempool1), t.t_mempool_1);
  EXPECT_EQ(stage_time(t, Stage::kCommit), t.t_commit);
  const auto cdf = latency_cdf({t, ElementTrace{}}, Stage::kLedger);
  ASSERT_EQ(cdf.size(), 1u);
  EXPECT_NEAR(cdf[0], 1.25, 1e-12);
  EXPECT_EQ(to_string(Stage::kMempoolQuorum), "mempool_quorum");
}

TEST(Latency, LaterStagesDominateEarlierOnesPerElement) {
  std::mt19937_64 rng(5);
  std::vector<ElementTrace> trace(300);
  for (auto& t : trace) {
    std::int64_t at = static_cast<std::int64_t>(rng() % 1'000'000);
    t.t_add = VirtualTime{at};
    auto step = [&] { return VirtualTime{at += static_cast<std::int64_t>(rng() % 300'000)}; };
    t.t_mempool_1 = step();
    t.t_mempool_quorum = step();
    t.t_mempool_all = step();
    t.t_ledger = step();
    t.t_commit = step();
  }
  std::vector<std::vector<double>> cdfs;
  for (Stage s : {Stage::kMempool1, Stage::kMempoolQuorum, Stage::kMempoolAll, Stage::kLedger, Stage::kCommit}) {
    cdfs.push_back(latency_cdf(trace, s));
  }
  // Pointwise dominance implies dominance of the sorted samples.
  for (std::size_t k = 1; k < cdfs.size(); ++k) {
    for (std::size_t i = 0; i < cdfs[k].size(); ++i) EXPECT_GE(cdfs[k][i], cdfs[k - 1][i]);
  }
}

TEST(CommitMarks, FirstAndFractions) {
  std::vector<ElementTrace> trace(10);
  for (int i = 0; i < 4; ++i) trace[i] = committed_at(10 - i);
  const CommitMarks m = commit_marks(trace);
  ASSERT_TRUE(m.first);
  EXPECT_DOUBLE_EQ(*m.first, 7.0);
  ASSERT_EQ(m.fractions.size(), 5u);
  EXPECT_DOUBLE_EQ(*m.fractions[0], 7.0);
  EXPECT_DOUBLE_EQ(*m.fractions[1], 8.0);
  EXPECT_DOUBLE_EQ(*m.fractions[3], 10.0);
  EXPECT_FALSE(m.fractions[4]);
}

TEST(Report, CountersAndConservation) {
  std::vector<ElementTrace> trace(6);
  trace[0] = committed_at(1);
  trace[1] = committed_at(60);
  trace[2].add_status = AddStatus::kAccepted;
  trace[3].add_status = AddStatus::kInvalid;
  const MetricsReport r = build_report(trace, 80);
  EXPECT_EQ(r.counters.generated, 6u);
  EXPECT_EQ(r.counters.accepted, 3u);
  EXPECT_EQ(r.counters.committed, 2u);
  EXPECT_EQ(r.counters.accepted + r.counters.rejected, r.counters.generated);
  EXPECT_DOUBLE_EQ(r.eff_50, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(r.eff_75, 2.0 / 6.0);
  EXPECT_EQ(r.throughput.commits.size(), 80u);
  ASSERT_EQ(r.latency.size(), 5u);
  EXPECT_EQ(r.latency[4].count, 2u);
}

}  // namespace
}  // namespace setchain
