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

#include "setchain/report.hpp"
#include "setchain/sim.hpp"

namespace setchain {
namespace {

RunOptions small_run(Algorithm alg, std::uint64_t seed = 42) {
  RunOptions o;
  o.config.n = 4;
  o.config.collector_limit = 20;
  o.config.sending_rate = 200;
  o.config.injection_duration_s = 3;
  o.config.seed = seed;
  o.algorithm = alg;
  o.keep_snapshots = true;
  return o;
}

Scenario scenario_of(const RunOptions& o) { return Scenario{o.config, o.algorithm, o.adversaries}; }

class SimTest : public ::testing::TestWithParam<Algorithm> {};

TEST_P(SimTest, RunsAreByteIdenticalForTheSameSeed) {
  const RunOptions o = small_run(GetParam());
  const RunResult a = run(o);
  const RunResult b = run(o);
  EXPECT_EQ(elements_csv(a.trace), elements_csv(b.trace));
  EXPECT_EQ(throughput_csv(a.report.throughput), throughput_csv(b.report.throughput));
  EXPECT_EQ(summary_csv(scenario_of(o), a), summary_csv(scenario_of(o), b));
  ASSERT_EQ(a.snapshots.size(), 4u);
  for (const auto& [id, snap] : a.snapshots) EXPECT_EQ(snapshot_dump(id, snap), snapshot_dump(id, b.snapshots.at(id)));
  const RunResult c = run(small_run(GetParam(), 43));
  EXPECT_NE(elements_csv(a.trace), elements_csv(c.trace));
}

TEST_P(SimTest, CleanRunDrainsAndSatisfiesEveryProperty) {
  const RunResult r = run(small_run(GetParam()));
  EXPECT_FALSE(r.report.saturated);
  EXPECT_TRUE(r.properties.ok()) << r.properties.summary();
  EXPECT_TRUE(r.ledger_audit.ok());
  EXPECT_EQ(r.trace.size(), 600u);
  for (const ElementTrace& t : r.trace) EXPECT_TRUE(t.t_commit) << t.id;
  EXPECT_DOUBLE_EQ(r.report.eff_50, 1.0);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(verify_certificate(*r.certificate, 1, r.registry));
}

TEST_P(SimTest, ConservationAndTimestampOrder) {
  const RunResult r = run(small_run(GetParam()));
  std::uint64_t committed = 0, uncommitted = 0, rejected = 0;
  const VirtualTime interval = r.report.throughput.commits.empty() ? VirtualTime{} : std::chrono::milliseconds(1250);
  for (const ElementTrace& t : r.trace) {
    if (t.add_status != AddStatus::kAccepted) {
      ++rejected;
    } else if (t.t_commit) {
      ++committed;
    } else {
      ++uncommitted;
    }
    VirtualTime last = t.t_add;
    for (Stage s : {Stage::kMempool1, Stage::kMempoolQuorum, Stage::kMempoolAll, Stage::kLedger, Stage::kCommit}) {
      if (const auto at = stage_time(t, s)) {
        EXPECT_GE(*at, last) << t.id << " " << to_string(s);
        last = *at;
      }
    }
    if (t.t_commit) {
      ASSERT_TRUE(t.t_ledger);
      EXPECT_GT(*t.t_commit, *t.t_ledger);
      // Commits and ledger inclusion happen on block deliveries.
      EXPECT_EQ(t.t_commit->count() % interval.count(), 0) << t.id;
      EXPECT_EQ(t.t_ledger->count() % interval.count(), 0) << t.id;
      EXPECT_GE(t.epoch, 1u);
    }
  }
  EXPECT_EQ(committed + uncommitted + rejected, r.report.counters.generated);
  EXPECT_EQ(committed, r.report.counters.committed);
}

TEST_P(SimTest, StageOneLatencyReflectsCollectorWait) {
  const RunResult r = run(small_run(GetParam()));
  const auto p50 = percentile(latency_cdf(r.trace, Stage::kMempool1), 50);
  ASSERT_TRUE(p50);
  if (GetParam() == Algorithm::kVanilla) {
    EXPECT_LT(*p50, 0.050);
  } else {
    EXPECT_GT(*p50, 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(AllAlgorithms, SimTest,
                         ::testing::Values(Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain),
                         [](const auto& info) { return to_string(info.param); });

TEST(Sim, AdversariesAreAssignedAndCounted) {
  RunOptions o = small_run(Algorithm::kHashchain);
  o.adversaries = parse_adversary_mix("WrongBatchServer:1");
  const RunResult r = run(o);
  ASSERT_EQ(r.servers.size(), 4u);
  EXPECT_FALSE(r.servers[3].correct);
  EXPECT_EQ(r.servers[3].kind, "WrongBatchServer");
  EXPECT_TRUE(r.properties.ok()) << r.properties.summary();
  EXPECT_GT(r.report.counters.bad_batch_response, 0u);
  EXPECT_EQ(r.report.counters.bad_batch_response, r.report.counters.batch_responses_served_by_faulty);
  EXPECT_EQ(r.snapshots.size(), 3u);
}

TEST(Sim, ConfigErrorsAreThrown) {
  RunOptions o = small_run(Algorithm::kVanilla);
  o.config.f = 2;
  EXPECT_THROW(run(o), ConfigError);
  o = small_run(Algorithm::kVanilla);
  o.config.n = 0;
  EXPECT_THROW(run(o), ConfigError);
  o = small_run(Algorithm::kVanilla);
  o.config.collector_limit = 4;
  EXPECT_THROW(run(o), ConfigError);
  o = small_run(Algorithm::kVanilla);
  o.adversaries = parse_adversary_mix("Silent:2");
  EXPECT_THROW(run(o), ConfigError);
}

TEST(Sim, SettleWindowFollowsTimeouts) {
  SystemConfig cfg;
  EXPECT_EQ(settle_window(cfg), 3 * (cfg.block_interval() + cfg.collector_timeout()) + 2 * cfg.request_timeout() +
                                    4 * cfg.network_delay());
}

}  // namespace
}  // namespace setchain
