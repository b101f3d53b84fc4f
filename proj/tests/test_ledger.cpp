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

#include <algorithm>
#include <numeric>
#include <random>

#include "setchain/ledger.hpp"
#include "setchain/scheduler.hpp"

namespace setchain {
namespace {

using namespace std::chrono_literals;

Bytes tx_of(std::uint64_t tag, std::size_t size) {
  Bytes b(size, 0x5a);
  for (int i = 0; i < 8 && i < static_cast<int>(size); ++i) b[i] = static_cast<std::uint8_t>(tag >> (8 * i));
  return b;
}

LedgerConfig config(std::uint64_t nodes = 10) {
  LedgerConfig c;
  c.nodes = nodes;
  return c;
}

// Greedy FIFO packing written directly from the capacity rule.
std::size_t greedy_count(const std::vector<std::size_t>& sizes, std::uint64_t capacity) {
  std::uint64_t used = 0;
  std::size_t n = 0;
  for (std::size_t s : sizes) {
    if (used + s > capacity) break;
    used += s;
    ++n;
  }
  return n;
}

TEST(Ledger, ThreeSmallTxsFitOneBlock) {
  Scheduler s;
  Ledger l(s, config());
  for (int i = 0; i < 3; ++i) ASSERT_EQ(l.append(ProcessId{1}, tx_of(i, 438)), AppendStatus::kAccepted);
  const BlockPtr b = l.produce_block();
  ASSERT_TRUE(b);
  EXPECT_EQ(b->txs.size(), 3u);
  EXPECT_EQ(b->height, 1u);
  EXPECT_EQ(b->proposer, ProcessId{1});
  EXPECT_EQ(l.pool_size(), 0u);
}

TEST(Ledger, GreedyPackingAtCapacity) {
  Scheduler s;
  Ledger l(s, config());
  std::vector<std::size_t> sizes;
  for (int i = 0; i < 2000; ++i) {
    l.append(ProcessId{static_cast<std::uint64_t>(i % 10)}, tx_of(i, 438));
    sizes.push_back(438);
  }
  const BlockPtr b = l.produce_block();
  ASSERT_TRUE(b);
  EXPECT_EQ(b->txs.size(), 524288u / 438u);
  EXPECT_EQ(b->txs.size(), greedy_count(sizes, 524288));
  EXPECT_LE(b->byte_size(), 524288u);
  EXPECT_EQ(l.pool_size(), 2000u - b->txs.size());
  // Same submit time everywhere, so the order is submitter id, then arrival.
  std::vector<std::uint64_t> order(2000);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return a % 10 < b % 10; });
  for (std::size_t i = 0; i < b->txs.size(); ++i) ASSERT_EQ(b->txs[i].sequence, order[i]) << i;
}

TEST(Ledger, RandomSizesMatchGreedyOracle) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 20; ++round) {
    Scheduler s;
    LedgerConfig c = config();
    c.block_capacity = 20000;
    Ledger l(s, c);
    std::vector<std::size_t> sizes;
    for (int i = 0; i < 200; ++i) {
      const std::size_t size = 16 + rng() % 900;
      sizes.push_back(size);
      l.append(ProcessId{0}, tx_of(round * 1000 + i, size));
    }
    const BlockPtr b = l.produce_block();
    ASSERT_TRUE(b);
    EXPECT_EQ(b->txs.size(), greedy_count(sizes, c.block_capacity));
  }
}

TEST(Ledger, NoBlockWhenMempoolsAreEmpty) {
  Scheduler s;
  Ledger l(s, config());
  EXPECT_EQ(l.produce_block(), nullptr);
  EXPECT_EQ(l.height(), 0u);
  LedgerConfig c = config();
  c.produce_empty_blocks = true;
  Ledger e(s, c);
  const BlockPtr b = e.produce_block();
  ASSERT_TRUE(b);
  EXPECT_TRUE(b->txs.empty());
}

TEST(Ledger, GossipReachesEveryMempoolAfterDelay) {
  Scheduler s;
  LedgerConfig c = config();
  c.network_delay = 30ms;
  Ledger l(s, c);
  const Bytes tx = tx_of(1, 100);
  l.append(ProcessId{0}, tx);
  EXPECT_TRUE(l.in_mempool(ProcessId{0}, tx));
  for (std::uint64_t i = 1; i < 10; ++i) EXPECT_FALSE(l.in_mempool(ProcessId{i}, tx));
  s.run_until(29ms);
  EXPECT_FALSE(l.in_mempool(ProcessId{5}, tx));
  s.run_until(30ms);
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_TRUE(l.in_mempool(ProcessId{i}, tx));
}

TEST(Ledger, ProposerOnlyPacksVisibleTxs) {
  Scheduler s;
  LedgerConfig c = config(2);
  c.network_delay = 100ms;
  Ledger l(s, c);
  // Height 1 is proposed by node 1; node 0's fresh tx is not visible there.
  l.append(ProcessId{0}, tx_of(1, 50));
  EXPECT_EQ(l.produce_block(), nullptr);
  s.run_until(100ms);
  const BlockPtr b = l.produce_block();
  ASSERT_TRUE(b);
  EXPECT_EQ(b->txs.size(), 1u);
}

TEST(Ledger, DuplicateAndOversizeAppends) {
  Scheduler s;
  LedgerConfig c = config();
  c.block_capacity = 1000;
  Ledger l(s, c);
  EXPECT_EQ(l.append(ProcessId{0}, tx_of(1, 10)), AppendStatus::kAccepted);
  EXPECT_EQ(l.append(ProcessId{3}, tx_of(1, 10)), AppendStatus::kDuplicate);
  EXPECT_EQ(l.pool_size(), 1u);
  EXPECT_EQ(l.append(ProcessId{0}, tx_of(2, 1001)), AppendStatus::kTooLarge);
  EXPECT_EQ(l.append(ProcessId{0}, Bytes{}), AppendStatus::kEmpty);
}

TEST(Ledger, MempoolLimitsRejectAndCount) {
  Scheduler s;
  LedgerConfig c = config();
  c.mempool_max_txs = 2;
  Ledger l(s, c);
  l.append(ProcessId{0}, tx_of(1, 10));
  l.append(ProcessId{0}, tx_of(2, 10));
  EXPECT_EQ(l.append(ProcessId{0}, tx_of(3, 10)), AppendStatus::kMempoolFull);
  EXPECT_EQ(l.counters().mempool_reject, 1u);
  EXPECT_EQ(to_string(AppendStatus::kMempoolFull), "mempool_reject");
}

TEST(Ledger, SubscribersSeeIdenticalOrderedSequences) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Scheduler s;
    LedgerConfig c = config(4);
    c.block_capacity = 4000;
    c.network_delay = std::chrono::microseconds(static_cast<std::int64_t>(rng() % 50000));
    Ledger l(s, c);
    std::vector<std::vector<std::pair<std::uint64_t, std::vector<Bytes>>>> seen(3);
    for (int k = 0; k < 3; ++k) {
      l.subscribe(ProcessId{static_cast<std::uint64_t>(k)}, [&seen, k](const Block& b) {
        std::vector<Bytes> txs;
        for (const auto& tx : b.txs) txs.push_back(*tx.bytes);
        seen[k].emplace_back(b.height, txs);
      });
    }
    l.start();
    for (int i = 0; i < 300; ++i) {
      s.at(std::chrono::milliseconds(rng() % 10000), [&l, i, seed, size = 20 + rng() % 400] {
        l.append(ProcessId{static_cast<std::uint64_t>(i % 4)}, tx_of(seed * 10000 + i, size));
      });
    }
    s.run_until(std::chrono::seconds(30));
    ASSERT_FALSE(seen[0].empty());
    EXPECT_EQ(seen[0], seen[1]);
    EXPECT_EQ(seen[0], seen[2]);
    for (std::size_t i = 0; i < seen[0].size(); ++i) EXPECT_EQ(seen[0][i].first, i + 1);
    const LedgerAudit a = l.audit(std::chrono::seconds(30));
    EXPECT_TRUE(a.ok()) << a.violations.front();
    EXPECT_EQ(a.included_once, 300u);
  }
}

TEST(Ledger, InjectedBytesGoFirstInTheInjectorsBlock) {
  Scheduler s;
  Ledger l(s, config(3));
  std::vector<Bytes> delivered;
  l.subscribe(ProcessId{0}, [&](const Block& b) {
    for (const auto& tx : b.txs) delivered.push_back(*tx.bytes);
  });
  l.append(ProcessId{0}, tx_of(1, 10));
  const Bytes garbage(100, 0xee);
  l.inject_proposer_tx(ProcessId{2}, garbage);
  // Height 1 belongs to node 1: the injection waits for node 2's turn.
  auto b1 = l.produce_block();
  ASSERT_TRUE(b1);
  EXPECT_EQ(b1->txs.size(), 1u);
  l.append(ProcessId{0}, tx_of(2, 10));
  auto b2 = l.produce_block();
  ASSERT_TRUE(b2);
  ASSERT_EQ(b2->txs.size(), 2u);
  EXPECT_EQ(*b2->txs[0].bytes, garbage);
  EXPECT_TRUE(b2->txs[0].injected);
  s.run_until(1ms);
  EXPECT_EQ(delivered.size(), 3u);
  EXPECT_TRUE(l.audit(VirtualTime::zero()).ok());
}

TEST(Ledger, AuditFlagsMissingTx) {
  Scheduler s;
  LedgerConfig c = config(2);
  c.network_delay = 10ms;
  Ledger l(s, c);
  l.append(ProcessId{0}, tx_of(1, 10));
  const LedgerAudit strict = l.audit(VirtualTime{1});
  EXPECT_FALSE(strict.ok());
  const LedgerAudit lenient = l.audit(VirtualTime::zero());
  EXPECT_TRUE(lenient.ok());
  EXPECT_EQ(lenient.pending_excused, 1u);
}

TEST(Ledger, TickProducesAtTheBlockInterval) {
  Scheduler s;
  Ledger l(s, config(2));
  std::vector<VirtualTime> times;
  l.subscribe(ProcessId{0}, [&](const Block& b) { times.push_back(b.produced_at); });
  l.start();
  for (int i = 0; i < 5; ++i) s.at(std::chrono::milliseconds(1000 * i), [&l, i] { l.append(ProcessId{1 - static_cast<std::uint64_t>(i % 2)}, tx_of(i, 8)); });
  s.run_until(std::chrono::seconds(8));
  ASSERT_FALSE(times.empty());
  for (VirtualTime t : times) EXPECT_EQ(t.count() % 1'250'000, 0);
}

}  // namespace
}  // namespace setchain
