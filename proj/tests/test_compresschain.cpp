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
#include <set>

#include "harness.hpp"
#include "setchain/compresschain.hpp"

namespace setchain {
namespace {

using testing::Harness;
using namespace std::chrono_literals;

Block make_block(std::uint64_t height, const std::vector<Bytes>& txs) {
  Block b;
  b.height = height;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    b.txs.push_back(LedgerTx{std::make_shared<const Bytes>(txs[i]), ProcessId{0}, {}, i, false});
  }
  return b;
}

Bytes compressed(const std::vector<BatchItem>& items) {
  Batch b;
  for (const BatchItem& it : items) b.add(it);
  return encode_compressed_tx(*make_codec("brotli"), b.serialize());
}

std::uint32_t be32(const Bytes& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) | b[at + 3];
}

// Replays delivered blocks with a hand-rolled batch parser: one epoch per
// decodable non-empty tx, holding the valid elements not yet in history.
std::vector<std::set<Bytes>> replay(const Ledger& ledger, const crypto::KeyRegistry& reg) {
  std::vector<std::set<Bytes>> history;
  std::set<Bytes> placed;
  for (const BlockPtr& block : ledger.blocks()) {
    for (const LedgerTx& tx : block->txs) {
      const auto raw = decode_compressed_tx(*tx.bytes);
      if (!raw || raw->size() < 4) continue;
      const std::uint32_t count = be32(*raw, 0);
      std::size_t at = 4;
      std::vector<Bytes> items;
      bool ok = count > 0;
      for (std::uint32_t i = 0; ok && i < count; ++i) {
        if (at + 4 > raw->size()) { ok = false; break; }
        const std::uint32_t len = be32(*raw, at);
        at += 4;
        if (at + len > raw->size()) { ok = false; break; }
        items.emplace_back(raw->begin() + at, raw->begin() + at + len);
        at += len;
      }
      if (!ok || at != raw->size()) continue;
      std::set<Bytes> g;
      for (const Bytes& item : items) {
        if (item.empty() || item[0] != kElementTag) continue;
        const auto e = decode_element(item);
        if (e && valid_element(*e, reg) && !placed.contains(item)) g.insert(item);
      }
      placed.insert(g.begin(), g.end());
      history.push_back(std::move(g));
    }
  }
  return history;
}

std::set<Bytes> as_bytes(const Epoch& g) {
  std::set<Bytes> out;
  for (const Element& e : g) out.insert(e.canonical_bytes());
  return out;
}

TEST(Compresschain, FreshServerIsEmpty) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  const SetchainSnapshot s = h.server(0).get();
  EXPECT_TRUE(s.the_set.empty() && s.history.empty() && s.proofs.empty());
  EXPECT_EQ(s.epoch, 0u);
}

TEST(Compresschain, AddGoesToSetAndPendingBatch) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  auto& s = h.as<CompresschainServer>(0);
  const Element e = h.element(0, "fresh");
  EXPECT_EQ(s.add(e).status, AddStatus::kAccepted);
  EXPECT_TRUE(s.get().the_set.contains(e));
  EXPECT_EQ(s.collector().pending().size(), 1u);
  EXPECT_EQ(s.add(e).status, AddStatus::kDuplicate);
  EXPECT_EQ(s.collector().pending().size(), 1u);
  EXPECT_EQ(s.add(Element::make(e.creator(), e.payload(), Signature{})).status, AddStatus::kInvalid);
  EXPECT_EQ(s.collector().pending().size(), 1u);
  EXPECT_EQ(h.ledger().pool_size(), 0u);
}

TEST(Compresschain, AddToBatchHasSetSemanticsAndTakesProofs) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  auto& s = h.as<CompresschainServer>(0);
  EXPECT_TRUE(s.add_to_batch(h.element(0, "a")));
  EXPECT_TRUE(s.add_to_batch(h.element(1, "b")));
  const EpochProof p = make_epoch_proof(1, {}, ProcessId{0}, h.key(ProcessId{0}));
  EXPECT_TRUE(s.add_to_batch(p));
  EXPECT_FALSE(s.add_to_batch(p));
  EXPECT_FALSE(s.add_to_batch(h.element(0, "a")));
  EXPECT_EQ(s.collector().pending().size(), 3u);
}

TEST(Compresschain, CollectorLimitFlushesOnTheSameStep) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  auto& s = h.as<CompresschainServer>(0);
  const std::uint64_t c = h.config().collector_limit;
  for (std::uint64_t i = 0; i + 1 < c; ++i) s.add(h.element(i, "lim" + std::to_string(i)));
  EXPECT_EQ(s.collector().flushes(), 0u);
  s.add(h.element(99, "last"));
  EXPECT_EQ(s.collector().flushes(), 1u);
  EXPECT_TRUE(s.collector().pending().empty());
  EXPECT_EQ(h.ledger().pool_size(), 1u);
}

TEST(Compresschain, TimeoutFlushesSingleElementAndNeverAnEmptyBatch) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  auto& s = h.as<CompresschainServer>(0);
  const Element e = h.element(0, "lonely");
  s.add(e);
  h.run_for(h.config().collector_timeout() - 1us);
  EXPECT_EQ(s.collector().flushes(), 0u);
  h.run_for(1us);
  EXPECT_EQ(s.collector().flushes(), 1u);
  EXPECT_EQ(s.collector().last_flush(), h.config().collector_timeout());
  h.run_for(5s);
  EXPECT_EQ(s.collector().flushes(), 1u);

  const BlockPtr b = h.ledger().produce_block();
  ASSERT_TRUE(b);
  ASSERT_EQ(b->txs.size(), 1u);
  const Bytes& tx = *b->txs[0].bytes;
  EXPECT_EQ(tx[0], kCompressedBatchTag);
  const auto items = decode_batch(*decode_compressed_tx(tx));
  ASSERT_TRUE(items);
  ASSERT_EQ(items->size(), 1u);
  EXPECT_EQ(std::get<Element>(items->front()), e);
}

TEST(Compresschain, TwoDecompressibleTxsGiveTwoEpochsGarbageNone) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  const Bytes t1 = compressed({h.element(0, "x"), h.element(1, "y")});
  const Bytes t2 = compressed({h.element(2, "z")});
  Bytes junk = t2;
  junk.resize(junk.size() / 2);
  h.server(0).on_new_block(make_block(1, {t1, Bytes{0x03, 0x99, 0x01}, junk, t2, Bytes(32, 0x42)}));
  const SetchainSnapshot s = h.server(0).get();
  ASSERT_EQ(s.epoch, 2u);
  EXPECT_EQ(s.at(1).size(), 2u);
  EXPECT_EQ(s.at(2).size(), 1u);
  EXPECT_EQ(h.server(0).counters().garbage_tx, 3u);
  // One own proof per epoch waits in the collector.
  EXPECT_EQ(h.as<CompresschainServer>(0).collector().pending().size(), 2u);
}

TEST(Compresschain, EmptyBatchDecodeIsSkipped) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  const Bytes empty = encode_compressed_tx(*make_codec("brotli"), Batch{}.serialize());
  h.server(0).on_new_block(make_block(1, {empty}));
  EXPECT_EQ(h.server(0).get().epoch, 0u);
  EXPECT_EQ(h.server(0).counters().garbage_tx, 1u);
}

TEST(Compresschain, StaleAndFreshGiveEpochOfOne) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  const Element a = h.element(0, "a");
  const Element b = h.element(1, "b");
  h.server(0).on_new_block(make_block(1, {compressed({a})}));
  h.server(0).on_new_block(make_block(2, {compressed({a, b})}));
  const SetchainSnapshot s = h.server(0).get();
  ASSERT_EQ(s.epoch, 2u);
  EXPECT_EQ(as_bytes(s.at(2)), (std::set<Bytes>{b.canonical_bytes()}));
}

TEST(Compresschain, ProofOnlyBatchGivesEmptyEpoch) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  const Element a = h.element(0, "a");
  h.server(0).on_new_block(make_block(1, {compressed({a})}));
  const EpochProof p = make_epoch_proof(1, std::vector<Element>{a}, ProcessId{3}, h.key(ProcessId{3}));
  h.server(0).on_new_block(make_block(2, {compressed({p})}));
  const SetchainSnapshot s = h.server(0).get();
  ASSERT_EQ(s.epoch, 2u);
  EXPECT_TRUE(s.at(2).empty());
  EXPECT_TRUE(s.proofs.contains(p));
}

TEST(Compresschain, SnapshotIsUnaffectedByLaterFlushes) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  h.start();
  h.server(0).add(h.element(0, "first"));
  h.run_for(4s);
  const SetchainSnapshot before = h.server(0).get();
  const std::uint64_t epoch = before.epoch;
  const std::size_t proofs = before.proofs.size();
  ASSERT_GE(epoch, 1u);
  EXPECT_EQ(before.the_set.size(), 1u);
  h.server(0).add(h.element(1, "second"));
  h.run_for(4s);
  EXPECT_GT(h.server(0).get().epoch, epoch);
  EXPECT_EQ(h.server(0).get().the_set.size(), 2u);
  EXPECT_EQ(before.epoch, epoch);
  EXPECT_EQ(before.the_set.size(), 1u);
  EXPECT_EQ(before.history.size(), epoch);
  EXPECT_EQ(before.proofs.size(), proofs);
}

TEST(Compresschain, OversizeBatchIsSplitNeverAppendedOversize) {
  SystemConfig cfg = testing::small_config();
  cfg.codec = "null";
  cfg.block_capacity = 6000;
  cfg.collector_limit = 100;
  Harness h(cfg, Algorithm::kCompresschain);
  std::size_t largest = 0;
  h.ledger().observe_appends([&largest](const LedgerTx& tx) { largest = std::max(largest, tx.size()); });
  h.start();
  std::mt19937_64 rng(3);
  std::vector<Element> added;
  for (int i = 0; i < 100; ++i) {
    std::string text(300, 'x');
    for (char& ch : text) ch = static_cast<char>('a' + rng() % 26);
    added.push_back(h.element(i, text));
    ASSERT_TRUE(h.server(0).add(added.back()).accepted());
  }
  EXPECT_GT(h.server(0).counters().batches_split, 0u);
  EXPECT_EQ(h.server(0).counters().ledger_rejects, 0u);
  EXPECT_LE(largest, cfg.block_capacity);
  h.run_for(20s);
  for (int i = 0; i < 4; ++i) {
    const SetchainSnapshot s = h.server(i).get();
    for (const Element& e : added) EXPECT_TRUE(s.in_history(e));
  }
}

TEST(Compresschain, ServersMatchReferenceReplay) {
  Harness h(testing::small_config(), Algorithm::kCompresschain);
  h.start();
  std::vector<Element> added;
  for (int i = 0; i < 120; ++i) {
    h.scheduler().at(std::chrono::milliseconds(37 * i), [&h, &added, i] {
      const Element e = h.element(i, "cc" + std::to_string(i));
      added.push_back(e);
      // Every element goes to two servers so batches overlap.
      h.server(i % 4).add(e);
      h.server((i + 1) % 4).add(e);
    });
  }
  h.run_for(20s);
  const auto ref = replay(h.ledger(), h.registry());
  ASSERT_FALSE(ref.empty());
  for (int i = 0; i < 4; ++i) {
    const SetchainSnapshot s = h.server(i).get();
    ASSERT_EQ(s.epoch, ref.size()) << i;
    for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_EQ(as_bytes(s.at(j + 1)), ref[j]) << i << " " << j;
    for (const Element& e : added) EXPECT_TRUE(s.in_history(e));
  }
}

}  // namespace
}  // namespace setchain
