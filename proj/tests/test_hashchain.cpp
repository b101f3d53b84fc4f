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

#include <map>
#include <set>

#include "harness.hpp"
#include "setchain/hashchain.hpp"

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

// Collects every hash-batch tx appended to the ledger.
struct HashTxLog {
  std::vector<HashBatchTx> txs;
  std::vector<std::size_t> sizes;

  explicit HashTxLog(Ledger& ledger) {
    ledger.observe_appends([this](const LedgerTx& tx) {
      sizes.push_back(tx.size());
      if (auto hb = decode_hash_batch(*tx.bytes)) txs.push_back(*hb);
    });
  }
};

SystemConfig config(std::uint64_t n) {
  SystemConfig cfg = testing::small_config(n);
  cfg.network_delay_ms = 5;
  return cfg;
}

TEST(HashBatchWire, LayoutAndRoundTrip) {
  const auto key = crypto::derive_keypair(1, ProcessId{7});
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<std::uint8_t>(i);
  const HashBatchTx hb = make_hash_batch(d, ProcessId{0x0102030405060708ULL}, key);
  const Bytes b = encode_hash_batch(hb);
  ASSERT_EQ(b.size(), 139u);
  EXPECT_EQ(b[0], 0x04);
  EXPECT_TRUE(std::equal(d.begin(), d.end(), b.begin() + 1));
  EXPECT_TRUE(std::equal(hb.sig.begin(), hb.sig.end(), b.begin() + 65));
  for (int i = 0; i < 8; ++i) EXPECT_EQ(b[129 + i], i + 1);
  EXPECT_EQ(b[137], 0);
  EXPECT_EQ(b[138], 0);
  EXPECT_TRUE(crypto::verify(key.public_key, ByteView{d.data(), d.size()}, hb.sig));
  EXPECT_EQ(decode_hash_batch(b), hb);

  Bytes bad = b;
  bad[138] = 1;
  EXPECT_FALSE(decode_hash_batch(bad));
  bad = b;
  bad[0] = kCompressedBatchTag;
  EXPECT_FALSE(decode_hash_batch(bad));
  bad = b;
  bad.push_back(0);
  EXPECT_FALSE(decode_hash_batch(bad));
  bad.resize(138);
  EXPECT_FALSE(decode_hash_batch(bad));
}

TEST(Hashchain, FreshServerAndAddContract) {
  Harness h(config(4), Algorithm::kHashchain);
  auto& s = h.as<HashchainServer>(0);
  EXPECT_TRUE(s.get().the_set.empty());
  EXPECT_EQ(s.get().epoch, 0u);
  const Element e = h.element(0, "e");
  EXPECT_EQ(s.add(e).status, AddStatus::kAccepted);
  EXPECT_EQ(s.collector().pending().size(), 1u);
  EXPECT_EQ(s.add(e).status, AddStatus::kDuplicate);
  EXPECT_EQ(s.add(Element::make(e.creator(), e.payload(), Signature{})).status, AddStatus::kInvalid);
  EXPECT_EQ(s.collector().pending().size(), 1u);
}

TEST(Hashchain, FiveHundredItemFlushIsOne139ByteTx) {
  SystemConfig cfg = config(4);
  cfg.collector_limit = 500;
  Harness h(cfg, Algorithm::kHashchain);
  HashTxLog log(h.ledger());
  for (int i = 0; i < 500; ++i) h.server(0).add(h.element(i, std::string(400, 'a') + std::to_string(i)));
  ASSERT_EQ(log.sizes.size(), 1u);
  EXPECT_EQ(log.sizes[0], 139u);
  ASSERT_EQ(log.txs.size(), 1u);
  EXPECT_EQ(log.txs[0].signer, ProcessId{0});
  EXPECT_TRUE(h.as<HashchainServer>(0).signed_by_self(log.txs[0].digest));
  EXPECT_TRUE(h.as<HashchainServer>(0).knows(log.txs[0].digest));
  EXPECT_TRUE(h.as<HashchainServer>(0).collector().pending().empty());
}

TEST(Hashchain, IdenticalContentGivesIdenticalDigest) {
  Harness h(config(4), Algorithm::kHashchain);
  HashTxLog log(h.ledger());
  const Element a = h.element(0, "same");
  const Element b = h.element(1, "content");
  for (int i : {0, 1}) {
    h.server(i).add(a);
    h.server(i).add(b);
  }
  h.run_for(h.config().collector_timeout());
  ASSERT_EQ(log.txs.size(), 2u);
  EXPECT_EQ(log.txs[0].digest, log.txs[1].digest);
  EXPECT_NE(log.txs[0].signer, log.txs[1].signer);
  // The ledger dedups by bytes, not by digest: both signatures go in.
  EXPECT_EQ(h.ledger().pool_size(), 2u);
  Batch batch;
  batch.add(a);
  batch.add(b);
  EXPECT_EQ(log.txs[0].digest, crypto::sha512(batch.serialize()));
}

TEST(Hashchain, FlushedElementsAreInSetButNotHistory) {
  Harness h(config(4), Algorithm::kHashchain);
  const Element e = h.element(0, "pending");
  h.server(0).add(e);
  h.run_for(h.config().collector_timeout());
  const SetchainSnapshot s = h.server(0).get();
  EXPECT_TRUE(s.the_set.contains(e));
  EXPECT_FALSE(s.in_history(e));
  EXPECT_EQ(s.epoch, 0u);
}

TEST(Hashchain, ConsolidatesOnceQuorumOfSignersIsRecorded) {
  Harness h(config(4), Algorithm::kHashchain);
  auto& s0 = h.as<HashchainServer>(0);
  const Element e = h.element(0, "quorum");
  s0.add(e);
  h.run_for(h.config().collector_timeout());
  const Digest d = crypto::sha512([&] {
    Batch b;
    b.add(e);
    return b.serialize();
  }());
  ASSERT_TRUE(s0.knows(d));
  const Bytes by1 = encode_hash_batch(make_hash_batch(d, ProcessId{1}, h.key(ProcessId{1})));
  const Bytes by2 = encode_hash_batch(make_hash_batch(d, ProcessId{2}, h.key(ProcessId{2})));
  const Bytes by3 = encode_hash_batch(make_hash_batch(d, ProcessId{3}, h.key(ProcessId{3})));

  // Same signer twice, in one block and again in the next.
  s0.on_new_block(make_block(1, {by1, by1}));
  s0.on_new_block(make_block(2, {by1}));
  ASSERT_TRUE(s0.signers(d));
  EXPECT_EQ(s0.signers(d)->size(), 1u);
  EXPECT_EQ(s0.get().epoch, 0u);

  s0.on_new_block(make_block(3, {by2}));
  EXPECT_EQ(s0.signers(d)->size(), 2u);
  ASSERT_EQ(s0.get().epoch, 1u);
  EXPECT_TRUE(s0.get().in_history(e));
  ASSERT_EQ(s0.consolidated().size(), 1u);
  EXPECT_EQ(s0.consolidated()[0], d);

  // Late signatures after consolidation change nothing.
  s0.on_new_block(make_block(4, {by3}));
  EXPECT_EQ(s0.signers(d)->size(), 3u);
  EXPECT_EQ(s0.get().epoch, 1u);
  EXPECT_EQ(s0.consolidated().size(), 1u);
}

TEST(Hashchain, InvalidSignatureOrGarbageIsSkippedEntirely) {
  Harness h(config(4), Algorithm::kHashchain);
  auto& s0 = h.as<HashchainServer>(0);
  Digest d{};
  d[0] = 9;
  HashBatchTx hb = make_hash_batch(d, ProcessId{1}, h.key(ProcessId{1}));
  hb.sig[3] ^= 1;
  // Signed by a client key, which is not a server.
  const HashBatchTx by_client = make_hash_batch(d, ProcessId{5}, h.key(ProcessId{5}));
  Bytes unknown_signer(139, 0x04);
  unknown_signer[137] = unknown_signer[138] = 0;
  s0.on_new_block(make_block(1, {encode_hash_batch(hb), encode_hash_batch(by_client), unknown_signer, Bytes{1, 2, 3}}));
  EXPECT_EQ(s0.signers(d), nullptr);
  EXPECT_EQ(s0.counters().invalid_hash_batches, 3u);
  EXPECT_EQ(s0.counters().garbage_tx, 1u);
  EXPECT_EQ(s0.counters().batch_requests, 0u);
}

TEST(Hashchain, UnknownContentIsFetchedFromTheSigner) {
  Harness h(config(4), Algorithm::kHashchain);
  const Element e = h.element(0, "fetch me");
  h.server(1).add(e);
  h.run_for(h.config().collector_timeout());
  HashTxLog log(h.ledger());
  Batch b;
  b.add(e);
  const Digest d = crypto::sha512(b.serialize());
  auto& s0 = h.as<HashchainServer>(0);
  s0.on_new_block(make_block(1, {encode_hash_batch(make_hash_batch(d, ProcessId{1}, h.key(ProcessId{1})))}));
  EXPECT_FALSE(s0.knows(d));
  h.run_for(20ms);
  EXPECT_TRUE(s0.knows(d));
  EXPECT_TRUE(s0.get().the_set.contains(e));
  EXPECT_FALSE(s0.get().in_history(e));
  // Learning a batch makes the server co-sign it, once.
  ASSERT_EQ(log.txs.size(), 1u);
  EXPECT_EQ(log.txs[0].signer, ProcessId{0});
  EXPECT_EQ(log.txs[0].digest, d);
  EXPECT_TRUE(s0.signed_by_self(d));
  EXPECT_EQ(h.network().responses_served(ProcessId{1}), 1u);
}

struct EpochLog {
  std::map<std::uint64_t, std::vector<std::pair<ProcessId, Digest>>> by_epoch;
  std::vector<std::string> violations;
};

void watch(Harness& h, EpochLog& log) {
  const std::uint64_t q = h.config().quorum();
  for (std::uint64_t i = 0; i < h.config().n; ++i) {
    if (!h.server(i).correct()) continue;
    auto* s = dynamic_cast<HashchainServer*>(&h.server(i));
    if (s == nullptr) continue;
    s->set_epoch_listener([s, &log, q](std::uint64_t j, const Epoch&) {
      const Digest d = s->consolidated().back();
      log.by_epoch[j].emplace_back(s->id(), d);
      if (!s->signers(d) || s->signers(d)->size() < q) log.violations.push_back("quorum");
    });
  }
}

TEST(Hashchain, TenServersAgreeOnEpochNumberAndQuorum) {
  Harness h(config(10), Algorithm::kHashchain);
  EpochLog log;
  watch(h, log);
  HashTxLog txs(h.ledger());
  h.start();
  const Element e = h.element(0, "one batch");
  h.server(0).add(e);
  h.run_for(8s);
  EXPECT_TRUE(log.violations.empty());
  ASSERT_FALSE(log.by_epoch.empty());
  const auto& first = log.by_epoch.at(1);
  ASSERT_EQ(first.size(), 10u);
  for (const auto& [id, d] : first) EXPECT_EQ(d, first[0].second);
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(h.server(i).get().in_history(e));
  for (const auto& [j, entries] : log.by_epoch) {
    std::set<Digest> digests;
    for (const auto& [id, d] : entries) digests.insert(d);
    EXPECT_EQ(digests.size(), 1u) << j;
  }
  // At most one self-signature per digest per server.
  std::set<std::pair<Digest, ProcessId>> seen;
  for (const HashBatchTx& hb : txs.txs) EXPECT_TRUE(seen.insert({hb.digest, hb.signer}).second);
  // Epoch 1 gains at least f+1 proofs on every server.
  for (int i = 0; i < 10; ++i) {
    std::set<ProcessId> signers;
    for (const EpochProof& p : h.server(i).get().proofs) {
      if (p.epoch_no == 1) signers.insert(p.signer);
    }
    EXPECT_GE(signers.size(), h.config().quorum()) << i;
  }
}

TEST(Hashchain, EpochCreatedAtTheBlockCarryingTheQuorumSignature) {
  Harness h(config(10), Algorithm::kHashchain);
  std::vector<VirtualTime> epoch_at(10, VirtualTime{-1});
  for (int i = 0; i < 10; ++i) {
    h.server(i).set_epoch_listener([&h, &epoch_at, i](std::uint64_t j, const Epoch&) {
      if (j == 1) epoch_at[i] = h.scheduler().now();
    });
  }
  std::map<Digest, std::set<ProcessId>> signers;
  VirtualTime quorum_block{-1};
  h.ledger().observe_blocks([&](const Block& b) {
    for (const LedgerTx& tx : b.txs) {
      if (auto hb = decode_hash_batch(*tx.bytes)) {
        auto& s = signers[hb->digest];
        s.insert(hb->signer);
        if (s.size() == h.config().quorum() && quorum_block < VirtualTime{0}) quorum_block = b.produced_at;
      }
    }
  });
  h.start();
  h.server(3).add(h.element(0, "when"));
  h.run_for(8s);
  ASSERT_GE(quorum_block, VirtualTime{0});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(epoch_at[i], quorum_block + h.config().network_delay()) << i;
}

TEST(Hashchain, WithholderBatchIsNeverConsolidated) {
  Harness h(config(4), Algorithm::kHashchain, {{ProcessId{3}, AdversaryKind::kWithholder}});
  EpochLog log;
  watch(h, log);
  h.start();
  const Element hidden = h.element(0, "hidden");
  const Element open = h.element(1, "open");
  h.server(3).add(hidden);
  h.server(0).add(open);
  h.run_for(15s);
  EXPECT_TRUE(log.violations.empty());
  for (int i = 0; i < 3; ++i) {
    const SetchainSnapshot s = h.server(i).get();
    EXPECT_FALSE(s.in_history(hidden)) << i;
    EXPECT_FALSE(s.the_set.contains(hidden)) << i;
    EXPECT_TRUE(s.in_history(open)) << i;
    EXPECT_GT(h.server(i).counters().batch_timeouts, 0u) << i;
  }
  EXPECT_EQ(h.network().responses_served(ProcessId{3}), 0u);
}

TEST(Hashchain, WrongBatchResponseFailsDigestCheck) {
  Harness h(config(4), Algorithm::kHashchain, {{ProcessId{3}, AdversaryKind::kWrongBatchServer}});
  h.start();
  const Element e = h.element(0, "tampered");
  h.server(3).add(e);
  h.run_for(10s);
  std::uint64_t bad = 0;
  for (int i = 0; i < 3; ++i) {
    bad += h.server(i).counters().bad_batch_response;
    EXPECT_FALSE(h.server(i).get().the_set.contains(e)) << i;
    EXPECT_EQ(h.server(i).get().epoch, 0u) << i;
  }
  EXPECT_GT(bad, 0u);
  EXPECT_EQ(bad, h.network().responses_served(ProcessId{3}));
}

TEST(Hashchain, SelectiveServingStillGivesIdenticalEpochs) {
  Harness h(config(7), Algorithm::kHashchain, {{ProcessId{6}, AdversaryKind::kSelectiveServer}},
            {ProcessId{0}, ProcessId{1}});
  EpochLog log;
  watch(h, log);
  h.start();
  for (int i = 0; i < 20; ++i) {
    h.scheduler().at(std::chrono::milliseconds(100 * i), [&h, i] { h.server(6).add(h.element(i, "sel" + std::to_string(i))); });
    h.scheduler().at(std::chrono::milliseconds(100 * i + 50), [&h, i] { h.server(i % 6).add(h.element(i, "ok" + std::to_string(i))); });
  }
  h.run_for(20s);
  EXPECT_TRUE(log.violations.empty());
  const auto& ref = h.as<HashchainServer>(0).consolidated();
  ASSERT_FALSE(ref.empty());
  for (int i = 1; i < 6; ++i) EXPECT_EQ(h.as<HashchainServer>(i).consolidated(), ref) << i;
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 6; ++k) EXPECT_TRUE(h.server(k).get().in_history(h.element(i, "sel" + std::to_string(i))));
  }
}

TEST(Hashchain, LiteralCountingSkipsSignersWhoseFetchFails) {
  for (bool literal : {false, true}) {
    SystemConfig cfg = config(4);
    cfg.hashchain_literal_counting = literal;
    Harness h(cfg, Algorithm::kHashchain, {{ProcessId{3}, AdversaryKind::kWithholder}});
    h.start();
    h.server(3).add(h.element(0, "w"));
    h.run_for(6s);
    Batch b;
    b.add(h.element(0, "w"));
    const Digest d = crypto::sha512(b.serialize());
    const auto* s = h.as<HashchainServer>(0).signers(d);
    if (literal) {
      EXPECT_TRUE(s == nullptr || s->empty());
    } else {
      ASSERT_NE(s, nullptr);
      EXPECT_EQ(*s, std::vector<ProcessId>{ProcessId{3}});
    }
  }
}

TEST(Hashchain, LiteralCountingStillConsolidatesHonestBatches) {
  SystemConfig cfg = config(4);
  cfg.hashchain_literal_counting = true;
  Harness h(cfg, Algorithm::kHashchain);
  h.start();
  const Element e = h.element(0, "literal");
  h.server(1).add(e);
  h.run_for(8s);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(h.server(i).get().in_history(e)) << i;
}

}  // namespace
}  // namespace setchain
