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
#include <random>
#include <set>

#include "harness.hpp"
#include "setchain/vanilla.hpp"

namespace setchain {
namespace {

using testing::Harness;
using namespace std::chrono_literals;

// Single-process Vanilla executor over raw tx bytes: every block is one
// epoch holding the well-signed client elements not seen in earlier epochs.
struct ReferenceVanilla {
  const crypto::KeyRegistry& reg;
  std::vector<std::set<Bytes>> history;
  std::set<Bytes> placed;

  bool element_ok(const Bytes& b) const {
    if (b.size() < 77 || b[0] != 0x01) return false;
    std::uint64_t creator = 0;
    for (int i = 0; i < 8; ++i) creator = (creator << 8) | b[1 + i];
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | b[9 + i];
    if (len == 0 || len > kDefaultMaxElementSize || b.size() != 77 + len) return false;
    const auto* entry = reg.find(ProcessId{creator});
    if (!entry || entry->role != Role::kClient) return false;
    return crypto::verify(ByteView{entry->public_key.data(), 32}, ByteView{b.data(), b.size() - 64},
                          ByteView{b.data() + b.size() - 64, 64});
  }

  void block(const std::vector<Bytes>& txs) {
    std::set<Bytes> g;
    for (const Bytes& tx : txs) {
      if (element_ok(tx) && !placed.contains(tx)) g.insert(tx);
    }
    placed.insert(g.begin(), g.end());
    history.push_back(g);
  }
};

Block make_block(std::uint64_t height, const std::vector<Bytes>& txs) {
  Block b;
  b.height = height;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    b.txs.push_back(LedgerTx{std::make_shared<const Bytes>(txs[i]), ProcessId{0}, {}, i, false});
  }
  return b;
}

std::set<Bytes> as_bytes(const Epoch& g) {
  std::set<Bytes> out;
  for (const Element& e : g) out.insert(e.canonical_bytes());
  return out;
}

TEST(Vanilla, FreshServerIsEmpty) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const SetchainSnapshot s = h.server(0).get();
  EXPECT_TRUE(s.the_set.empty());
  EXPECT_TRUE(s.history.empty());
  EXPECT_EQ(s.epoch, 0u);
  EXPECT_TRUE(s.proofs.empty());
  EXPECT_EQ(s, h.server(0).get());
}

TEST(Vanilla, AddValidatesAndDeduplicates) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Element e = h.element(0, "hello");
  EXPECT_EQ(h.server(0).add(e).status, AddStatus::kAccepted);
  EXPECT_EQ(h.server(0).get().the_set.size(), 1u);
  EXPECT_EQ(h.ledger().pool_size(), 1u);
  EXPECT_EQ(h.server(0).add(e).status, AddStatus::kDuplicate);
  EXPECT_EQ(h.ledger().pool_size(), 1u);
  const Element forged = Element::make(e.creator(), e.payload(), Signature{});
  EXPECT_EQ(h.server(0).add(forged).status, AddStatus::kInvalid);
  EXPECT_EQ(h.server(0).get().the_set.size(), 1u);
}

TEST(Vanilla, BlockOfThreeValidAndOneInvalid) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  std::vector<Bytes> txs;
  for (int i = 0; i < 3; ++i) txs.push_back(h.element(i, "v" + std::to_string(i)).canonical_bytes());
  txs.push_back(Element::make(ProcessId{5}, Bytes{1, 2}, Signature{}).canonical_bytes());
  h.server(1).on_new_block(make_block(1, txs));
  const SetchainSnapshot s = h.server(1).get();
  ASSERT_EQ(s.epoch, 1u);
  EXPECT_EQ(s.at(1).size(), 3u);
  EXPECT_EQ(s.the_set.size(), 3u);
  // The server's own proof went to the ledger.
  EXPECT_EQ(h.ledger().pool_size(), 1u);
}

TEST(Vanilla, ProofOnlyBlockMakesEmptyEpochAndMergesProofs) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Element e = h.element(0, "x");
  h.server(0).on_new_block(make_block(1, {e.canonical_bytes()}));
  const EpochProof p = make_epoch_proof(1, std::vector<Element>{e}, ProcessId{2}, h.key(ProcessId{2}));
  EpochProof forged = p;
  forged.proof_sig[0] ^= 1;
  const EpochProof future = make_epoch_proof(9, {}, ProcessId{3}, h.key(ProcessId{3}));
  h.server(0).on_new_block(make_block(2, {encode_epoch_proof(p), encode_epoch_proof(forged), encode_epoch_proof(future)}));
  const SetchainSnapshot s = h.server(0).get();
  ASSERT_EQ(s.epoch, 2u);
  EXPECT_TRUE(s.at(2).empty());
  EXPECT_EQ(s.proofs.size(), 1u);
  EXPECT_TRUE(s.proofs.contains(p));
}

TEST(Vanilla, RepeatedElementIsExcludedFromLaterEpoch) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Element a = h.element(0, "a");
  const Element b = h.element(1, "b");
  h.server(0).on_new_block(make_block(1, {a.canonical_bytes()}));
  h.server(0).on_new_block(make_block(2, {a.canonical_bytes(), b.canonical_bytes()}));
  const SetchainSnapshot s = h.server(0).get();
  ASSERT_EQ(s.epoch, 2u);
  EXPECT_EQ(as_bytes(s.at(2)), (std::set<Bytes>{b.canonical_bytes()}));
}

TEST(Vanilla, GarbageTxIsSkipped) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  h.server(0).on_new_block(make_block(1, {Bytes{0x01, 0x02}, Bytes(40, 0xff), h.element(0, "ok").canonical_bytes()}));
  EXPECT_EQ(h.server(0).get().at(1).size(), 1u);
  EXPECT_EQ(h.server(0).counters().garbage_tx, 2u);
}

TEST(Vanilla, RandomBlocksMatchReferenceExecutor) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  ReferenceVanilla ref{h.registry(), {}, {}};
  std::mt19937_64 rng(31);
  std::vector<Bytes> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(h.element(i, "p" + std::to_string(i)).canonical_bytes());
  for (int i = 0; i < 10; ++i) {
    Bytes bad = pool[i];
    bad[20] ^= 0x10;
    pool.push_back(bad);
  }
  pool.push_back(Bytes{0x01});
  pool.push_back(Bytes(139, 0x02));
  const Bytes by_server = Element::sign(ProcessId{1}, Bytes{5}, h.key(ProcessId{1})).canonical_bytes();
  pool.push_back(by_server);
  for (std::uint64_t height = 1; height <= 40; ++height) {
    std::vector<Bytes> txs;
    const std::size_t count = rng() % 8;
    for (std::size_t k = 0; k < count; ++k) txs.push_back(pool[rng() % pool.size()]);
    h.server(2).on_new_block(make_block(height, txs));
    ref.block(txs);
  }
  const SetchainSnapshot s = h.server(2).get();
  ASSERT_EQ(s.epoch, ref.history.size());
  for (std::size_t j = 0; j < ref.history.size(); ++j) EXPECT_EQ(as_bytes(s.at(j + 1)), ref.history[j]) << j + 1;
}

TEST(Vanilla, EndToEndAllServersAgree) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  h.start();
  std::vector<Element> added;
  for (int i = 0; i < 40; ++i) {
    h.scheduler().at(std::chrono::milliseconds(50 * i), [&h, &added, i] {
      const Element e = h.element(i, "e2e" + std::to_string(i));
      added.push_back(e);
      h.server(i % 4).add(e);
    });
  }
  h.run_for(10s);
  const SetchainSnapshot ref = h.server(0).get();
  EXPECT_EQ(ref.epoch, h.ledger().height());
  for (const Element& e : added) EXPECT_TRUE(ref.in_history(e));
  for (int i = 1; i < 4; ++i) EXPECT_EQ(h.server(i).get().history.size(), ref.history.size());
  for (int i = 1; i < 4; ++i) {
    const SetchainSnapshot s = h.server(i).get();
    for (std::uint64_t j = 1; j <= s.epoch; ++j) EXPECT_EQ(as_bytes(s.at(j)), as_bytes(ref.at(j)));
  }
  // Proof-only blocks keep the chain moving; settled epochs carry all four proofs.
  std::map<std::uint64_t, int> proofs;
  for (const EpochProof& p : ref.proofs) ++proofs[p.epoch_no];
  ASSERT_GT(ref.epoch, 2u);
  for (std::uint64_t j = 1; j + 2 <= ref.epoch; ++j) EXPECT_EQ(proofs[j], 4) << j;
}

}  // namespace
}  // namespace setchain
