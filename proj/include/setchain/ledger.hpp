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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "setchain/bytes.hpp"
#include "setchain/scheduler.hpp"
#include "setchain/types.hpp"

namespace setchain {

struct LedgerTx {
  SharedBytes bytes;
  ProcessId submitter;
  VirtualTime submit_time{};
  /// Ledger-wide arrival number; last component of the FIFO key.
  std::uint64_t sequence = 0;
  bool injected = false;

  std::size_t size() const { return bytes->size(); }
};

struct Block {
  std::uint64_t height = 0;
  std::vector<LedgerTx> txs;
  ProcessId proposer;
  VirtualTime produced_at{};

  std::uint64_t byte_size() const;
};

using BlockPtr = std::shared_ptr<const Block>;

struct LedgerConfig {
  std::uint64_t nodes = 10;
  std::uint64_t block_capacity = 524288;
  VirtualTime block_interval{1'250'000};
  VirtualTime network_delay{0};
  bool produce_empty_blocks = false;
  std::uint64_t mempool_max_txs = 10'000'000;
  std::uint64_t mempool_max_bytes = 2ULL * 1024 * 1024 * 1024;
};

enum class AppendStatus { kAccepted, kDuplicate, kTooLarge, kEmpty, kMempoolFull };

std::string to_string(AppendStatus s);

struct LedgerCounters {
  std::uint64_t appends = 0;
  std::uint64_t accepted = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t mempool_reject = 0;
  std::uint64_t too_large = 0;
  std::uint64_t injected = 0;
  std::uint64_t blocks = 0;
  std::uint64_t skipped_ticks = 0;
};

/// Result of checking the ledger guarantees over a finished run.
struct LedgerAudit {
  std::uint64_t accepted_appends = 0;
  std::uint64_t included_once = 0;
  std::uint64_t pending_excused = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Simulated block-based ledger. Mempools are modelled as one ordered pool
/// with per-node visibility: a tx is in its submitter's mempool at append
/// time and in every other node's mempool one network delay later. A tx
/// leaves all mempools when a proposer packs it. Proposer of height h is
/// node h mod n; a block is delivered to every subscriber one network delay
/// after its production, in subscription order.
class Ledger {
 public:
  using BlockHandler = std::function<void(const Block&)>;
  using AppendObserver = std::function<void(const LedgerTx&)>;

  Ledger(Scheduler& scheduler, LedgerConfig config);
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  /// Starts the periodic block tick.
  void start();

  AppendStatus append(ProcessId node, Bytes tx);

  /// Handlers run once per block in height order. Subscribe during setup.
  void subscribe(ProcessId server, BlockHandler handler);
  /// Observers run after every subscriber of the same block.
  void observe_blocks(BlockHandler handler) { block_observers_.push_back(std::move(handler)); }
  void observe_appends(AppendObserver handler) { append_observers_.push_back(std::move(handler)); }

  /// Adversary hook: `bytes` go verbatim, ahead of mempool txs, into the
  /// next block `node` proposes.
  void inject_proposer_tx(ProcessId node, Bytes bytes);

  /// Emits a block now if the current proposer has anything to include
  /// (or empty blocks are on). Called by the tick; public for tests.
  BlockPtr produce_block();

  ProcessId next_proposer() const { return ProcessId{(blocks_.size() + 1) % config_.nodes}; }
  std::uint64_t height() const { return blocks_.size(); }
  const std::vector<BlockPtr>& blocks() const { return blocks_; }
  std::uint64_t delivered_height() const { return delivered_height_; }

  /// Txs waiting in the pool (not yet in any block).
  std::size_t pool_size() const { return pool_.size(); }
  std::uint64_t pool_bytes() const { return pool_bytes_; }
  /// Does node's mempool hold a tx with these bytes right now?
  bool in_mempool(ProcessId node, ByteView bytes) const;

  const LedgerConfig& config() const { return config_; }
  const LedgerCounters& counters() const { return counters_; }

  /// Ledger guarantees: every accepted append older than `excuse_after` is
  /// in exactly one block, blocks respect capacity and contain only appended
  /// or injected txs, and every subscriber saw the same block sequence.
  LedgerAudit audit(VirtualTime excuse_after) const;

 private:
  struct Key {
    VirtualTime submit_time;
    std::uint64_t submitter;
    std::uint64_t sequence;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  struct ContentHash {
    std::size_t operator()(const SharedBytes& b) const noexcept { return std::hash<std::string_view>{}(as_string_view(*b)); }
  };
  struct ContentEq {
    bool operator()(const SharedBytes& a, const SharedBytes& b) const noexcept { return *a == *b; }
  };
  struct Subscriber {
    ProcessId id;
    BlockHandler handler;
    std::vector<std::pair<std::uint64_t, Digest>> seen;
  };

  bool visible(const LedgerTx& tx, ProcessId node, VirtualTime now) const;
  void tick();
  void deliver(const BlockPtr& block);

  Scheduler& scheduler_;
  LedgerConfig config_;
  std::map<Key, LedgerTx> pool_;
  std::uint64_t pool_bytes_ = 0;
  std::unordered_set<SharedBytes, ContentHash, ContentEq> known_;
  std::unordered_map<std::uint64_t, std::deque<LedgerTx>> injected_;
  std::vector<LedgerTx> inject_log_;
  std::vector<BlockPtr> blocks_;
  std::vector<Subscriber> subscribers_;
  std::vector<BlockHandler> block_observers_;
  std::vector<AppendObserver> append_observers_;
  std::vector<LedgerTx> append_log_;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t delivered_height_ = 0;
  LedgerCounters counters_;
  bool started_ = false;
};

}  // namespace setchain
