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

#include "setchain/ledger.hpp"

#include <algorithm>
#include <stdexcept>

#include "setchain/crypto.hpp"

namespace setchain {

namespace {

Digest block_fingerprint(const Block& b) {
  Bytes buf;
  put_u64_be(buf, b.height);
  for (const LedgerTx& tx : b.txs) {
    put_u32_be(buf, static_cast<std::uint32_t>(tx.size()));
    put_bytes(buf, *tx.bytes);
  }
  return crypto::sha512(buf);
}

}  // namespace

std::uint64_t Block::byte_size() const {
  std::uint64_t total = 0;
  for (const LedgerTx& tx : txs) total += tx.size();
  return total;
}

std::string to_string(AppendStatus s) {
  switch (s) {
    case AppendStatus::kAccepted: return "accepted";
    case AppendStatus::kDuplicate: return "duplicate";
    case AppendStatus::kTooLarge: return "too_large";
    case AppendStatus::kEmpty: return "empty";
    case AppendStatus::kMempoolFull: return "mempool_reject";
  }
  return "unknown";
}

Ledger::Ledger(Scheduler& scheduler, LedgerConfig config) : scheduler_(scheduler), config_(config) {
  if (config_.nodes == 0) throw ConfigError("ledger needs at least one node");
  if (config_.block_capacity == 0) throw ConfigError("block_capacity must be positive");
  if (config_.block_interval <= VirtualTime::zero()) throw ConfigError("block_interval must be positive");
}

void Ledger::start() {
  if (started_) return;
  started_ = true;
  scheduler_.after(config_.block_interval, [this] { tick(); });
}

void Ledger::tick() {
  produce_block();
  scheduler_.after(config_.block_interval, [this] { tick(); });
}

AppendStatus Ledger::append(ProcessId node, Bytes tx) {
  ++counters_.appends;
  if (tx.empty()) return AppendStatus::kEmpty;
  if (tx.size() > config_.block_capacity) {
    ++counters_.too_large;
    return AppendStatus::kTooLarge;
  }
  auto bytes = std::make_shared<const Bytes>(std::move(tx));
  if (known_.contains(bytes)) {
    ++counters_.duplicates;
    return AppendStatus::kDuplicate;
  }
  if (pool_.size() + 1 > config_.mempool_max_txs || pool_bytes_ + bytes->size() > config_.mempool_max_bytes) {
    ++counters_.mempool_reject;
    return AppendStatus::kMempoolFull;
  }
  LedgerTx entry{bytes, node, scheduler_.now(), next_sequence_++, false};
  known_.insert(bytes);
  pool_.emplace(Key{entry.submit_time, node.value, entry.sequence}, entry);
  pool_bytes_ += bytes->size();
  append_log_.push_back(entry);
  ++counters_.accepted;
  for (const auto& obs : append_observers_) obs(entry);
  return AppendStatus::kAccepted;
}

void Ledger::subscribe(ProcessId server, BlockHandler handler) {
  subscribers_.push_back(Subscriber{server, std::move(handler), {}});
}

void Ledger::inject_proposer_tx(ProcessId node, Bytes bytes) {
  if (bytes.empty() || bytes.size() > config_.block_capacity) return;
  LedgerTx entry{std::make_shared<const Bytes>(std::move(bytes)), node, scheduler_.now(), next_sequence_++, true};
  inject_log_.push_back(entry);
  injected_[node.value].push_back(std::move(entry));
  ++counters_.injected;
}

bool Ledger::visible(const LedgerTx& tx, ProcessId node, VirtualTime now) const {
  return tx.submitter == node || tx.submit_time + config_.network_delay <= now;
}

bool Ledger::in_mempool(ProcessId node, ByteView bytes) const {
  const auto probe = std::make_shared<const Bytes>(bytes.begin(), bytes.end());
  const auto it = known_.find(probe);
  if (it == known_.end()) return false;
  for (const auto& [key, tx] : pool_) {
    if (tx.bytes == *it) return visible(tx, node, scheduler_.now());
  }
  return false;
}

BlockPtr Ledger::produce_block() {
  const VirtualTime now = scheduler_.now();
  const ProcessId proposer = next_proposer();
  auto block = std::make_shared<Block>();
  block->height = blocks_.size() + 1;
  block->proposer = proposer;
  block->produced_at = now;

  std::uint64_t used = 0;
  if (auto it = injected_.find(proposer.value); it != injected_.end()) {
    auto& queue = it->second;
    while (!queue.empty() && used + queue.front().size() <= config_.block_capacity) {
      used += queue.front().size();
      block->txs.push_back(std::move(queue.front()));
      queue.pop_front();
    }
  }
  for (auto it = pool_.begin(); it != pool_.end();) {
    const LedgerTx& tx = it->second;
    if (!visible(tx, proposer, now)) {
      ++it;
      continue;
    }
    if (used + tx.size() > config_.block_capacity) break;
    used += tx.size();
    pool_bytes_ -= tx.size();
    block->txs.push_back(tx);
    it = pool_.erase(it);
  }

  if (block->txs.empty() && !config_.produce_empty_blocks) {
    ++counters_.skipped_ticks;
    return nullptr;
  }
  ++counters_.blocks;
  BlockPtr result = block;
  blocks_.push_back(result);
  scheduler_.after(config_.network_delay, [this, result] { deliver(result); });
  return result;
}

void Ledger::deliver(const BlockPtr& block) {
  const Digest fp = block_fingerprint(*block);
  for (Subscriber& s : subscribers_) {
    s.handler(*block);
    s.seen.emplace_back(block->height, fp);
  }
  delivered_height_ = block->height;
  for (const auto& obs : block_observers_) obs(*block);
}

LedgerAudit Ledger::audit(VirtualTime excuse_after) const {
  LedgerAudit a;
  auto violation = [&](std::string msg) {
    if (a.violations.size() < 50) a.violations.push_back(std::move(msg));
  };

  std::unordered_map<std::uint64_t, const LedgerTx*> appended;
  for (const LedgerTx& tx : append_log_) appended.emplace(tx.sequence, &tx);
  std::unordered_map<std::uint64_t, const LedgerTx*> injected;
  for (const LedgerTx& tx : inject_log_) injected.emplace(tx.sequence, &tx);

  std::unordered_map<std::uint64_t, std::uint64_t> inclusions;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = *blocks_[i];
    if (b.height != i + 1) violation("block heights not contiguous at index " + std::to_string(i));
    if (b.byte_size() > config_.block_capacity) violation("block " + std::to_string(b.height) + " over capacity");
    for (const LedgerTx& tx : b.txs) {
      const auto& log = tx.injected ? injected : appended;
      const auto it = log.find(tx.sequence);
      if (it == log.end() || *it->second->bytes != *tx.bytes) {
        violation("block " + std::to_string(b.height) + " carries an unexplained tx");
        continue;
      }
      if (!tx.injected) ++inclusions[tx.sequence];
    }
  }

  a.accepted_appends = append_log_.size();
  for (const LedgerTx& tx : append_log_) {
    const auto it = inclusions.find(tx.sequence);
    const std::uint64_t count = it == inclusions.end() ? 0 : it->second;
    if (count == 1) {
      ++a.included_once;
    } else if (count == 0 && tx.submit_time >= excuse_after) {
      ++a.pending_excused;
    } else {
      violation("tx " + std::to_string(tx.sequence) + " included " + std::to_string(count) + " times");
    }
  }

  for (const Subscriber& s : subscribers_) {
    if (s.seen.size() != delivered_height_) {
      violation("subscriber " + std::to_string(s.id.value) + " missed blocks");
    }
    for (std::size_t i = 0; i < s.seen.size(); ++i) {
      if (s.seen[i].first != i + 1) violation("subscriber " + std::to_string(s.id.value) + " out of order");
    }
    if (s.seen != subscribers_.front().seen) {
      violation("subscriber " + std::to_string(s.id.value) + " saw a different block sequence");
    }
  }
  return a;
}

}  // namespace setchain
