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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setchain/codec.hpp"
#include "setchain/config.hpp"
#include "setchain/element.hpp"
#include "setchain/ledger.hpp"
#include "setchain/scheduler.hpp"
#include "setchain/state.hpp"
#include "setchain/validator.hpp"

namespace setchain {

enum class AddStatus { kAccepted, kInvalid, kDuplicate, kIgnored, kLedgerRejected };

std::string to_string(AddStatus s);

struct AddResult {
  AddStatus status = AddStatus::kAccepted;

  bool accepted() const { return status == AddStatus::kAccepted; }
};

/// Told about every ledger transaction a server creates from batch items, so
/// the metrics pipeline can map ledger positions back to elements and
/// proofs. `key` is SHA-512 of the tx bytes, or the batch digest for
/// hash-batches.
class TxTracker {
 public:
  virtual ~TxTracker() = default;
  virtual void on_batch_appended(ProcessId server, const Digest& key, const std::vector<BatchItem>& items) = 0;
};

/// What a server returns to a Request_batch.
struct BatchReply {
  enum class Kind { kFound, kNotFound, kNoReply };
  Kind kind = Kind::kNotFound;
  SharedBytes bytes;

  static BatchReply found(SharedBytes b) { return {Kind::kFound, std::move(b)}; }
  static BatchReply not_found() { return {Kind::kNotFound, nullptr}; }
  static BatchReply no_reply() { return {Kind::kNoReply, nullptr}; }
};

struct ServerCounters {
  std::uint64_t adds_accepted = 0;
  std::uint64_t adds_rejected = 0;
  std::uint64_t garbage_tx = 0;
  std::uint64_t bad_batch_response = 0;
  std::uint64_t batch_requests = 0;
  std::uint64_t batch_timeouts = 0;
  std::uint64_t ledger_rejects = 0;
  std::uint64_t invalid_hash_batches = 0;
  std::uint64_t proofs_dropped = 0;
  std::uint64_t batches_split = 0;
};

class BatchNetwork;

/// Everything a server needs from its environment. References stay valid
/// for the lifetime of the run.
struct ServerContext {
  ProcessId id;
  crypto::KeyPair key;
  SystemConfig config;
  Scheduler* scheduler = nullptr;
  Ledger* ledger = nullptr;
  Validator* validator = nullptr;
  TxTracker* tracker = nullptr;
  BatchNetwork* network = nullptr;
  std::shared_ptr<const Codec> codec;
};

/// The server-facing surface shared by correct servers and adversaries.
class Server {
 public:
  using EpochListener = std::function<void(std::uint64_t epoch, const Epoch& contents)>;

  explicit Server(ServerContext ctx) : ctx_(std::move(ctx)) {}
  virtual ~Server() = default;
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  ProcessId id() const { return ctx_.id; }
  virtual bool correct() const { return true; }
  virtual std::string kind() const = 0;

  /// Called once after every server of the run is wired up.
  virtual void start() {}

  virtual AddResult add(const Element& e) = 0;
  virtual SetchainSnapshot get() const = 0;
  virtual void on_new_block(const Block& block) = 0;

  /// Places an element or proof on the algorithm's normal outbound path
  /// without any validity check: a ledger tx for Vanilla, the collector
  /// otherwise.
  virtual void submit_item(const BatchItem& item) = 0;

  /// Hash-reversal responder side; only Hashchain servers hold batches.
  virtual BatchReply serve_batch(const Digest& digest, ProcessId requester);

  /// Read-only view of the Setchain state for invariant checks; null for
  /// servers that keep none.
  virtual const SetchainState* state() const = 0;

  void set_epoch_listener(EpochListener l) { epoch_listener_ = std::move(l); }
  const ServerCounters& counters() const { return counters_; }
  const ServerContext& context() const { return ctx_; }

 protected:
  void notify_epoch(std::uint64_t j, const Epoch& g) const {
    if (epoch_listener_) epoch_listener_(j, g);
  }
  /// ledger.append for a tx carrying `items`; reports to the tracker when
  /// the ledger accepts it.
  bool append_tx(Bytes tx, const Digest& key, const std::vector<BatchItem>& items);

  ServerContext ctx_;
  ServerCounters counters_;
  EpochListener epoch_listener_;
};

/// Elements and proofs waiting for the next flush. Flushes synchronously
/// when the batch reaches `limit` items and from a timer `timeout` after
/// the first item entered an empty batch.
class Collector {
 public:
  using FlushHandler = std::function<void(Batch)>;

  Collector(Scheduler& scheduler, std::uint64_t limit, VirtualTime timeout, FlushHandler on_flush);

  /// Returns false for a duplicate item.
  bool add(const BatchItem& item);
  void flush();

  const Batch& pending() const { return batch_; }
  VirtualTime last_flush() const { return last_flush_; }
  std::uint64_t flushes() const { return flushes_; }

 private:
  Scheduler& scheduler_;
  std::uint64_t limit_;
  VirtualTime timeout_;
  FlushHandler on_flush_;
  Batch batch_;
  VirtualTime last_flush_{0};
  std::uint64_t generation_ = 0;
  std::uint64_t flushes_ = 0;
};

/// Elements and proofs of `items`, each in batch order. No validity checks.
struct ExtractedItems {
  std::vector<Element> elements;
  std::vector<EpochProof> proofs;
};
ExtractedItems split_items(const std::vector<BatchItem>& items);

}  // namespace setchain
