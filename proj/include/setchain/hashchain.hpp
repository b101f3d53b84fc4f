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
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "setchain/server.hpp"

namespace setchain {

inline constexpr std::size_t kHashBatchSize = 139;

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | d[i];
    return h;
  }
};

/// ⟨digest, signature over digest, signer⟩ standing in for a batch.
struct HashBatchTx {
  Digest digest{};
  Signature sig{};
  ProcessId signer;

  friend bool operator==(const HashBatchTx&, const HashBatchTx&) = default;
};

/// 0x04 || digest || sig || signer (u64 BE) || 2 zero bytes.
Bytes encode_hash_batch(const HashBatchTx& hb);
std::optional<HashBatchTx> decode_hash_batch(ByteView bytes);
HashBatchTx make_hash_batch(const Digest& digest, ProcessId signer, const crypto::KeyPair& key);

/// Batch content known under a digest, with its decoded items.
struct StoredBatch {
  Digest digest{};
  SharedBytes bytes;
  std::shared_ptr<const std::vector<BatchItem>> items;
};

/// Request/response transport for hash reversal. A request reaches the
/// responder after one network delay and its reply comes back after
/// another; unanswered requests simply never call back.
///
/// The network also memoizes the pure parts of checking a reply (digest
/// check and batch decoding) across requesters of the same run.
class BatchNetwork {
 public:
  using ReplyHandler = std::function<void(const BatchReply&)>;

  BatchNetwork(Scheduler& scheduler, VirtualTime delay, std::size_t max_element_size)
      : scheduler_(scheduler), delay_(delay), max_element_size_(max_element_size) {}

  void attach(Server* server);

  void request(ProcessId from, ProcessId to, const Digest& digest, ReplyHandler on_reply);

  /// sha512(*bytes) == digest, then decoded items; nullopt on a digest
  /// mismatch. Undecodable content under a matching digest yields an empty
  /// item list.
  std::optional<StoredBatch> check(const Digest& digest, const SharedBytes& bytes);

  /// Content store for the trusted no-hash-reversal mode.
  void publish(const StoredBatch& batch) { published_.emplace(batch.digest, batch); }
  const StoredBatch* published(const Digest& digest) const;

  /// Found-replies sent by `responder`.
  std::uint64_t responses_served(ProcessId responder) const;
  std::uint64_t requests() const { return requests_; }

 private:
  Scheduler& scheduler_;
  VirtualTime delay_;
  std::size_t max_element_size_;
  std::map<ProcessId, Server*> servers_;
  std::map<ProcessId, std::uint64_t> served_;
  std::unordered_map<Digest, StoredBatch, DigestHash> verified_;
  std::unordered_map<Digest, StoredBatch, DigestHash> published_;
  std::uint64_t requests_ = 0;
};

/// Batches go to the ledger as fixed-size signed hashes; contents travel by
/// request. A digest becomes an epoch once f+1 distinct servers signed it.
class HashchainServer : public Server {
 public:
  explicit HashchainServer(ServerContext ctx);

  std::string kind() const override { return "hashchain"; }
  AddResult add(const Element& e) override;
  SetchainSnapshot get() const override { return state_.snapshot(); }
  void on_new_block(const Block& block) override;
  void submit_item(const BatchItem& item) override { add_to_batch(item); }
  BatchReply serve_batch(const Digest& digest, ProcessId requester) override;
  const SetchainState* state() const override { return &state_; }

  bool add_to_batch(const BatchItem& item) { return collector_.add(item); }
  const Collector& collector() const { return collector_; }

  /// Digests in consolidation order; entry j-1 became epoch j.
  const std::vector<Digest>& consolidated() const { return consolidated_order_; }
  bool knows(const Digest& digest) const { return hash_to_batch_.contains(digest); }
  const std::vector<ProcessId>* signers(const Digest& digest) const;
  bool signed_by_self(const Digest& digest) const { return signed_by_self_.contains(digest); }
  std::size_t pending_consolidations() const { return queue_.size(); }
  std::uint64_t self_signatures() const { return self_signatures_; }

 protected:
  /// Own batch bytes known under `digest`, or null.
  SharedBytes stored_bytes(const Digest& digest) const;

 private:
  void on_batch_ready(Batch batch);
  void process_tx(const LedgerTx& tx);
  bool record_signer(const Digest& h, ProcessId w);
  void fetch(const Digest& h, ProcessId from, bool count_on_success);
  void on_reply(std::uint64_t request, const Digest& h, ProcessId from, const BatchReply& reply);
  void learn(const StoredBatch& batch);
  void drain();
  void consolidate(const Digest& h);
  void retry(const Digest& h);

  SetchainState state_;
  Collector collector_;
  std::unordered_map<Digest, StoredBatch, DigestHash> hash_to_batch_;
  std::unordered_map<Digest, std::vector<ProcessId>, DigestHash> hash_to_signers_;
  std::unordered_set<Digest, DigestHash> consolidated_;
  std::vector<Digest> consolidated_order_;
  std::unordered_set<Digest, DigestHash> queued_;
  std::deque<Digest> queue_;
  std::unordered_set<Digest, DigestHash> signed_by_self_;
  struct OpenRequest {
    bool count_on_success = false;
  };
  std::unordered_map<std::uint64_t, OpenRequest> open_requests_;
  std::unordered_map<Digest, std::uint64_t, DigestHash> retry_cursor_;
  std::unordered_set<Digest, DigestHash> retry_active_;
  std::uint64_t next_request_ = 0;
  std::uint64_t self_signatures_ = 0;
};

}  // namespace setchain
