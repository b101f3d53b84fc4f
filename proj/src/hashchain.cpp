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

#include "setchain/hashchain.hpp"

#include <algorithm>

namespace setchain {

Bytes encode_hash_batch(const HashBatchTx& hb) {
  Bytes out;
  out.reserve(kHashBatchSize);
  put_u8(out, kHashBatchTag);
  put_bytes(out, ByteView{hb.digest.data(), hb.digest.size()});
  put_bytes(out, ByteView{hb.sig.data(), hb.sig.size()});
  put_u64_be(out, hb.signer.value);
  out.resize(kHashBatchSize, 0);
  return out;
}

std::optional<HashBatchTx> decode_hash_batch(ByteView bytes) {
  if (bytes.size() != kHashBatchSize) return std::nullopt;
  ByteReader r(bytes);
  auto tag = r.u8();
  if (!tag || *tag != kHashBatchTag) return std::nullopt;
  auto digest = r.array<kDigestSize>();
  auto sig = r.array<kSignatureSize>();
  auto signer = r.u64_be();
  if (!digest || !sig || !signer) return std::nullopt;
  if (bytes[kHashBatchSize - 2] != 0 || bytes[kHashBatchSize - 1] != 0) return std::nullopt;
  return HashBatchTx{*digest, *sig, ProcessId{*signer}};
}

HashBatchTx make_hash_batch(const Digest& digest, ProcessId signer, const crypto::KeyPair& key) {
  return HashBatchTx{digest, crypto::sign(key, ByteView{digest.data(), digest.size()}), signer};
}

void BatchNetwork::attach(Server* server) { servers_[server->id()] = server; }

void BatchNetwork::request(ProcessId from, ProcessId to, const Digest& digest, ReplyHandler on_reply) {
  ++requests_;
  scheduler_.after(
      delay_,
      [this, from, to, digest, cb = std::move(on_reply)]() mutable {
        const auto it = servers_.find(to);
        if (it == servers_.end()) return;
        BatchReply reply = it->second->serve_batch(digest, from);
        if (reply.kind == BatchReply::Kind::kNoReply) return;
        if (reply.kind == BatchReply::Kind::kFound) ++served_[to];
        scheduler_.after(delay_, [cb = std::move(cb), reply = std::move(reply)] { cb(reply); }, from.value);
      },
      to.value);
}

std::optional<StoredBatch> BatchNetwork::check(const Digest& digest, const SharedBytes& bytes) {
  if (!bytes) return std::nullopt;
  if (const auto it = verified_.find(digest); it != verified_.end()) {
    if (it->second.bytes == bytes) return it->second;
    if (crypto::sha512(*bytes) != digest) return std::nullopt;
    return it->second;
  }
  if (crypto::sha512(*bytes) != digest) return std::nullopt;
  auto decoded = decode_batch(*bytes, max_element_size_);
  StoredBatch stored{digest, bytes,
                     std::make_shared<const std::vector<BatchItem>>(decoded ? std::move(*decoded)
                                                                            : std::vector<BatchItem>{})};
  verified_.emplace(digest, stored);
  return stored;
}

const StoredBatch* BatchNetwork::published(const Digest& digest) const {
  const auto it = published_.find(digest);
  return it == published_.end() ? nullptr : &it->second;
}

std::uint64_t BatchNetwork::responses_served(ProcessId responder) const {
  const auto it = served_.find(responder);
  return it == served_.end() ? 0 : it->second;
}

HashchainServer::HashchainServer(ServerContext ctx)
    : Server(std::move(ctx)),
      collector_(*ctx_.scheduler, ctx_.config.collector_limit, ctx_.config.collector_timeout(),
                 [this](Batch b) { on_batch_ready(std::move(b)); }) {
  if (ctx_.network == nullptr) throw ConfigError("hashchain server needs a batch network");
}

AddResult HashchainServer::add(const Element& e) {
  Element interned = e;
  if (!ctx_.validator->element(interned)) {
    ++counters_.adds_rejected;
    return {AddStatus::kInvalid};
  }
  if (state_.in_set(interned)) {
    ++counters_.adds_rejected;
    return {AddStatus::kDuplicate};
  }
  state_.add_to_set(interned);
  ++counters_.adds_accepted;
  add_to_batch(interned);
  return {AddStatus::kAccepted};
}

const std::vector<ProcessId>* HashchainServer::signers(const Digest& digest) const {
  const auto it = hash_to_signers_.find(digest);
  return it == hash_to_signers_.end() ? nullptr : &it->second;
}

SharedBytes HashchainServer::stored_bytes(const Digest& digest) const {
  const auto it = hash_to_batch_.find(digest);
  return it == hash_to_batch_.end() ? nullptr : it->second.bytes;
}

BatchReply HashchainServer::serve_batch(const Digest& digest, ProcessId) {
  SharedBytes b = stored_bytes(digest);
  return b ? BatchReply::found(std::move(b)) : BatchReply::not_found();
}

void HashchainServer::on_batch_ready(Batch batch) {
  if (batch.empty()) return;
  auto bytes = std::make_shared<const Bytes>(batch.serialize());
  const Digest h = crypto::sha512(*bytes);
  StoredBatch stored{h, bytes, std::make_shared<const std::vector<BatchItem>>(batch.items())};
  hash_to_batch_.emplace(h, stored);
  ctx_.network->publish(stored);
  if (signed_by_self_.insert(h).second) {
    ++self_signatures_;
    append_tx(encode_hash_batch(make_hash_batch(h, ctx_.id, ctx_.key)), h, *stored.items);
  }
}

void HashchainServer::on_new_block(const Block& block) {
  for (const LedgerTx& tx : block.txs) {
    process_tx(tx);
    drain();
  }
}

void HashchainServer::process_tx(const LedgerTx& tx) {
  const auto hb = decode_hash_batch(*tx.bytes);
  if (!hb) {
    ++counters_.garbage_tx;
    return;
  }
  if (!ctx_.validator->server_signature(hb->signer, ByteView{hb->digest.data(), hb->digest.size()}, hb->sig)) {
    ++counters_.invalid_hash_batches;
    return;
  }
  const Digest& h = hb->digest;
  if (!knows(h) && ctx_.config.hashchain_no_hash_reversal) {
    if (const StoredBatch* b = ctx_.network->published(h)) learn(*b);
  }
  if (ctx_.config.hashchain_literal_counting) {
    if (knows(h)) {
      record_signer(h, hb->signer);
    } else {
      fetch(h, hb->signer, true);
    }
    return;
  }
  if (record_signer(h, hb->signer) && !knows(h)) fetch(h, hb->signer, false);
}

bool HashchainServer::record_signer(const Digest& h, ProcessId w) {
  auto& list = hash_to_signers_[h];
  if (std::find(list.begin(), list.end(), w) != list.end()) return false;
  list.push_back(w);
  if (list.size() == ctx_.config.quorum() && !consolidated_.contains(h) && queued_.insert(h).second) {
    queue_.push_back(h);
  }
  return true;
}

void HashchainServer::fetch(const Digest& h, ProcessId from, bool count_on_success) {
  if (from == ctx_.id) return;
  const std::uint64_t id = next_request_++;
  open_requests_.emplace(id, OpenRequest{count_on_success});
  ++counters_.batch_requests;
  ctx_.network->request(ctx_.id, from, h, [this, id, h, from](const BatchReply& reply) { on_reply(id, h, from, reply); });
  ctx_.scheduler->after(
      ctx_.config.request_timeout(),
      [this, id] {
        if (open_requests_.erase(id) != 0) ++counters_.batch_timeouts;
      },
      ctx_.id.value);
}

void HashchainServer::on_reply(std::uint64_t request, const Digest& h, ProcessId from, const BatchReply& reply) {
  // A reply after the timeout still teaches the content; only the literal
  // signer count is tied to the open request.
  const auto it = open_requests_.find(request);
  const bool count = it != open_requests_.end() && it->second.count_on_success;
  if (it != open_requests_.end()) open_requests_.erase(it);
  if (reply.kind != BatchReply::Kind::kFound) return;
  const auto stored = ctx_.network->check(h, reply.bytes);
  if (!stored) {
    ++counters_.bad_batch_response;
    return;
  }
  if (!knows(h)) learn(*stored);
  if (count) record_signer(h, from);
  drain();
}

void HashchainServer::learn(const StoredBatch& batch) {
  hash_to_batch_.emplace(batch.digest, batch);
  ExtractedItems parts = split_items(*batch.items);
  for (const EpochProof& p : parts.proofs) {
    if (ctx_.validator->proof(p, state_.epoch_digest_of(p.epoch_no))) {
      state_.add_proof(p);
    } else {
      ++counters_.proofs_dropped;
    }
  }
  ctx_.validator->prevalidate(parts.elements);
  for (Element& e : parts.elements) {
    if (ctx_.validator->element(e)) state_.add_to_set(e);
  }
  if (signed_by_self_.insert(batch.digest).second) {
    ++self_signatures_;
    append_tx(encode_hash_batch(make_hash_batch(batch.digest, ctx_.id, ctx_.key)), batch.digest, *batch.items);
  }
}

void HashchainServer::drain() {
  while (!queue_.empty()) {
    const Digest h = queue_.front();
    if (!knows(h)) {
      if (!retry_active_.contains(h)) retry(h);
      return;
    }
    queue_.pop_front();
    queued_.erase(h);
    consolidate(h);
  }
}

void HashchainServer::consolidate(const Digest& h) {
  const StoredBatch& batch = hash_to_batch_.at(h);
  ExtractedItems parts = split_items(*batch.items);
  ctx_.validator->prevalidate(parts.elements);
  Epoch g;
  std::unordered_set<Element> in_g;
  for (Element& e : parts.elements) {
    if (!ctx_.validator->element(e) || state_.in_history(e) || in_g.contains(e)) continue;
    in_g.insert(e);
    g.push_back(e);
  }
  for (const Element& e : g) state_.add_to_set(e);
  const std::uint64_t j = state_.append_epoch(std::move(g));
  consolidated_.insert(h);
  consolidated_order_.push_back(h);
  notify_epoch(j, *state_.epoch_contents(j));
  const Digest& d = *state_.epoch_digest_of(j);
  add_to_batch(EpochProof{j, crypto::sign(ctx_.key, ByteView{d.data(), d.size()}), ctx_.id});
}

void HashchainServer::retry(const Digest& h) {
  if (knows(h) || consolidated_.contains(h)) {
    retry_active_.erase(h);
    return;
  }
  retry_active_.insert(h);
  const auto& list = hash_to_signers_[h];
  std::uint64_t& cursor = retry_cursor_[h];
  for (std::size_t tries = 0; tries < list.size(); ++tries) {
    const ProcessId target = list[cursor++ % list.size()];
    if (target == ctx_.id) continue;
    fetch(h, target, false);
    break;
  }
  ctx_.scheduler->after(ctx_.config.request_timeout(), [this, h] { retry(h); }, ctx_.id.value);
}

}  // namespace setchain
