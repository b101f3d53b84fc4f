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

#include "setchain/compresschain.hpp"

#include <unordered_set>

namespace setchain {

CompresschainServer::CompresschainServer(ServerContext ctx)
    : Server(std::move(ctx)),
      collector_(*ctx_.scheduler, ctx_.config.collector_limit, ctx_.config.collector_timeout(),
                 [this](Batch b) { on_batch_ready(std::move(b)); }) {
  if (!ctx_.codec) throw ConfigError("compresschain server needs a codec");
}

AddResult CompresschainServer::add(const Element& e) {
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

void CompresschainServer::on_batch_ready(Batch batch) {
  if (batch.empty()) return;
  Bytes tx = encode_compressed_tx(*ctx_.codec, batch.serialize());
  if (tx.size() > ctx_.config.block_capacity && batch.size() > 1) {
    ++counters_.batches_split;
    auto [left, right] = batch.split();
    on_batch_ready(std::move(left));
    on_batch_ready(std::move(right));
    return;
  }
  const Digest key = crypto::sha512(tx);
  append_tx(std::move(tx), key, batch.items());
}

void CompresschainServer::on_new_block(const Block& block) {
  for (const LedgerTx& tx : block.txs) process_tx(tx);
}

void CompresschainServer::process_tx(const LedgerTx& tx) {
  const auto raw = decode_compressed_tx(*tx.bytes);
  std::optional<std::vector<BatchItem>> items;
  if (raw) items = decode_batch(*raw, ctx_.config.max_element_size);
  if (!items || items->empty()) {
    ++counters_.garbage_tx;
    return;
  }

  ExtractedItems parts = split_items(*items);
  for (const EpochProof& p : parts.proofs) {
    if (ctx_.validator->proof(p, state_.epoch_digest_of(p.epoch_no))) {
      state_.add_proof(p);
    } else {
      ++counters_.proofs_dropped;
    }
  }
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
  notify_epoch(j, *state_.epoch_contents(j));
  const Digest& d = *state_.epoch_digest_of(j);
  add_to_batch(EpochProof{j, crypto::sign(ctx_.key, ByteView{d.data(), d.size()}), ctx_.id});
}

}  // namespace setchain
