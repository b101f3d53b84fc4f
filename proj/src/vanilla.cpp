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

#include "setchain/vanilla.hpp"

#include <unordered_set>

namespace setchain {

AddResult VanillaServer::add(const Element& e) {
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
  submit_item(interned);
  return {AddStatus::kAccepted};
}

void VanillaServer::submit_item(const BatchItem& item) {
  Bytes tx = encode_batch_item(item);
  const Digest key = crypto::sha512(tx);
  append_tx(std::move(tx), key, {item});
}

void VanillaServer::on_new_block(const Block& block) {
  std::vector<Element> elements;
  for (const LedgerTx& tx : block.txs) {
    const auto item = decode_batch_item(*tx.bytes, ctx_.config.max_element_size);
    if (!item) {
      ++counters_.garbage_tx;
      continue;
    }
    if (const auto* p = std::get_if<EpochProof>(&*item)) {
      if (ctx_.validator->proof(*p, state_.epoch_digest_of(p->epoch_no))) {
        state_.add_proof(*p);
      } else {
        ++counters_.proofs_dropped;
      }
    } else {
      elements.push_back(std::get<Element>(*item));
    }
  }

  ctx_.validator->prevalidate(elements);
  Epoch g;
  std::unordered_set<Element> in_g;
  for (Element& e : elements) {
    if (!ctx_.validator->element(e) || state_.in_history(e) || in_g.contains(e)) continue;
    in_g.insert(e);
    g.push_back(e);
  }
  for (const Element& e : g) state_.add_to_set(e);
  const std::uint64_t j = state_.append_epoch(g);
  notify_epoch(j, *state_.epoch_contents(j));
  const Digest& d = *state_.epoch_digest_of(j);
  submit_item(EpochProof{j, crypto::sign(ctx_.key, ByteView{d.data(), d.size()}), ctx_.id});
}

}  // namespace setchain
