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

#include "setchain/server.hpp"

namespace setchain {

std::string to_string(AddStatus s) {
  switch (s) {
    case AddStatus::kAccepted: return "accepted";
    case AddStatus::kInvalid: return "invalid";
    case AddStatus::kDuplicate: return "duplicate";
    case AddStatus::kIgnored: return "ignored";
    case AddStatus::kLedgerRejected: return "ledger_rejected";
  }
  return "unknown";
}

BatchReply Server::serve_batch(const Digest&, ProcessId) { return BatchReply::not_found(); }

bool Server::append_tx(Bytes tx, const Digest& key, const std::vector<BatchItem>& items) {
  const AppendStatus st = ctx_.ledger->append(ctx_.id, std::move(tx));
  if (st != AppendStatus::kAccepted) {
    ++counters_.ledger_rejects;
    return false;
  }
  if (ctx_.tracker != nullptr) ctx_.tracker->on_batch_appended(ctx_.id, key, items);
  return true;
}

Collector::Collector(Scheduler& scheduler, std::uint64_t limit, VirtualTime timeout, FlushHandler on_flush)
    : scheduler_(scheduler), limit_(limit), timeout_(timeout), on_flush_(std::move(on_flush)) {}

bool Collector::add(const BatchItem& item) {
  const bool was_empty = batch_.empty();
  if (!batch_.add(item)) return false;
  if (was_empty) {
    const std::uint64_t gen = generation_;
    scheduler_.after(timeout_, [this, gen] {
      if (gen == generation_ && !batch_.empty()) flush();
    });
  }
  if (batch_.size() >= limit_) flush();
  return true;
}

void Collector::flush() {
  if (batch_.empty()) return;
  Batch out = std::move(batch_);
  batch_ = Batch{};
  ++generation_;
  ++flushes_;
  last_flush_ = scheduler_.now();
  on_flush_(std::move(out));
}

ExtractedItems split_items(const std::vector<BatchItem>& items) {
  ExtractedItems out;
  for (const BatchItem& it : items) {
    if (const auto* e = std::get_if<Element>(&it)) {
      out.elements.push_back(*e);
    } else {
      out.proofs.push_back(std::get<EpochProof>(it));
    }
  }
  return out;
}

}  // namespace setchain
