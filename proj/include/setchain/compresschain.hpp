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

#include "setchain/server.hpp"

namespace setchain {

/// Collector batches of elements and proofs, compressed into one ledger tx
/// each; every decodable tx is one epoch.
class CompresschainServer : public Server {
 public:
  explicit CompresschainServer(ServerContext ctx);

  std::string kind() const override { return "compresschain"; }
  AddResult add(const Element& e) override;
  SetchainSnapshot get() const override { return state_.snapshot(); }
  void on_new_block(const Block& block) override;
  void submit_item(const BatchItem& item) override { add_to_batch(item); }
  const SetchainState* state() const override { return &state_; }

  bool add_to_batch(const BatchItem& item) { return collector_.add(item); }
  const Collector& collector() const { return collector_; }

 private:
  void on_batch_ready(Batch batch);
  void process_tx(const LedgerTx& tx);

  SetchainState state_;
  Collector collector_;
};

}  // namespace setchain
