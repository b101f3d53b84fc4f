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

/// One ledger tx per element and per epoch-proof; every delivered block is
/// one epoch.
class VanillaServer : public Server {
 public:
  explicit VanillaServer(ServerContext ctx) : Server(std::move(ctx)) {}

  std::string kind() const override { return "vanilla"; }
  AddResult add(const Element& e) override;
  SetchainSnapshot get() const override { return state_.snapshot(); }
  void on_new_block(const Block& block) override;
  void submit_item(const BatchItem& item) override;
  const SetchainState* state() const override { return &state_; }

 private:
  SetchainState state_;
};

}  // namespace setchain
