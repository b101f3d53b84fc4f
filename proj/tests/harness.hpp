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

// Small wiring helpers shared by the unit tests: a ledger, validator,
// batch network and a set of servers on one scheduler, without the
// metrics pipeline of the full simulator.

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "setchain/adversary.hpp"
#include "setchain/codec.hpp"
#include "setchain/hashchain.hpp"
#include "setchain/ledger.hpp"
#include "setchain/scheduler.hpp"
#include "setchain/server.hpp"
#include "setchain/validator.hpp"

namespace setchain::testing {

struct NullTracker final : TxTracker {
  void on_batch_appended(ProcessId, const Digest&, const std::vector<BatchItem>&) override {}
};

inline SystemConfig small_config(std::uint64_t n = 4) {
  SystemConfig cfg;
  cfg.n = n;
  cfg.collector_limit = n + 6;
  cfg.sending_rate = 100;
  cfg.injection_duration_s = 1;
  return cfg;
}

class Harness {
 public:
  Harness(SystemConfig cfg, Algorithm algorithm, std::map<ProcessId, AdversaryKind> faulty = {},
          std::set<ProcessId> targets = {})
      : cfg_(std::move(cfg)) {
    registry_ = crypto::KeyRegistry::build(cfg_.seed, cfg_.n, cfg_.n, &keys_);
    LedgerConfig lc;
    lc.nodes = cfg_.n;
    lc.block_capacity = cfg_.block_capacity;
    lc.block_interval = cfg_.block_interval();
    lc.network_delay = cfg_.network_delay();
    lc.produce_empty_blocks = cfg_.produce_empty_blocks;
    ledger_ = std::make_unique<Ledger>(scheduler_, lc);
    validator_ = std::make_unique<Validator>(registry_);
    network_ = std::make_unique<BatchNetwork>(scheduler_, cfg_.network_delay(), cfg_.max_element_size);
    const auto codec = make_codec(cfg_.codec, cfg_.brotli_quality);
    for (std::uint64_t i = 0; i < cfg_.n; ++i) {
      const ProcessId id{i};
      ServerContext ctx{id, keys_.at(id), cfg_, &scheduler_, ledger_.get(), validator_.get(), &tracker_,
                        network_.get(), codec};
      const auto it = faulty.find(id);
      servers_.push_back(it == faulty.end() ? make_server(algorithm, std::move(ctx))
                                            : make_adversary(it->second, algorithm, std::move(ctx), targets));
    }
    for (auto& s : servers_) {
      network_->attach(s.get());
      Server* raw = s.get();
      ledger_->subscribe(raw->id(), [raw](const Block& b) { raw->on_new_block(b); });
    }
  }

  void start() {
    for (auto& s : servers_) s->start();
    ledger_->start();
  }

  Element element(std::uint64_t client_index, const std::string& text) const {
    const ProcessId c{cfg_.n + client_index % cfg_.n};
    const Bytes payload(text.begin(), text.end());
    return Element::sign(c, payload, keys_.at(c), cfg_.max_element_size);
  }

  void run_for(VirtualTime d) { scheduler_.run_until(scheduler_.now() + d); }

  Server& server(std::uint64_t i) { return *servers_.at(i); }
  template <typename T>
  T& as(std::uint64_t i) {
    return dynamic_cast<T&>(*servers_.at(i));
  }

  const SystemConfig& config() const { return cfg_; }
  Scheduler& scheduler() { return scheduler_; }
  Ledger& ledger() { return *ledger_; }
  Validator& validator() { return *validator_; }
  BatchNetwork& network() { return *network_; }
  const crypto::KeyRegistry& registry() const { return registry_; }
  const crypto::KeyPair& key(ProcessId id) const { return keys_.at(id); }

 private:
  SystemConfig cfg_;
  Scheduler scheduler_;
  std::map<ProcessId, crypto::KeyPair> keys_;
  crypto::KeyRegistry registry_;
  NullTracker tracker_;
  std::unique_ptr<Ledger> ledger_;
  std::unique_ptr<Validator> validator_;
  std::unique_ptr<BatchNetwork> network_;
  std::vector<std::unique_ptr<Server>> servers_;
};

}  // namespace setchain::testing
