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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "setchain/adversary.hpp"
#include "setchain/client.hpp"
#include "setchain/config.hpp"
#include "setchain/corpus.hpp"
#include "setchain/ledger.hpp"
#include "setchain/metrics.hpp"
#include "setchain/state.hpp"

namespace setchain {

struct RunOptions {
  SystemConfig config;
  Algorithm algorithm = Algorithm::kHashchain;
  AdversaryMix adversaries;
  /// Pre-generated workload; must match CorpusSpec::from_config(config).
  std::shared_ptr<const Corpus> corpus;
  bool check_properties = true;
  bool keep_snapshots = false;
};

/// Outcome of one invariant over a run.
struct PropertyResult {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  bool skipped = false;
  std::vector<std::string> examples;
};

struct PropertyReport {
  std::vector<PropertyResult> results;

  bool ok() const;
  const PropertyResult* find(const std::string& name) const;
  std::string summary() const;
};

struct ServerSummary {
  ProcessId id;
  std::string kind;
  bool correct = true;
  ServerCounters counters;
  std::uint64_t epoch = 0;
  std::uint64_t set_size = 0;
  std::uint64_t proofs = 0;
};

struct RunResult {
  MetricsReport report;
  std::vector<ElementTrace> trace;
  PropertyReport properties;
  LedgerAudit ledger_audit;
  std::vector<ServerSummary> servers;
  /// Final get() of every correct server, when requested.
  std::map<ProcessId, SetchainSnapshot> snapshots;
  crypto::KeyRegistry registry;
  /// Certificate for the first committed element, taken from the reference
  /// correct server.
  std::optional<CommitCertificate> certificate;
  /// Hashchain: digests whose batch came from a Withholder and that some
  /// correct server consolidated (expected zero).
  std::uint64_t withheld_consolidations = 0;
  std::uint64_t withheld_batches = 0;
  VirtualTime settle_window{};
};

/// Time granted after the last commit for in-flight proofs and batch
/// requests to land everywhere.
VirtualTime settle_window(const SystemConfig& cfg);

std::shared_ptr<const Corpus> make_corpus(const SystemConfig& cfg);

/// Runs one simulation to drain (plus the settle window) or to the
/// virtual-time cap. Throws ConfigError on invalid configuration.
RunResult run(const RunOptions& options);

}  // namespace setchain
