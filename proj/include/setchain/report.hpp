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

#include <filesystem>
#include <string>
#include <vector>

#include "setchain/scenario.hpp"
#include "setchain/sim.hpp"

namespace setchain {

/// Fixed-point with three decimals, as used in every CSV.
std::string fixed3(double v);

/// id,client,server,size,t_add,t_mempool_1,t_mempool_quorum,t_mempool_all,
/// t_ledger,t_commit,epoch,add_status,accepted_by_correct. Times in
/// seconds; unset stages are empty fields.
std::string elements_csv(const std::vector<ElementTrace>& trace);

/// second,commits,rolling9
std::string throughput_csv(const ThroughputSeries& series);

/// metric,value rows in a fixed order.
std::string summary_csv(const Scenario& scenario, const RunResult& result);

/// property,checked,violations,skipped
std::string properties_csv(const PropertyReport& report);

/// Text dump of one server's get(): per epoch the sorted SHA-512 digests of
/// its elements, then every proof as "<epoch> <signer> <signature hex>".
std::string snapshot_dump(ProcessId server, const SetchainSnapshot& snap);

/// Writes scenario.txt, elements.csv, throughput.csv, summary.csv,
/// properties.csv, registry.txt, certificate.bin (when one exists) and
/// snapshots/server_<id>.txt into `dir`, creating it if needed.
void write_run(const Scenario& scenario, const RunResult& result, const std::filesystem::path& dir);

}  // namespace setchain
