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

#include "setchain/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace setchain {

namespace {

std::string opt_time(const std::optional<VirtualTime>& t) { return t ? fixed3(to_seconds(*t)) : std::string{}; }

std::string opt_value(const std::optional<double>& v) { return v ? fixed3(*v) : std::string{}; }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string elements_csv(const std::vector<ElementTrace>& trace) {
  std::ostringstream out;
  out << "id,client,server,size,t_add,t_mempool_1,t_mempool_quorum,t_mempool_all,t_ledger,t_commit,epoch,"
         "add_status,accepted_by_correct\n";
  for (const ElementTrace& t : trace) {
    out << t.id << ',' << t.client.value << ',' << t.server.value << ',' << t.size << ','
        << fixed3(to_seconds(t.t_add)) << ',' << opt_time(t.t_mempool_1) << ',' << opt_time(t.t_mempool_quorum) << ','
        << opt_time(t.t_mempool_all) << ',' << opt_time(t.t_ledger) << ',' << opt_time(t.t_commit) << ','
        << t.epoch << ',' << to_string(t.add_status) << ',' << (t.accepted_by_correct ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string throughput_csv(const ThroughputSeries& series) {
  std::ostringstream out;
  out << "second,commits,rolling9\n";
  for (std::size_t s = 0; s < series.commits.size(); ++s) {
    out << s << ',' << series.commits[s] << ',' << fixed3(series.rolling9[s]) << '\n';
  }
  return out.str();
}

std::string summary_csv(const Scenario& scenario, const RunResult& result) {
  const MetricsReport& r = result.report;
  const RunCounters& c = r.counters;
  std::ostringstream out;
  out << "metric,value\n";
  out << "algorithm," << to_string(scenario.algorithm) << '\n';
  out << "n," << scenario.config.n << '\n';
  out << "f," << scenario.config.fault_bound() << '\n';
  out << "seed," << scenario.config.seed << '\n';
  out << "adversaries," << to_string(scenario.adversaries) << '\n';
  out << "saturated," << (r.saturated ? 1 : 0) << '\n';
  out << "end_time_s," << fixed3(r.end_time_s) << '\n';
  out << "drained_at_s," << (r.drained_at_s >= 0 ? fixed3(r.drained_at_s) : std::string{}) << '\n';
  out << "efficiency_50," << fixed3(r.eff_50) << '\n';
  out << "efficiency_75," << fixed3(r.eff_75) << '\n';
  out << "efficiency_100," << fixed3(r.eff_100) << '\n';
  for (const StageLatency& l : r.latency) {
    const std::string p = "latency_" + to_string(l.stage) + "_";
    out << p << "count," << l.count << '\n';
    out << p << "p50_s," << opt_value(l.p50) << '\n';
    out << p << "p90_s," << opt_value(l.p90) << '\n';
    out << p << "p99_s," << opt_value(l.p99) << '\n';
    out << p << "max_s," << opt_value(l.max) << '\n';
  }
  out << "commit_first_s," << opt_value(r.marks.first) << '\n';
  for (std::size_t i = 0; i < r.marks.fractions.size(); ++i) {
    out << "commit_" << (i + 1) * 10 << "pct_s," << opt_value(r.marks.fractions[i]) << '\n';
  }
  out << "generated," << c.generated << '\n';
  out << "accepted," << c.accepted << '\n';
  out << "rejected," << c.rejected << '\n';
  out << "committed," << c.committed << '\n';
  out << "uncommitted," << (c.generated - c.rejected - std::min(c.committed, c.generated - c.rejected)) << '\n';
  out << "mempool_reject," << c.mempool_reject << '\n';
  out << "garbage_tx," << c.garbage_tx << '\n';
  out << "bad_batch_response," << c.bad_batch_response << '\n';
  out << "batch_responses_served_by_faulty," << c.batch_responses_served_by_faulty << '\n';
  out << "blocks," << c.blocks << '\n';
  out << "epochs," << c.epochs << '\n';
  out << "ledger_bytes," << c.ledger_bytes << '\n';
  out << "signature_verifications," << c.signature_verifications << '\n';
  out << "brotli_quality," << r.brotli_quality << '\n';
  out << "properties_ok," << (result.properties.ok() ? 1 : 0) << '\n';
  out << "ledger_audit_ok," << (result.ledger_audit.ok() ? 1 : 0) << '\n';
  return out.str();
}

std::string properties_csv(const PropertyReport& report) {
  std::ostringstream out;
  out << "property,checked,violations,skipped\n";
  for (const PropertyResult& p : report.results) {
    out << p.name << ',' << p.checked << ',' << p.violations << ',' << (p.skipped ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string snapshot_dump(ProcessId server, const SetchainSnapshot& snap) {
  std::ostringstream out;
  out << "server " << server.value << '\n';
  out << "epochs " << snap.epoch << '\n';
  out << "set " << snap.the_set.size() << '\n';
  for (std::uint64_t j = 1; j <= snap.epoch; ++j) {
    const Epoch& g = snap.at(j);
    std::vector<std::string> digests;
    digests.reserve(g.size());
    for (const Element& e : g) digests.push_back(to_hex(crypto::sha512(e.canonical_bytes())));
    std::sort(digests.begin(), digests.end());
    out << "epoch " << j << ' ' << digests.size() << ' ' << to_hex(epoch_digest(j, g)) << '\n';
    for (const std::string& d : digests) out << d << '\n';
  }
  out << "proofs " << snap.proofs.size() << '\n';
  for (const EpochProof& p : snap.proofs) {
    out << p.epoch_no << ' ' << p.signer.value << ' ' << to_hex(p.proof_sig) << '\n';
  }
  return out.str();
}

void write_run(const Scenario& scenario, const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "snapshots");
  write_file(dir / "scenario.txt", to_text(scenario));
  write_file(dir / "elements.csv", elements_csv(result.trace));
  write_file(dir / "throughput.csv", throughput_csv(result.report.throughput));
  write_file(dir / "summary.csv", summary_csv(scenario, result));
  write_file(dir / "properties.csv", properties_csv(result.properties));
  write_file(dir / "registry.txt", result.registry.to_text());
  if (result.certificate) {
    const Bytes b = result.certificate->serialize();
    write_file(dir / "certificate.bin", std::string(b.begin(), b.end()));
  }
  for (const auto& [id, snap] : result.snapshots) {
    write_file(dir / "snapshots" / ("server_" + std::to_string(id.value) + ".txt"), snapshot_dump(id, snap));
  }
}

}  // namespace setchain
