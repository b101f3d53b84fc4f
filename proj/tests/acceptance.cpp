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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion not listed with --known-fail passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setchain/analysis.hpp"
#include "setchain/client.hpp"
#include "setchain/report.hpp"
#include "setchain/sim.hpp"

namespace {

using namespace setchain;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- analysis

Outcome analytical() {
  analysis::AnalysisParams base;
  analysis::AnalysisParams c500 = base;
  c500.c = 500;
  c500.r = 3.5;
  const double tv = analysis::vanilla_throughput(base);
  const double tc100 = analysis::compress_throughput(base);
  const double tc500 = analysis::compress_throughput(c500);
  const double th100 = analysis::hash_throughput(base);
  const double th500 = analysis::hash_throughput(c500);
  const bool ok = std::abs(tv - 955) <= 0.5 && std::abs(tc100 - 2497) <= 1 && std::abs(tc500 - 3330) <= 1 &&
                  std::abs(th100 - 27157) <= 1 && std::abs(th500 - 147857) <= 1 &&
                  std::abs(th500 / tv - 155) <= 0.5 && std::abs(th500 / tc500 - 44) <= 0.5;
  return {ok, fmt("T_v=%.3f T_c100=%.3f T_c500=%.3f T_h100=%.3f T_h500=%.3f Th/Tv=%.3f Th/Tc=%.3f", tv, tc100, tc500,
                  th100, th500, th500 / tv, th500 / tc500)};
}

Outcome block_sweep() {
  analysis::AnalysisParams p;
  p.c = 500;
  p.r = 3.5;
  bool monotone = true;
  double last = 0;
  for (double mib = 0.5; mib <= 128; mib *= 2) {
    p.C = mib * 1024 * 1024;
    const double th = analysis::hash_throughput(p);
    monotone = monotone && th > last;
    last = th;
  }
  return {monotone && last > 3.0e7, fmt("T_h(C=128MiB,c=500)=%.1f el/s, monotone=%d", last, monotone)};
}

// ---------------------------------------------------------------- campaign

struct CampaignRun {
  Algorithm algorithm = Algorithm::kVanilla;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string mix;
  bool saturated = false;
  bool properties_ok = false;
  bool audit_ok = false;
  std::string failures;
  std::uint64_t withheld_batches = 0;
  std::uint64_t withheld_consolidations = 0;
  std::optional<CommitCertificate> certificate;
  crypto::KeyRegistry registry;
};

struct Campaign {
  std::vector<CampaignRun> runs;
  double wall_s = 0;
};

SystemConfig campaign_config(std::uint64_t n, std::uint64_t seed) {
  SystemConfig cfg;
  cfg.n = n;
  cfg.sending_rate = 300;
  cfg.injection_duration_s = 5;
  cfg.seed = seed;
  return cfg;
}

Campaign run_campaign(std::uint64_t seeds) {
  Campaign c;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t n : {4, 7, 10}) {
    const std::uint64_t f = (n - 1) / 3;
    const std::vector<std::string> mixes{"none", "Withholder:1", "GarbageAppender:1", "ForgedProofSpammer:1",
                                         "SelectiveServer:" + std::to_string(f)};
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      const SystemConfig cfg = campaign_config(n, seed);
      const auto corpus = make_corpus(cfg);
      for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
        for (const std::string& mix : mixes) {
          RunOptions o;
          o.config = cfg;
          o.algorithm = alg;
          o.adversaries = parse_adversary_mix(mix);
          o.corpus = corpus;
          const RunResult r = run(o);
          CampaignRun cr;
          cr.algorithm = alg;
          cr.n = n;
          cr.seed = seed;
          cr.mix = mix;
          cr.saturated = r.report.saturated;
          cr.properties_ok = r.properties.ok();
          cr.audit_ok = r.ledger_audit.ok();
          if (!cr.properties_ok) cr.failures = r.properties.summary();
          for (const std::string& v : r.ledger_audit.violations) cr.failures += " ledger:" + v;
          cr.withheld_batches = r.withheld_batches;
          cr.withheld_consolidations = r.withheld_consolidations;
          cr.certificate = r.certificate;
          cr.registry = r.registry;
          c.runs.push_back(std::move(cr));
        }
      }
    }
  }
  c.wall_s = seconds_since(t0);
  return c;
}

std::string label(const CampaignRun& r) {
  return fmt("%s n=%llu seed=%llu mix=%s", to_string(r.algorithm).c_str(), static_cast<unsigned long long>(r.n),
             static_cast<unsigned long long>(r.seed), r.mix.c_str());
}

Outcome property_suite(const Campaign& c) {
  std::uint64_t bad = 0;
  std::string first;
  for (const CampaignRun& r : c.runs) {
    if (r.properties_ok && !r.saturated) continue;
    ++bad;
    if (first.empty()) first = label(r) + (r.saturated ? " saturated " : " ") + r.failures;
  }
  return {bad == 0 && !c.runs.empty(),
          fmt("%zu runs, %llu with violations or saturation, %.1f s wall%s%s", c.runs.size(),
              static_cast<unsigned long long>(bad), c.wall_s, first.empty() ? "" : "; first: ", first.c_str())};
}

Outcome ledger_properties(const Campaign& c) {
  std::uint64_t bad = 0;
  std::string first;
  for (const CampaignRun& r : c.runs) {
    if (r.audit_ok) continue;
    ++bad;
    if (first.empty()) first = label(r) + " " + r.failures;
  }
  return {bad == 0 && !c.runs.empty(), fmt("%zu runs audited, %llu violating%s%s", c.runs.size(),
                                           static_cast<unsigned long long>(bad), first.empty() ? "" : "; first: ",
                                           first.c_str())};
}

// ---------------------------------------------------------------- determinism

Outcome determinism() {
  std::uint64_t diffs = 0;
  std::uint64_t compared = 0;
  for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
    for (const char* mix : {"none", "GarbageAppender:1"}) {
      RunOptions o;
      o.config.sending_rate = 1000;
      o.config.injection_duration_s = 10;
      o.config.seed = 42;
      o.algorithm = alg;
      o.adversaries = parse_adversary_mix(mix);
      const Scenario sc{o.config, o.algorithm, o.adversaries};
      const RunResult a = run(o);
      const RunResult b = run(o);
      diffs += elements_csv(a.trace) != elements_csv(b.trace);
      diffs += throughput_csv(a.report.throughput) != throughput_csv(b.report.throughput);
      diffs += summary_csv(sc, a) != summary_csv(sc, b);
      compared += 3;
    }
  }
  return {diffs == 0, fmt("%llu file pairs compared, %llu differ", static_cast<unsigned long long>(compared),
                          static_cast<unsigned long long>(diffs))};
}

// ---------------------------------------------------------------- efficiency

RunResult base_run(Algorithm alg, double rate, std::uint64_t collector = 100) {
  RunOptions o;
  o.config.sending_rate = rate;
  o.config.collector_limit = collector;
  o.algorithm = alg;
  return run(o);
}

Outcome efficiency_shape() {
  bool ok = true;
  std::string detail;
  for (double rate : {500.0, 1000.0}) {
    for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
      const RunResult r = base_run(alg, rate);
      ok = ok && r.report.eff_75 == 1.0;
      detail += fmt("%s@%.0f eff75=%.3f; ", to_string(alg).c_str(), rate, r.report.eff_75);
    }
  }
  const double v = base_run(Algorithm::kVanilla, 10000).report.eff_100;
  const double c = base_run(Algorithm::kCompresschain, 10000).report.eff_100;
  const double h = base_run(Algorithm::kHashchain, 10000).report.eff_100;
  const double h500 = base_run(Algorithm::kHashchain, 10000, 500).report.eff_100;
  ok = ok && v < c && c < h && h500 == 1.0;
  detail += fmt("@10000 eff100 vanilla=%.3f compresschain=%.3f hashchain=%.3f hashchain(c=500)=%.3f", v, c, h, h500);
  return {ok, detail};
}

Outcome capacity() {
  RunOptions o;
  o.config.sending_rate = 2000;
  o.config.element_size_mode = ElementSizeMode::fixed(438);
  o.algorithm = Algorithm::kVanilla;
  o.check_properties = false;
  const RunResult r = run(o);
  std::vector<double> commits;
  for (const ElementTrace& t : r.trace) {
    if (t.t_commit) commits.push_back(to_seconds(*t.t_commit));
  }
  std::sort(commits.begin(), commits.end());
  const double tv = analysis::vanilla_throughput({});
  if (commits.size() < 100) return {false, "too few commits"};
  // Steady state: the middle 80% of commits.
  const std::size_t lo = commits.size() / 10;
  const std::size_t hi = commits.size() * 9 / 10;
  const double measured = static_cast<double>(hi - lo) / (commits[hi] - commits[lo]);
  const double dev = measured / tv - 1.0;
  return {std::abs(dev) <= 0.15,
          fmt("measured %.1f el/s over [%.2f s, %.2f s] vs analytical %.1f (%+.1f%%)", measured, commits[lo],
              commits[hi], tv, 100 * dev)};
}

Outcome latency() {
  bool ok = true;
  std::string detail;
  for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
    const RunResult r = base_run(alg, 1250);
    const auto stage1 = percentile(latency_cdf(r.trace, Stage::kMempool1), 50).value_or(1e9);
    const auto p99 = percentile(latency_cdf(r.trace, Stage::kCommit), 99).value_or(1e9);
    if (alg == Algorithm::kVanilla) {
      ok = ok && stage1 < 0.050;
    } else {
      ok = ok && stage1 > 0 && p99 <= 4.0;
    }
    detail += fmt("%s stage1_p50=%.3f commit_p99=%.3f; ", to_string(alg).c_str(), stage1, p99);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- byzantine

Outcome byzantine(const Campaign& c) {
  std::uint64_t withholder_runs = 0, bad_withholder = 0;
  for (const CampaignRun& r : c.runs) {
    if (r.algorithm != Algorithm::kHashchain || r.mix != "Withholder:1") continue;
    ++withholder_runs;
    if (r.withheld_consolidations != 0 || r.withheld_batches == 0 || !r.properties_ok) ++bad_withholder;
  }
  std::uint64_t wrong_runs = 0, bad_wrong = 0, detected = 0;
  for (std::uint64_t n : {4, 7, 10}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunOptions o;
      o.config = campaign_config(n, seed);
      o.algorithm = Algorithm::kHashchain;
      o.adversaries = parse_adversary_mix("WrongBatchServer:1");
      const RunResult r = run(o);
      ++wrong_runs;
      const auto& k = r.report.counters;
      detected += k.bad_batch_response;
      if (k.bad_batch_response == 0 || k.bad_batch_response != k.batch_responses_served_by_faulty ||
          !r.properties.ok()) {
        ++bad_wrong;
      }
    }
  }
  return {withholder_runs > 0 && bad_withholder == 0 && bad_wrong == 0,
          fmt("withholder: %llu runs, %llu failing; wrong-batch: %llu runs, %llu failing, %llu bad responses detected",
              static_cast<unsigned long long>(withholder_runs), static_cast<unsigned long long>(bad_withholder),
              static_cast<unsigned long long>(wrong_runs), static_cast<unsigned long long>(bad_wrong),
              static_cast<unsigned long long>(detected))};
}

// ---------------------------------------------------------------- client

struct CertSource {
  CommitCertificate cert;
  std::uint64_t f;
  std::uint64_t n;
  std::uint64_t seed;
  const crypto::KeyRegistry* registry;
};

Signature random_sig(std::mt19937_64& rng) {
  Signature s{};
  for (auto& b : s) b = static_cast<std::uint8_t>(rng());
  return s;
}

// Keeps f of the certificate's valid distinct-signer proofs.
std::vector<EpochProof> keep_f(const CertSource& src, std::mt19937_64& rng) {
  const auto signers = valid_signers(src.cert.epoch_no, src.cert.epoch_elements, src.cert.proofs, *src.registry);
  std::vector<EpochProof> out;
  std::set<ProcessId> used;
  std::vector<EpochProof> pool = src.cert.proofs;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (const EpochProof& p : pool) {
    if (out.size() == src.f) break;
    if (std::find(signers.begin(), signers.end(), p.signer) == signers.end() || !used.insert(p.signer).second) continue;
    out.push_back(p);
  }
  return out;
}

Outcome client_verification(const Campaign& c) {
  std::vector<CertSource> sources;
  std::uint64_t clean = 0, clean_ok = 0;
  for (const CampaignRun& r : c.runs) {
    if (!r.certificate) continue;
    ++clean;
    const std::uint64_t f = (r.n - 1) / 3;
    const auto parsed = CommitCertificate::parse(r.certificate->serialize());
    if (parsed && verify_certificate(*parsed, f, r.registry)) ++clean_ok;
    if (r.mix == "none") sources.push_back({*r.certificate, f, r.n, r.seed, &r.registry});
  }

  // Every element of every epoch that a correct server holds f+1 proofs for
  // certifies from that server's snapshot, and the certified epoch agrees
  // with every other correct server.
  RunOptions o;
  o.config = campaign_config(7, 3);
  o.algorithm = Algorithm::kHashchain;
  o.keep_snapshots = true;
  const RunResult full = run(o);
  const std::uint64_t f7 = 2;
  std::uint64_t committed = 0;
  for (const ElementTrace& t : full.trace) committed += t.t_commit.has_value();
  std::uint64_t full_certs = 0, full_ok = 0;
  bool coverage = !full.snapshots.empty();
  for (const auto& [id, snap] : full.snapshots) {
    std::uint64_t certified_here = 0;
    for (std::uint64_t j = 1; j <= snap.epoch; ++j) {
      const Epoch& g = snap.at(j);
      const std::vector<EpochProof> proofs(snap.proofs.begin(), snap.proofs.end());
      if (valid_signers(j, g, proofs, full.registry).size() <= f7) continue;
      for (const Element& e : g) {
        ++full_certs;
        ++certified_here;
        const auto cert = certify(snap, e, f7, full.registry);
        bool agree = true;
        for (const auto& [other, osnap] : full.snapshots) {
          if (osnap.epoch < j) continue;
          const Epoch& h = osnap.at(j);
          agree = agree && std::set<Element>(h.begin(), h.end()) == std::set<Element>(g.begin(), g.end());
        }
        if (cert && cert->epoch_no == j && verify_certificate(*cert, f7, full.registry) && agree) ++full_ok;
      }
    }
    coverage = coverage && certified_here >= committed;
  }

  if (sources.empty()) return {false, "no clean certificates to mutate"};
  std::mt19937_64 rng(20260);
  std::uint64_t rejected = 0;
  std::map<int, std::uint64_t> per_kind;
  constexpr int kKinds = 9;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const CertSource& src = sources[rng() % sources.size()];
    std::map<ProcessId, crypto::KeyPair> secrets;
    const auto registry = crypto::KeyRegistry::build(src.seed, src.n, src.n, &secrets);
    CommitCertificate bad = src.cert;
    const int kind = k % kKinds;
    ++per_kind[kind];
    switch (kind) {
      case 0:  // sub-threshold
        bad.proofs = keep_f(src, rng);
        break;
      case 1: {  // one signer repeated
        const EpochProof p = src.cert.proofs[rng() % src.cert.proofs.size()];
        bad.proofs.assign(src.f + 1 + rng() % 3, p);
        break;
      }
      case 2: {  // f valid plus forged signatures from the others
        bad.proofs = keep_f(src, rng);
        std::set<ProcessId> used;
        for (const auto& p : bad.proofs) used.insert(p.signer);
        for (std::uint64_t s = 0; s < src.n; ++s) {
          if (!used.contains(ProcessId{s})) bad.proofs.push_back({bad.epoch_no, random_sig(rng), ProcessId{s}});
        }
        break;
      }
      case 3: {  // bit flips on all but f proofs
        std::vector<EpochProof> kept = keep_f(src, rng);
        for (EpochProof p : src.cert.proofs) {
          if (std::find(kept.begin(), kept.end(), p) != kept.end()) continue;
          p.proof_sig[rng() % p.proof_sig.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
          kept.push_back(p);
        }
        bad.proofs = kept;
        break;
      }
      case 4: {  // epoch number moved
        const std::uint64_t delta = 1 + rng() % 5;
        bad.epoch_no += delta;
        if (rng() % 2) {
          for (auto& p : bad.proofs) p.epoch_no += delta;
        }
        break;
      }
      case 5: {  // epoch contents altered
        const ProcessId client{src.n + rng() % src.n};
        const Bytes payload{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), 7};
        if (rng() % 2 || bad.epoch_elements.size() < 2) {
          bad.epoch_elements.push_back(Element::sign(client, payload, secrets.at(client)));
        } else {
          auto victim = std::find_if(bad.epoch_elements.begin(), bad.epoch_elements.end(),
                                     [&](const Element& e) { return !(e == bad.element); });
          bad.epoch_elements.erase(victim);
        }
        break;
      }
      case 6: {  // fabricated epoch signed by the f Byzantine servers, and a client key
        bad.epoch_elements = {bad.element, Element::make(ProcessId{src.n}, Bytes{1, 2, 3}, random_sig(rng))};
        bad.proofs.clear();
        for (std::uint64_t s = src.n - src.f; s < src.n; ++s) {
          bad.proofs.push_back(make_epoch_proof(bad.epoch_no, bad.epoch_elements, ProcessId{s}, secrets.at(ProcessId{s})));
        }
        const ProcessId client{src.n + rng() % src.n};
        bad.proofs.push_back(make_epoch_proof(bad.epoch_no, bad.epoch_elements, client, secrets.at(client)));
        break;
      }
      case 7: {  // keys outside the registry under real server ids
        bad.proofs.clear();
        for (std::uint64_t s = 0; s < src.n; ++s) {
          const auto stranger = crypto::derive_keypair(src.seed + 1000 + k, ProcessId{s});
          bad.proofs.push_back(make_epoch_proof(bad.epoch_no, bad.epoch_elements, ProcessId{s}, stranger));
        }
        if (rng() % 2) {
          const auto f_real = keep_f(src, rng);
          bad.proofs.insert(bad.proofs.end(), f_real.begin(), f_real.end());
        }
        break;
      }
      case 8: {  // element outside the certified epoch
        const ProcessId client{src.n + rng() % src.n};
        bad.element = Element::sign(client, Bytes{9, static_cast<std::uint8_t>(rng())}, secrets.at(client));
        break;
      }
    }
    // Kind 8 keeps a genuine epoch, so only the full certificate check applies.
    const bool epoch_rejected =
        kind == 8 || !verify_epoch(bad.epoch_no, bad.epoch_elements, bad.proofs, src.f, *src.registry);
    const auto reparsed = CommitCertificate::parse(bad.serialize());
    const bool cert_rejected = !reparsed || !verify_certificate(*reparsed, src.f, *src.registry);
    if (epoch_rejected && cert_rejected) ++rejected;
  }
  const bool ok = rejected == static_cast<std::uint64_t>(trials) && clean > 0 && clean_ok == clean &&
                  full_certs > 0 && full_ok == full_certs && coverage;
  return {ok, fmt("adversarial rejected %llu/%d; clean run certificates %llu/%llu; per-element certificates %llu/%llu (%llu committed)",
                  static_cast<unsigned long long>(rejected), trials, static_cast<unsigned long long>(clean_ok),
                  static_cast<unsigned long long>(clean), static_cast<unsigned long long>(full_ok),
                  static_cast<unsigned long long>(full_certs), static_cast<unsigned long long>(committed))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<std::string> known_fail;
  std::vector<std::string> only;
  std::uint64_t seeds = 20;
  app.add_option("--known-fail", known_fail, "criterion reported but excluded from the exit status");
  app.add_option("--only", only, "run just these criteria");
  app.add_option("--seeds", seeds, "seeds per property-campaign cell")->check(CLI::Range(20, 1000));
  CLI11_PARSE(app, argc, argv);

  std::optional<Campaign> campaign;
  auto shared = [&]() -> const Campaign& {
    if (!campaign) campaign = run_campaign(seeds);
    return *campaign;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"analytical_golden_values", analytical},
      {"block_size_sweep", block_sweep},
      {"property_suite", [&] { return property_suite(shared()); }},
      {"ledger_properties", [&] { return ledger_properties(shared()); }},
      {"determinism", determinism},
      {"efficiency", efficiency_shape},
      {"capacity_throughput", capacity},
      {"latency", latency},
      {"byzantine_safety", [&] { return byzantine(shared()); }},
      {"client_verification", [&] { return client_verification(shared()); }},
  };

  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = std::find(known_fail.begin(), known_fail.end(), name) != known_fail.end();
    const char* verdict = o.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL");
    if (!o.pass && !known) ++failures;
    std::printf("%-12s %-26s %s [%.1f s]\n", verdict, name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
