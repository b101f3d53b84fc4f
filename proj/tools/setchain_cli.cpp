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

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "setchain/analysis.hpp"
#include "setchain/client.hpp"
#include "setchain/report.hpp"
#include "setchain/scenario.hpp"
#include "setchain/sim.hpp"

namespace {

using namespace setchain;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSaturated = 2;
constexpr int kExitRejected = 3;

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) {
    out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
  }
  return out;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::vector<std::string> sweeps;
};

int run_command(const RunArgs& args) {
  Scenario base;
  std::vector<SweepAxis> axes;
  try {
    base = args.scenario.empty() ? parse_scenario("", "defaults") : load_scenario(args.scenario);
    if (args.seed) base.config.seed = *args.seed;
    if (args.algorithm) set_scenario_key(base, "algorithm", *args.algorithm);
    for (const std::string& s : args.sweeps) axes.push_back(parse_sweep(s));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  const auto points = sweep_points(axes);
  int status = kExitOk;
  for (const auto& point : points) {
    Scenario s = base;
    std::string label;
    try {
      for (const auto& [key, value] : point) {
        set_scenario_key(s, key, value);
        if (!label.empty()) label += '_';
        label += sanitize(key + "-" + value);
      }
      s.config.validate();
      assign_adversaries(s.config, s.adversaries);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << (label.empty() ? "" : label + ": ") << e.what() << '\n';
      return kExitError;
    }
    const std::filesystem::path dir = label.empty() ? std::filesystem::path(args.out) : args.out / std::filesystem::path(label);

    RunOptions opt;
    opt.config = s.config;
    opt.algorithm = s.algorithm;
    opt.adversaries = s.adversaries;
    opt.keep_snapshots = true;
    RunResult result;
    try {
      result = run(opt);
      write_run(s, result, dir);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << dir.string() << ": " << e.what() << '\n';
      return kExitError;
    }

    const MetricsReport& r = result.report;
    std::cout << dir.string() << ": " << to_string(s.algorithm) << " committed " << r.counters.committed << "/"
              << r.counters.generated << " eff@100 " << fixed3(r.eff_100) << (r.saturated ? " saturated" : "")
              << '\n';
    if (!result.properties.ok()) {
      std::cerr << "warning: " << dir.string() << ": property violations\n" << result.properties.summary();
    }
    if (r.saturated) status = kExitSaturated;
  }
  return status;
}

struct AnalyzeArgs {
  analysis::AnalysisParams p;
  double r_large = 3.5;
  std::string out;
};

int analyze_command(const AnalyzeArgs& args) {
  std::ostringstream table;
  try {
    analysis::AnalysisParams small = args.p;
    analysis::AnalysisParams large = args.p;
    large.c = 500;
    large.r = args.r_large;
    const double tv = analysis::vanilla_throughput(small);
    table << "# defaults: R=" << fixed3(args.p.R) << " C=" << fixed3(args.p.C) << " n=" << fixed3(args.p.n)
          << " l_p=" << fixed3(args.p.l_p) << " l_e=" << fixed3(args.p.l_e) << " l_h=" << fixed3(args.p.l_h) << '\n';
    table << "c,r,vanilla,compresschain,hashchain,hash_over_vanilla,hash_over_compress\n";
    for (const auto& q : {small, large}) {
      const double tc = analysis::compress_throughput(q);
      const double th = analysis::hash_throughput(q);
      table << fixed3(q.c) << ',' << fixed3(q.r) << ',' << fixed3(tv) << ',' << fixed3(tc) << ',' << fixed3(th) << ','
            << fixed3(th / tv) << ',' << fixed3(th / tc) << '\n';
    }
    table << "\nblock_mib,C,vanilla,compresschain,hashchain\n";
    for (const double mib : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
      analysis::AnalysisParams q = large;
      q.C = mib * 1024 * 1024;
      table << fixed3(mib) << ',' << fixed3(q.C) << ',' << fixed3(analysis::vanilla_throughput(q)) << ','
            << fixed3(analysis::compress_throughput(q)) << ',' << fixed3(analysis::hash_throughput(q)) << '\n';
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  std::cout << table.str();
  if (!args.out.empty()) {
    std::ofstream f(args.out, std::ios::binary | std::ios::trunc);
    f << table.str();
    if (!f) {
      std::cerr << "error: cannot write " << args.out << '\n';
      return kExitError;
    }
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string certificate;
  std::string registry;
  std::uint64_t f = 0;
};

int verify_command(const VerifyArgs& args) {
  const auto cert_bytes = read_file(args.certificate);
  if (!cert_bytes) {
    std::cerr << "error: cannot read " << args.certificate << '\n';
    return kExitError;
  }
  const auto cert =
      CommitCertificate::parse(ByteView{reinterpret_cast<const std::uint8_t*>(cert_bytes->data()), cert_bytes->size()});
  if (!cert) {
    std::cerr << "error: " << args.certificate << ": malformed certificate\n";
    return kExitError;
  }
  const auto reg_text = read_file(args.registry);
  const auto registry = reg_text ? crypto::KeyRegistry::from_text(*reg_text) : std::nullopt;
  if (!registry) {
    std::cerr << "error: " << args.registry << ": cannot parse registry\n";
    return kExitError;
  }
  const Digest d = epoch_digest(cert->epoch_no, cert->epoch_elements);
  const auto signers = valid_signers(cert->epoch_no, cert->epoch_elements, cert->proofs, *registry);
  std::cout << "epoch " << cert->epoch_no << '\n';
  std::cout << "digest " << to_hex(d) << '\n';
  std::cout << "signers";
  for (ProcessId s : signers) std::cout << ' ' << s.value;
  std::cout << '\n';
  if (!verify_certificate(*cert, args.f, *registry)) {
    std::cout << "rejected\n";
    return kExitRejected;
  }
  std::cout << "verified\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Setchain simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write CSV output");
  run_cmd->add_option("--scenario", run_args.scenario, "Scenario file (key=value)");
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--algorithm", run_args.algorithm, "vanilla, compresschain or hashchain");
  run_cmd->add_option("--sweep", run_args.sweeps, "key=v1,v2,... (repeatable, cartesian product)");

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Print the analytical throughput tables");
  an_cmd->add_option("--R", an.p.R, "Blocks per second");
  an_cmd->add_option("--C", an.p.C, "Block capacity in bytes");
  an_cmd->add_option("--n", an.p.n, "Servers");
  an_cmd->add_option("--l_p", an.p.l_p, "Epoch-proof length");
  an_cmd->add_option("--l_e", an.p.l_e, "Element length");
  an_cmd->add_option("--l_h", an.p.l_h, "Hash-batch length");
  an_cmd->add_option("--c", an.p.c, "Collector size of the first row");
  an_cmd->add_option("--r", an.p.r, "Compression ratio of the first row");
  an_cmd->add_option("--r-large", an.r_large, "Compression ratio at c=500");
  an_cmd->add_option("--out", an.out, "Also write the table to this file");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check a commit certificate");
  verify_cmd->add_option("--certificate", va.certificate, "certificate.bin")->required();
  verify_cmd->add_option("--registry", va.registry, "registry.txt")->required();
  verify_cmd->add_option("--f", va.f, "Fault bound")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*run_cmd) return run_command(run_args);
  if (*an_cmd) return analyze_command(an);
  return verify_command(va);
}
