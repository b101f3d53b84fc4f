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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "setchain/client.hpp"
#include "setchain/report.hpp"
#include "setchain/scenario.hpp"

namespace setchain {
namespace {

namespace fs = std::filesystem;

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text, "s.txt");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Scenario, DefaultsAndEveryKey) {
  const Scenario d = parse_scenario("");
  EXPECT_EQ(d.config.n, 10u);
  EXPECT_EQ(d.config.sending_rate, 10000.0);
  EXPECT_EQ(d.config.network_delay_ms, 0.0);
  EXPECT_EQ(d.config.block_capacity, 524288u);
  EXPECT_TRUE(d.adversaries.empty());

  const Scenario s = parse_scenario(
      "# base\n"
      "algorithm = vanilla\n"
      "n=7\nf=2\nsending_rate=500\ncollector_limit=50\nnetwork_delay_ms=10\n"
      "block_capacity_bytes=100000\nblock_interval_ms=1000\ncollector_timeout_ms=800\n"
      "request_timeout_ms=300\nmempool_max_txs=5000\nmempool_max_bytes=1000000\n"
      "element_size_mode=fixed:438\ninjection_duration_s=20\nseed=9\n"
      "adversaries=Withholder:1,Silent:1\nproduce_empty_blocks=true\nmax_virtual_time_s=120\n",
      "s.txt");
  EXPECT_EQ(s.algorithm, Algorithm::kVanilla);
  EXPECT_EQ(s.config.n, 7u);
  EXPECT_EQ(s.config.fault_bound(), 2u);
  EXPECT_EQ(s.config.sending_rate, 500.0);
  EXPECT_EQ(s.config.collector_limit, 50u);
  EXPECT_EQ(s.config.network_delay_ms, 10.0);
  EXPECT_EQ(s.config.block_capacity, 100000u);
  EXPECT_EQ(s.config.block_interval_ms, 1000.0);
  EXPECT_EQ(s.config.collector_timeout_ms, 800.0);
  EXPECT_EQ(s.config.request_timeout_ms, 300.0);
  EXPECT_EQ(s.config.mempool_max_txs, 5000u);
  EXPECT_EQ(s.config.mempool_max_bytes, 1000000u);
  EXPECT_EQ(s.config.element_size_mode, ElementSizeMode::fixed(438));
  EXPECT_EQ(s.config.injection_duration_s, 20.0);
  EXPECT_EQ(s.config.seed, 9u);
  EXPECT_EQ(adversary_total(s.adversaries), 2u);
  EXPECT_TRUE(s.config.produce_empty_blocks);
  EXPECT_EQ(s.config.max_virtual_time_s, 120.0);

  const Scenario back = parse_scenario(to_text(s));
  EXPECT_EQ(to_text(back), to_text(s));
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  EXPECT_EQ(message_of("n=4\nfoo=1\n"), "s.txt:2: unknown key 'foo'");
  EXPECT_NE(message_of("n=4\n\nn=5\n").find("s.txt:3:"), std::string::npos);
  EXPECT_NE(message_of("just words\n").find("s.txt:1:"), std::string::npos);
  EXPECT_NE(message_of("n=four\n").find("s.txt:1:"), std::string::npos);
  EXPECT_NE(message_of("algorithm=paxos\n").find("s.txt:1:"), std::string::npos);
  EXPECT_NE(message_of("element_size_mode=uniform:5\n").find("s.txt:1:"), std::string::npos);
  EXPECT_NE(message_of("produce_empty_blocks=maybe\n").find("s.txt:1:"), std::string::npos);
  EXPECT_NE(message_of("n=10\nf=5\n").find("s.txt"), std::string::npos);
  EXPECT_NE(message_of("n=4\nadversaries=Silent:2\n").find("s.txt"), std::string::npos);
  EXPECT_EQ(message_of("n=10\nf=4\ncollector_limit=11\n"), "");
}

TEST(Scenario, SweepsAreCartesianFirstAxisSlowest) {
  const SweepAxis a = parse_sweep("sending_rate=500,1000");
  EXPECT_EQ(a.key, "sending_rate");
  EXPECT_EQ(a.values, (std::vector<std::string>{"500", "1000"}));
  const auto points = sweep_points({a, parse_sweep("algorithm=vanilla,compresschain,hashchain")});
  ASSERT_EQ(points.size(), 6u);
  EXPECT_EQ(points[0], (std::vector<std::pair<std::string, std::string>>{{"sending_rate", "500"}, {"algorithm", "vanilla"}}));
  EXPECT_EQ(points[1][1].second, "compresschain");
  EXPECT_EQ(points[3][0].second, "1000");
  EXPECT_THROW(parse_sweep("nokey=1"), ConfigError);
  EXPECT_THROW(parse_sweep("n="), ConfigError);
  EXPECT_THROW(parse_sweep("sending_rate"), ConfigError);
  EXPECT_THROW(parse_sweep("n=1,,2"), ConfigError);
}

TEST(Report, FixedThreeDecimals) {
  EXPECT_EQ(fixed3(1), "1.000");
  EXPECT_EQ(fixed3(2.0005), "2.001");
  EXPECT_EQ(fixed3(-0.0001), "0.000");
  EXPECT_EQ(fixed3(955.0654), "955.065");
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("setchain_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return dir_ / name;
  }
  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  int cli(const std::string& args) const {
    const std::string cmd = std::string(SETCHAIN_CLI_PATH) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read(dir_ / "stdout.txt"); }
  std::string err() const { return read(dir_ / "stderr.txt"); }

  fs::path dir_;
};

constexpr const char* kSmall =
    "algorithm=hashchain\nn=4\nsending_rate=200\ninjection_duration_s=3\ncollector_limit=20\n";

TEST_F(Cli, RunIsByteIdenticalAndWritesAllFiles) {
  const fs::path sc = write("small.txt", kSmall);
  ASSERT_EQ(cli("run --scenario " + sc.string() + " --out " + (dir_ / "a").string()), 0) << err();
  ASSERT_EQ(cli("run --scenario " + sc.string() + " --out " + (dir_ / "b").string()), 0) << err();
  for (const char* f : {"elements.csv", "throughput.csv", "summary.csv", "properties.csv", "registry.txt",
                        "certificate.bin", "snapshots/server_0.txt"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f)) << f;
  }
  const std::string summary = read(dir_ / "a" / "summary.csv");
  const std::string elements = read(dir_ / "a" / "elements.csv");
  EXPECT_EQ(summary.find('\r'), std::string::npos);
  EXPECT_EQ(elements.find('\r'), std::string::npos);
  EXPECT_EQ(elements.substr(0, elements.find('\n')),
            "id,client,server,size,t_add,t_mempool_1,t_mempool_quorum,t_mempool_all,t_ledger,t_commit,epoch,"
            "add_status,accepted_by_correct");
  EXPECT_EQ(read(dir_ / "a" / "throughput.csv").substr(0, 24), "second,commits,rolling9\n");
  // Floats in the summary always carry exactly three decimals.
  std::istringstream lines(summary);
  std::string line;
  const std::regex number(R"(-?\d+(\.\d+)?)");
  while (std::getline(lines, line)) {
    const std::string value = line.substr(line.find(',') + 1);
    if (std::regex_match(value, number) && value.find('.') != std::string::npos) {
      EXPECT_EQ(value.size() - value.find('.') - 1, 3u) << line;
    }
  }
  EXPECT_NE(summary.find("efficiency_50,1.000"), std::string::npos);
  EXPECT_NE(summary.find("properties_ok,1"), std::string::npos);
}

TEST_F(Cli, SeedOverrideAndSweepSubdirectories) {
  const fs::path sc = write("small.txt", kSmall);
  ASSERT_EQ(cli("run --scenario " + sc.string() + " --out " + (dir_ / "s").string() +
                " --seed 7 --algorithm vanilla --sweep collector_limit=20,30"),
            0)
      << err();
  int dirs = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "s")) {
    if (!entry.is_directory()) continue;
    ++dirs;
    const std::string text = read(entry.path() / "scenario.txt");
    EXPECT_NE(text.find("seed=7\n"), std::string::npos);
    EXPECT_NE(text.find("algorithm=vanilla\n"), std::string::npos);
  }
  EXPECT_EQ(dirs, 2);
}

TEST_F(Cli, LowRateVanillaReachesFullEfficiencyAt75) {
  const fs::path sc = write("v.txt", "algorithm=vanilla\nsending_rate=500\n");
  ASSERT_EQ(cli("run --scenario " + sc.string() + " --out " + (dir_ / "v").string()), 0) << err();
  EXPECT_NE(read(dir_ / "v" / "summary.csv").find("efficiency_75,1.000"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitOne) {
  const fs::path bad_f = write("f.txt", "n=10\nf=5\n");
  EXPECT_EQ(cli("run --scenario " + bad_f.string() + " --out " + (dir_ / "x").string()), 1);
  const fs::path bad_key = write("k.txt", "n=4\nfoo=1\n");
  EXPECT_EQ(cli("run --scenario " + bad_key.string() + " --out " + (dir_ / "x").string()), 1);
  EXPECT_NE(err().find("k.txt:2: unknown key 'foo'"), std::string::npos) << err();
  EXPECT_EQ(cli("run --scenario " + (dir_ / "missing.txt").string() + " --out " + (dir_ / "x").string()), 1);
  EXPECT_EQ(cli("run --scenario " + bad_key.string() + " --out " + (dir_ / "x").string() + " --sweep bogus=1"), 1);
}

TEST_F(Cli, SaturatedRunExitsTwo) {
  const fs::path sc = write("sat.txt", std::string(kSmall) + "max_virtual_time_s=2\n");
  EXPECT_EQ(cli("run --scenario " + sc.string() + " --out " + (dir_ / "sat").string()), 2) << err();
  EXPECT_NE(read(dir_ / "sat" / "summary.csv").find("saturated,1"), std::string::npos);
}

TEST_F(Cli, AnalyzeTables) {
  ASSERT_EQ(cli("analyze"), 0) << err();
  const std::string o = out();
  EXPECT_NE(o.find("100.000,2.700,955.065,2497.466,27157.364"), std::string::npos) << o;
  EXPECT_NE(o.find("500.000,3.500,955.065,3330.046,147856.760,154.813,44.401"), std::string::npos) << o;
  EXPECT_NE(o.find("128.000,"), std::string::npos);
  ASSERT_EQ(cli("analyze --c 11"), 0);
  EXPECT_NE(out().find("11.000,2.700,955.065,619.509,301.748"), std::string::npos) << out();
  EXPECT_EQ(cli("analyze --c 10"), 1);
  EXPECT_NE(err().find("c"), std::string::npos);
  EXPECT_EQ(cli("analyze --C 1000"), 1);
  ASSERT_EQ(cli("analyze --out " + (dir_ / "an.csv").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "an.csv"));
}

TEST_F(Cli, VerifyCertificatePipeline) {
  const fs::path sc = write("small.txt", kSmall);
  const fs::path run_dir = dir_ / "r";
  ASSERT_EQ(cli("run --scenario " + sc.string() + " --out " + run_dir.string()), 0) << err();
  const std::string reg = (run_dir / "registry.txt").string();
  const fs::path cert = run_dir / "certificate.bin";
  ASSERT_EQ(cli("verify --certificate " + cert.string() + " --registry " + reg + " --f 1"), 0) << err();
  EXPECT_NE(out().find("verified"), std::string::npos);

  const Bytes raw = [&] {
    const std::string s = read(cert);
    return Bytes(s.begin(), s.end());
  }();
  auto parsed = CommitCertificate::parse(raw);
  ASSERT_TRUE(parsed);

  CommitCertificate thin = *parsed;
  thin.proofs.resize(1);
  write("thin.bin", std::string(as_string_view(thin.serialize())));
  EXPECT_EQ(cli("verify --certificate " + (dir_ / "thin.bin").string() + " --registry " + reg + " --f 1"), 3);

  CommitCertificate tampered = *parsed;
  Bytes payload(tampered.epoch_elements[0].payload().begin(), tampered.epoch_elements[0].payload().end());
  payload[0] ^= 1;
  tampered.epoch_elements[0] = Element::make(tampered.epoch_elements[0].creator(), payload, tampered.epoch_elements[0].sig());
  write("tampered.bin", std::string(as_string_view(tampered.serialize())));
  EXPECT_EQ(cli("verify --certificate " + (dir_ / "tampered.bin").string() + " --registry " + reg + " --f 1"), 3);

  write("junk.bin", "not a certificate");
  EXPECT_EQ(cli("verify --certificate " + (dir_ / "junk.bin").string() + " --registry " + reg + " --f 1"), 1);
  EXPECT_EQ(cli("verify --certificate " + cert.string() + " --registry " + (dir_ / "junk.bin").string() + " --f 1"), 1);
}

}  // namespace
}  // namespace setchain
