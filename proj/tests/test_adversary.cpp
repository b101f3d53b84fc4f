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

#include <set>

#include "harness.hpp"
#include "setchain/adversary.hpp"

namespace setchain {
namespace {

using testing::Harness;
using namespace std::chrono_literals;

TEST(AdversaryMix, ParseAndPrint) {
  EXPECT_TRUE(parse_adversary_mix("").empty());
  EXPECT_TRUE(parse_adversary_mix("none").empty());
  const AdversaryMix m = parse_adversary_mix("Withholder:2,Silent:1");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], (AdversaryCount{AdversaryKind::kWithholder, 2}));
  EXPECT_EQ(m[1], (AdversaryCount{AdversaryKind::kSilent, 1}));
  EXPECT_EQ(adversary_total(m), 3u);
  EXPECT_EQ(to_string(m), "Withholder:2,Silent:1");
  EXPECT_EQ(parse_adversary_mix(to_string(m)), m);
  EXPECT_EQ(to_string(AdversaryMix{}), "none");
  EXPECT_EQ(parse_adversary_mix("GarbageAppender"), (AdversaryMix{{AdversaryKind::kGarbageAppender, 1}}));
  EXPECT_TRUE(parse_adversary_mix("Silent:0").empty());
  for (const char* bad : {"Evil:1", "Silent:x", "Silent:", "Silent:1,", "silent:1", "Silent:-1"}) {
    EXPECT_THROW(parse_adversary_mix(bad), ConfigError) << bad;
  }
  for (AdversaryKind k : {AdversaryKind::kSilent, AdversaryKind::kGarbageAppender, AdversaryKind::kWithholder,
                          AdversaryKind::kSelectiveServer, AdversaryKind::kWrongBatchServer,
                          AdversaryKind::kForgedProofSpammer}) {
    EXPECT_EQ(parse_adversary_kind(to_string(k)), k);
  }
}

TEST(AdversaryMix, AssignmentTakesHighestIdsAndRespectsF) {
  SystemConfig cfg;
  cfg.n = 10;
  const auto a = assign_adversaries(cfg, parse_adversary_mix("Withholder:2,Silent:1"));
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], (std::pair{ProcessId{9}, AdversaryKind::kWithholder}));
  EXPECT_EQ(a[1], (std::pair{ProcessId{8}, AdversaryKind::kWithholder}));
  EXPECT_EQ(a[2], (std::pair{ProcessId{7}, AdversaryKind::kSilent}));
  EXPECT_THROW(assign_adversaries(cfg, parse_adversary_mix("Silent:4")), ConfigError);
  cfg.n = 4;
  EXPECT_NO_THROW(assign_adversaries(cfg, parse_adversary_mix("Silent:1")));
  EXPECT_THROW(assign_adversaries(cfg, parse_adversary_mix("Silent:1,Withholder:1")), ConfigError);
  EXPECT_TRUE(assign_adversaries(cfg, {}).empty());
}

TEST(AdversarySchedule, CountTimesAndDeterminism) {
  SystemConfig cfg;
  cfg.injection_duration_s = 10;
  cfg.adversary_rate = 2;
  const auto s = adversary_schedule(cfg, AdversaryKind::kGarbageAppender, ProcessId{9});
  ASSERT_EQ(s.size(), 20u);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_GE(s[k].at, std::chrono::milliseconds(500 * k));
    EXPECT_LE(s[k].at, std::chrono::milliseconds(500 * (k + 1)));
    EXPECT_EQ(s[k].actor, ProcessId{9});
  }
  EXPECT_EQ(s, adversary_schedule(cfg, AdversaryKind::kGarbageAppender, ProcessId{9}));
  EXPECT_NE(s, adversary_schedule(cfg, AdversaryKind::kGarbageAppender, ProcessId{8}));
  cfg.seed += 1;
  EXPECT_NE(s, adversary_schedule(cfg, AdversaryKind::kGarbageAppender, ProcessId{9}));
  const auto f = adversary_schedule(cfg, AdversaryKind::kForgedProofSpammer, ProcessId{9});
  for (const auto& a : f) {
    EXPECT_TRUE(a.kind == AdversaryAction::Kind::kForgedSignatureProof ||
                a.kind == AdversaryAction::Kind::kFutureEpochProof);
  }
  EXPECT_TRUE(adversary_schedule(cfg, AdversaryKind::kSilent, ProcessId{9}).empty());
  EXPECT_TRUE(adversary_schedule(cfg, AdversaryKind::kWithholder, ProcessId{9}).empty());
}

TEST(Adversary, HashchainOnlyKindsDegradeToFlaggedHonestServers) {
  for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain}) {
    Harness h(testing::small_config(), alg, {{ProcessId{3}, AdversaryKind::kWithholder}});
    EXPECT_FALSE(h.server(3).correct());
    EXPECT_EQ(h.server(3).kind(), "Withholder");
    EXPECT_TRUE(h.server(3).add(h.element(0, "x")).accepted());
  }
  Harness h(testing::small_config(), Algorithm::kHashchain, {{ProcessId{3}, AdversaryKind::kWithholder}});
  EXPECT_FALSE(h.server(3).correct());
  EXPECT_TRUE(h.server(0).correct());
}

TEST(Adversary, SilentServerIgnoresEverything) {
  for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
    Harness h(testing::small_config(), alg, {{ProcessId{3}, AdversaryKind::kSilent}});
    h.start();
    const Element e = h.element(0, "to the void");
    EXPECT_EQ(h.server(3).add(e).status, AddStatus::kIgnored);
    h.server(0).add(h.element(1, "honest"));
    h.run_for(8s);
    const SetchainSnapshot s = h.server(3).get();
    EXPECT_TRUE(s.the_set.empty());
    EXPECT_EQ(s.epoch, 0u);
    EXPECT_FALSE(h.server(0).get().the_set.contains(e));
    EXPECT_GT(h.server(0).get().epoch, 0u) << to_string(alg);
    EXPECT_EQ(h.server(3).serve_batch(Digest{}, ProcessId{0}).kind, BatchReply::Kind::kNoReply);
  }
}

class ScheduledAdversaries : public ::testing::TestWithParam<Algorithm> {};

TEST_P(ScheduledAdversaries, CorrectServersStayConsistentAndKeepNoForgedProofs) {
  SystemConfig cfg = testing::small_config(7);
  cfg.injection_duration_s = 6;
  cfg.adversary_rate = 5;
  Harness h(cfg, GetParam(),
            {{ProcessId{6}, AdversaryKind::kGarbageAppender}, {ProcessId{5}, AdversaryKind::kForgedProofSpammer}});
  h.start();
  std::vector<Element> added;
  for (int i = 0; i < 60; ++i) {
    h.scheduler().at(std::chrono::milliseconds(100 * i), [&h, &added, i] {
      added.push_back(h.element(i, "adv" + std::to_string(i)));
      h.server(i % 5).add(added.back());
    });
  }
  h.run_for(25s);
  std::uint64_t garbage = 0;
  const SetchainSnapshot ref = h.server(0).get();
  for (int i = 0; i < 5; ++i) {
    const SetchainSnapshot s = h.server(i).get();
    garbage += h.server(i).counters().garbage_tx + h.server(i).counters().invalid_hash_batches;
    for (const Element& e : added) EXPECT_TRUE(s.in_history(e)) << i;
    const std::uint64_t common = std::min(s.epoch, ref.epoch);
    for (std::uint64_t j = 1; j <= common; ++j) {
      EXPECT_EQ(std::set<Element>(s.at(j).begin(), s.at(j).end()), std::set<Element>(ref.at(j).begin(), ref.at(j).end()));
    }
    for (const EpochProof& p : s.proofs) {
      ASSERT_LE(p.epoch_no, s.epoch);
      EXPECT_TRUE(valid_proof(p.epoch_no, p.proof_sig, p.signer, &s.at(p.epoch_no), h.registry()));
    }
    for (const Element& e : s.the_set) EXPECT_TRUE(valid_element(e, h.registry()));
  }
  EXPECT_GT(garbage, 0u);
}

INSTANTIATE_TEST_SUITE_P(AllAlgorithms, ScheduledAdversaries,
                         ::testing::Values(Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain),
                         [](const auto& info) { return to_string(info.param); });

}  // namespace
}  // namespace setchain
