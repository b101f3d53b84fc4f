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

#include <cmath>

#include "setchain/corpus.hpp"
#include "setchain/kernels.hpp"

namespace setchain {
namespace {

struct CorpusTest : ::testing::Test {
  CorpusSpec spec;
  std::map<ProcessId, crypto::KeyPair> keys;
  crypto::KeyRegistry reg;

  void SetUp() override {
    spec.servers = 10;
    spec.sending_rate = 400;
    spec.duration_s = 5;
    reg = crypto::KeyRegistry::build(spec.seed, spec.servers, spec.servers, &keys);
  }
};

TEST_F(CorpusTest, SizeAndArrivalSchedule) {
  const Corpus c = kernels::generate_corpus(spec, keys);
  ASSERT_EQ(c.entries.size(), 2000u);
  std::map<std::uint64_t, std::uint64_t> per_client;
  for (const CorpusEntry& e : c.entries) {
    EXPECT_EQ(e.server.value, e.id % 10);
    EXPECT_EQ(e.client.value, 10 + e.id % 10);
    EXPECT_EQ(e.t_add, VirtualTime{static_cast<std::int64_t>(std::floor(e.id * 1e6 / 400.0))});
    EXPECT_LT(e.t_add, std::chrono::seconds(5));
    EXPECT_TRUE(valid_element(e.element, reg));
    ++per_client[e.client.value];
  }
  for (const auto& [client, count] : per_client) EXPECT_EQ(count, 200u) << client;
}

TEST_F(CorpusTest, ElementsAreDistinct) {
  const Corpus c = kernels::generate_corpus(spec, keys);
  std::unordered_set<Element> seen;
  for (const CorpusEntry& e : c.entries) EXPECT_TRUE(seen.insert(e.element).second) << e.id;
}

TEST_F(CorpusTest, LengthDistributionFollowsTheSizeModel) {
  spec.sending_rate = 20000;
  double sum = 0;
  std::size_t below_cap = 0;
  const std::uint64_t n = corpus_size(spec);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::size_t len = sample_element_length(spec, i);
    EXPECT_GE(len, 64u);
    EXPECT_LE(len, spec.max_element_size + kElementOverhead);
    sum += static_cast<double>(len);
    below_cap += len < 2000;
  }
  EXPECT_NEAR(sum / static_cast<double>(n), 438.0, 25.0);
  EXPECT_GT(below_cap, n * 9 / 10);
  spec.size = ElementSizeMode::fixed(438);
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(sample_element_length(spec, i), 438u);
}

TEST_F(CorpusTest, FixedModeElementsHaveExactLength) {
  spec.size = ElementSizeMode::fixed(438);
  const Corpus c = kernels::generate_corpus(spec, keys);
  for (const CorpusEntry& e : c.entries) ASSERT_EQ(e.element.canonical_bytes().size(), 438u);
}

TEST_F(CorpusTest, ParallelKernelsMatchSerialReferences) {
  const Corpus a = kernels::generate_corpus(spec, keys);
  const Corpus b = kernels::generate_corpus_serial(spec, keys);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  std::vector<Element> elements;
  std::vector<Bytes> bytes;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    ASSERT_EQ(a.entries[i].element.canonical_bytes(), b.entries[i].element.canonical_bytes());
    ASSERT_EQ(a.entries[i].t_add, b.entries[i].t_add);
    Element e = a.entries[i].element;
    if (i % 7 == 0) e = Element::make(e.creator(), e.payload(), Signature{});
    elements.push_back(e);
    bytes.push_back(e.canonical_bytes());
  }
  const auto valid = kernels::validate_elements(elements, reg);
  EXPECT_EQ(valid, kernels::validate_elements_serial(elements, reg));
  for (std::size_t i = 0; i < valid.size(); ++i) EXPECT_EQ(valid[i] != 0, i % 7 != 0);
  EXPECT_EQ(kernels::digest_all(bytes), kernels::digest_all_serial(bytes));
  EXPECT_GE(kernels::max_threads(), 1);
}

TEST_F(CorpusTest, SeedChangesContentButNotSchedule) {
  const Corpus a = kernels::generate_corpus(spec, keys);
  CorpusSpec other = spec;
  other.seed = 43;
  const Corpus b = kernels::generate_corpus(other, keys);
  EXPECT_EQ(a.entries[5].t_add, b.entries[5].t_add);
  EXPECT_NE(a.entries[5].element.canonical_bytes(), b.entries[5].element.canonical_bytes());
}

}  // namespace
}  // namespace setchain
