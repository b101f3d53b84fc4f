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
#include <random>

#include "setchain/codec.hpp"
#include "setchain/corpus.hpp"
#include "setchain/kernels.hpp"

namespace setchain {
namespace {

Batch random_batch(std::mt19937_64& rng, const std::map<ProcessId, crypto::KeyPair>& keys) {
  Batch b;
  const std::size_t items = 1 + rng() % 40;
  for (std::size_t i = 0; i < items; ++i) {
    if (rng() % 5 == 0) {
      EpochProof p{1 + rng() % 1000, {}, ProcessId{rng() % 4}};
      for (auto& x : p.proof_sig) x = static_cast<std::uint8_t>(rng());
      b.add(p);
    } else {
      Bytes payload(1 + rng() % 600);
      for (auto& x : payload) x = static_cast<std::uint8_t>(rng() % 7);
      Signature sig{};
      for (auto& x : sig) x = static_cast<std::uint8_t>(rng());
      b.add(Element::make(ProcessId{4 + rng() % 4}, payload, sig));
    }
  }
  (void)keys;
  return b;
}

TEST(Codec, TenThousandRandomBatchesRoundTrip) {
  std::mt19937_64 rng(99);
  const BrotliCodec brotli;
  const NullCodec null;
  for (int i = 0; i < 10000; ++i) {
    const Bytes wire = random_batch(rng, {}).serialize();
    const Codec& codec = (i % 10 == 0) ? static_cast<const Codec&>(null) : brotli;
    const Bytes tx = encode_compressed_tx(codec, wire);
    const auto back = decode_compressed_tx(tx);
    ASSERT_TRUE(back.has_value()) << i;
    ASSERT_EQ(*back, wire) << i;
  }
}

TEST(Codec, CompressedTxIsSelfDescribing) {
  const BrotliCodec brotli;
  const Bytes data(500, 7);
  const Bytes tx = encode_compressed_tx(brotli, data);
  ASSERT_GE(tx.size(), 8u);
  EXPECT_EQ(tx[0], 0x03);
  EXPECT_EQ(tx[1], 6);
  EXPECT_EQ(std::string(tx.begin() + 2, tx.begin() + 8), "brotli");
  Bytes renamed = tx;
  renamed[2] = 'c';
  EXPECT_FALSE(decode_compressed_tx(renamed).has_value());
}

TEST(Codec, ArbitraryBytesNeverTrap) {
  std::mt19937_64 rng(5);
  const BrotliCodec brotli;
  for (int i = 0; i < 2000; ++i) {
    Bytes junk(rng() % 300);
    for (auto& x : junk) x = static_cast<std::uint8_t>(rng());
    (void)brotli.decompress(junk, 1 << 20);
    Bytes tx{0x03, 6, 'b', 'r', 'o', 't', 'l', 'i'};
    tx.insert(tx.end(), junk.begin(), junk.end());
    (void)decode_compressed_tx(tx);
    (void)decode_compressed_tx(junk);
  }
  EXPECT_FALSE(decode_compressed_tx(Bytes{}).has_value());
  EXPECT_FALSE(decode_compressed_tx(Bytes{0x03}).has_value());
  EXPECT_FALSE(decode_compressed_tx(Bytes{0x03, 200, 'x'}).has_value());
}

TEST(Codec, OutputCapIsEnforced) {
  const BrotliCodec brotli;
  const Bytes big(1 << 20, 0);
  const Bytes c = brotli.compress(big);
  EXPECT_LT(c.size(), 2000u);
  EXPECT_FALSE(brotli.decompress(c, 1000).has_value());
  EXPECT_TRUE(brotli.decompress(c, big.size()).has_value());
  // A valid stream with trailing junk is rejected.
  Bytes trailing = c;
  trailing.push_back(0);
  EXPECT_FALSE(brotli.decompress(trailing, big.size()).has_value());
}

TEST(Codec, FactoryRejectsUnknownNames) {
  EXPECT_EQ(make_codec("brotli")->name(), "brotli");
  EXPECT_EQ(make_codec("null")->name(), "null");
  EXPECT_THROW(make_codec("zstd"), ConfigError);
}

struct CorpusRatio {
  double mean_bytes = 0;
  double sd_bytes = 0;
  double ratio = 0;
};

// Compresses consecutive corpus batches of `c` elements the way a
// Compresschain collector would (elements only, no proofs).
CorpusRatio measure(std::size_t c, std::size_t batches) {
  CorpusSpec spec;
  spec.seed = 42;
  spec.servers = 10;
  spec.sending_rate = static_cast<double>(c * batches);
  spec.duration_s = 1;
  std::map<ProcessId, crypto::KeyPair> keys;
  crypto::KeyRegistry::build(spec.seed, spec.servers, spec.servers, &keys);
  const Corpus corpus = kernels::generate_corpus(spec, keys);
  const BrotliCodec brotli;
  std::vector<double> sizes;
  double raw = 0;
  double packed = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    Batch batch;
    for (std::size_t i = 0; i < c; ++i) batch.add(corpus.entries[b * c + i].element);
    const Bytes wire = batch.serialize();
    const Bytes tx = encode_compressed_tx(brotli, wire);
    sizes.push_back(static_cast<double>(tx.size()));
    raw += static_cast<double>(wire.size());
    packed += static_cast<double>(tx.size());
  }
  CorpusRatio r;
  for (double s : sizes) r.mean_bytes += s;
  r.mean_bytes /= static_cast<double>(sizes.size());
  for (double s : sizes) r.sd_bytes += (s - r.mean_bytes) * (s - r.mean_bytes);
  r.sd_bytes = std::sqrt(r.sd_bytes / static_cast<double>(sizes.size()));
  r.ratio = raw / packed;
  return r;
}

TEST(Codec, HundredElementBatchesCompressToAboutSixteenKilobytes) {
  const CorpusRatio r = measure(100, 60);
  EXPECT_NEAR(r.mean_bytes, 16000.0, 3 * 2100.0);
  EXPECT_GE(r.ratio, 2.0);
  EXPECT_LE(r.ratio, 4.0);
}

TEST(Codec, CompressionRatioAcrossCollectorSizes) {
  for (std::size_t c : {100u, 250u, 500u}) {
    const CorpusRatio r = measure(c, 12);
    EXPECT_GE(r.ratio, 2.5 - 0.5) << "c=" << c;
    EXPECT_LE(r.ratio, 3.5 + 0.5) << "c=" << c;
  }
}

}  // namespace
}  // namespace setchain
