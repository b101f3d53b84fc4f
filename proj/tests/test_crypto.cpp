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
#include <openssl/sha.h>

#include <bit>
#include <random>
#include <set>

#include "setchain/bytes.hpp"
#include "setchain/crypto.hpp"

namespace setchain {
namespace {

Digest openssl_sha512(ByteView m) {
  Digest d{};
  SHA512(m.data(), m.size(), d.data());
  return d;
}

Bytes hex(const char* s) { return *from_hex(s); }

Bytes text(const std::string& s) { return Bytes(s.begin(), s.end()); }

TEST(Sha512, EmptyMatchesIndependentImplementation) {
  const Digest d = crypto::sha512({});
  EXPECT_EQ(d, openssl_sha512({}));
  EXPECT_EQ(to_hex(d).substr(0, 8), "cf83e135");
}

TEST(Sha512, AbcVector) {
  const Bytes abc = text("abc");
  EXPECT_EQ(to_hex(crypto::sha512(abc)),
            "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
            "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f");
  EXPECT_EQ(crypto::sha512(abc), openssl_sha512(abc));
}

TEST(Sha512, RandomInputsMatchOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Bytes m(rng() % 700);
    for (auto& b : m) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(crypto::sha512(m), openssl_sha512(m)) << "length " << m.size();
  }
}

TEST(Sha512, OneBitFlipChangesAboutHalfTheOutput) {
  std::mt19937_64 rng(11);
  std::uint64_t flipped = 0;
  const int samples = 100;
  for (int i = 0; i < samples; ++i) {
    Bytes m(64);
    for (auto& b : m) b = static_cast<std::uint8_t>(rng());
    const Digest a = crypto::sha512(m);
    m[rng() % m.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    const Digest b = crypto::sha512(m);
    for (std::size_t k = 0; k < a.size(); ++k) flipped += std::popcount(static_cast<unsigned>(a[k] ^ b[k]));
  }
  const double fraction = static_cast<double>(flipped) / (samples * 512.0);
  EXPECT_GT(fraction, 0.40);
  EXPECT_LT(fraction, 0.60);
}

TEST(Ed25519, Rfc8032TestVectorOne) {
  const Bytes seed = hex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60");
  const Bytes pk = hex("d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
  const Bytes sig = hex(
      "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595b"
      "be24655141438e7a100b");
  EXPECT_TRUE(crypto::verify(pk, {}, sig));

  crypto::KeyPair key;
  std::copy(seed.begin(), seed.end(), key.secret.begin());
  std::copy(pk.begin(), pk.end(), key.secret.begin() + 32);
  std::copy(pk.begin(), pk.end(), key.public_key.begin());
  const Signature s = crypto::sign(key, {});
  EXPECT_EQ(Bytes(s.begin(), s.end()), sig);
}

TEST(Ed25519, KeyDerivationIsDeterministic) {
  const Bytes seed(32, 0x42);
  EXPECT_EQ(crypto::generate_keypair(seed).public_key, crypto::generate_keypair(seed).public_key);
  EXPECT_EQ(crypto::derive_keypair(9, ProcessId{3}).public_key, crypto::derive_keypair(9, ProcessId{3}).public_key);
  EXPECT_NE(crypto::derive_keypair(9, ProcessId{3}).public_key, crypto::derive_keypair(9, ProcessId{4}).public_key);
  EXPECT_THROW(crypto::generate_keypair({}), std::invalid_argument);
}

TEST(Ed25519, ThousandSeedsGiveDistinctKeys) {
  std::set<PublicKey> keys;
  for (std::uint32_t i = 0; i < 1000; ++i) {
    Bytes seed;
    put_u32_be(seed, i);
    keys.insert(crypto::generate_keypair(seed).public_key);
  }
  EXPECT_EQ(keys.size(), 1000u);
}

TEST(Ed25519, SignVerifyRoundTripAndTamper) {
  const auto key = crypto::generate_keypair(text("round trip"));
  const Bytes m = text("message");
  const Signature s = crypto::sign(key, m);
  EXPECT_TRUE(crypto::verify(key.public_key, m, s));
  EXPECT_EQ(s, crypto::sign(key, m));
  EXPECT_FALSE(crypto::verify(key.public_key, text("messagf"), s));
  Signature bad = s;
  bad[5] ^= 1;
  EXPECT_FALSE(crypto::verify(key.public_key, m, bad));
}

TEST(Ed25519, MalformedInputsAreRejectedNotFatal) {
  const auto key = crypto::generate_keypair(text("malformed"));
  const Bytes m = text("m");
  const Signature s = crypto::sign(key, m);
  const ByteView pk{key.public_key.data(), key.public_key.size()};
  EXPECT_FALSE(crypto::verify(pk, m, ByteView{s.data(), 63}));
  EXPECT_FALSE(crypto::verify(pk.first(31), m, ByteView{s.data(), s.size()}));
  EXPECT_FALSE(crypto::verify(ByteView{}, m, ByteView{}));
  const Bytes zeros(32, 0);
  EXPECT_FALSE(crypto::verify(zeros, m, ByteView{s.data(), s.size()}));
}

TEST(KeyRegistry, RolesAndTextRoundTrip) {
  std::map<ProcessId, crypto::KeyPair> secrets;
  const auto reg = crypto::KeyRegistry::build(5, 4, 4, &secrets);
  EXPECT_EQ(reg.size(), 8u);
  EXPECT_EQ(secrets.size(), 8u);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(reg.is_server(ProcessId{i}));
    EXPECT_TRUE(reg.is_client(ProcessId{i + 4}));
    EXPECT_EQ(reg.find(ProcessId{i})->public_key, secrets.at(ProcessId{i}).public_key);
  }
  EXPECT_EQ(reg.find(ProcessId{8}), nullptr);
  const auto back = crypto::KeyRegistry::from_text(reg.to_text());
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->to_text(), reg.to_text());
  EXPECT_FALSE(crypto::KeyRegistry::from_text("0 server zz\n").has_value());
}

TEST(VerifyMemo, AnswersEqualDirectVerification) {
  const auto key = crypto::generate_keypair(text("memo"));
  crypto::VerifyMemo memo;
  const Bytes m = text("x");
  const Signature s = crypto::sign(key, m);
  Signature bad = s;
  bad[0] ^= 0x80;
  EXPECT_TRUE(memo.verify(ProcessId{1}, key.public_key, m, s));
  EXPECT_TRUE(memo.verify(ProcessId{1}, key.public_key, m, s));
  EXPECT_EQ(memo.hits(), 1u);
  EXPECT_FALSE(memo.verify(ProcessId{1}, key.public_key, m, bad));
  EXPECT_FALSE(memo.verify(ProcessId{2}, key.public_key, text("y"), s));
}

}  // namespace
}  // namespace setchain
