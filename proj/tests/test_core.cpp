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

#include <algorithm>
#include <random>

#include "setchain/element.hpp"
#include "setchain/state.hpp"
#include "setchain/validator.hpp"

namespace setchain {
namespace {

struct Fixture : ::testing::Test {
  std::map<ProcessId, crypto::KeyPair> keys;
  crypto::KeyRegistry reg = crypto::KeyRegistry::build(1, 4, 4, &keys);

  Element signed_element(std::uint64_t client, const Bytes& payload) const {
    return Element::sign(ProcessId{client}, payload, keys.at(ProcessId{client}));
  }
};

// Reads the element layout field by field, without the library decoder.
struct RawElement {
  std::uint64_t creator = 0;
  Bytes payload;
  Bytes sig;
};

std::optional<RawElement> independent_decode(const Bytes& b) {
  if (b.size() < 13 + 64 || b[0] != 0x01) return std::nullopt;
  RawElement r;
  for (int i = 0; i < 8; ++i) r.creator = (r.creator << 8) | b[1 + i];
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | b[9 + i];
  if (b.size() != 13 + len + 64) return std::nullopt;
  r.payload.assign(b.begin() + 13, b.begin() + 13 + len);
  r.sig.assign(b.begin() + 13 + len, b.end());
  return r;
}

TEST_F(Fixture, CanonicalLayoutOfSmallElement) {
  const Element e = Element::make(ProcessId{7}, Bytes{0xAB}, Signature{});
  Bytes expected{0x01, 0, 0, 0, 0, 0, 0, 0, 7, 0, 0, 0, 1, 0xAB};
  expected.resize(expected.size() + 64, 0);
  EXPECT_EQ(canonical_element_bytes(e), expected);
}

TEST_F(Fixture, OneByteDifferenceGivesDistinctBytes) {
  const Element a = Element::make(ProcessId{7}, Bytes{1, 2, 3}, Signature{});
  const Element b = Element::make(ProcessId{7}, Bytes{1, 2, 4}, Signature{});
  EXPECT_NE(a.canonical_bytes(), b.canonical_bytes());
  EXPECT_FALSE(a == b);
}

TEST_F(Fixture, PayloadLimitsThrow) {
  EXPECT_THROW(Element::make(ProcessId{4}, Bytes{}, Signature{}), EncodingError);
  EXPECT_THROW(Element::make(ProcessId{4}, Bytes(17, 1), Signature{}, 16), EncodingError);
  EXPECT_NO_THROW(Element::make(ProcessId{4}, Bytes(16, 1), Signature{}, 16));
}

TEST_F(Fixture, ThousandRandomElementsRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    Bytes payload(1 + rng() % 2000);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    Signature sig{};
    for (auto& b : sig) b = static_cast<std::uint8_t>(rng());
    const ProcessId creator{rng()};
    const Element e = Element::make(creator, payload, sig);
    const auto raw = independent_decode(e.canonical_bytes());
    ASSERT_TRUE(raw.has_value());
    EXPECT_EQ(raw->creator, creator.value);
    EXPECT_EQ(raw->payload, payload);
    EXPECT_EQ(raw->sig, Bytes(sig.begin(), sig.end()));
    const auto back = decode_element(e.canonical_bytes());
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, e);
  }
}

TEST_F(Fixture, DecodeRejectsMalformedElements) {
  const Element e = signed_element(4, Bytes{9, 9});
  Bytes b = e.canonical_bytes();
  b.push_back(0);
  EXPECT_FALSE(decode_element(b).has_value());
  b = e.canonical_bytes();
  b.pop_back();
  EXPECT_FALSE(decode_element(b).has_value());
  b = e.canonical_bytes();
  b[0] = 0x02;
  EXPECT_FALSE(decode_element(b).has_value());
  EXPECT_FALSE(decode_element({}).has_value());
}

TEST_F(Fixture, EmptyEpochDigestIsHashOfEpochNumber) {
  const Bytes one{0, 0, 0, 0, 0, 0, 0, 1};
  Digest oracle{};
  SHA512(one.data(), one.size(), oracle.data());
  EXPECT_EQ(epoch_digest(1, {}), oracle);
}

TEST_F(Fixture, EpochDigestLayoutMatchesOracle) {
  std::vector<Element> s{signed_element(4, Bytes{3}), signed_element(5, Bytes{1, 2}), signed_element(6, Bytes{2})};
  std::vector<Bytes> sorted;
  for (const auto& e : s) sorted.push_back(e.canonical_bytes());
  std::sort(sorted.begin(), sorted.end());
  Bytes msg;
  put_u64_be(msg, 5);
  for (const auto& b : sorted) {
    put_u32_be(msg, static_cast<std::uint32_t>(b.size()));
    put_bytes(msg, b);
  }
  Digest oracle{};
  SHA512(msg.data(), msg.size(), oracle.data());
  EXPECT_EQ(epoch_digest(5, s), oracle);
  std::reverse(s.begin(), s.end());
  EXPECT_EQ(epoch_digest(5, s), oracle);
  EXPECT_NE(epoch_digest(1, s), epoch_digest(2, s));
}

TEST_F(Fixture, ValidElementChecksRoleAndSignature) {
  const Element e = signed_element(5, Bytes{1, 2, 3});
  EXPECT_TRUE(valid_element(e, reg));
  Signature bad = e.sig();
  bad[10] ^= 1;
  EXPECT_FALSE(valid_element(Element::make(e.creator(), e.payload(), bad), reg));
  // A server key produces a well-signed element that is still invalid.
  const Element by_server = Element::sign(ProcessId{1}, Bytes{1, 2, 3}, keys.at(ProcessId{1}));
  EXPECT_FALSE(valid_element(by_server, reg));
  const Element unknown = Element::sign(ProcessId{99}, Bytes{1}, keys.at(ProcessId{5}));
  EXPECT_FALSE(valid_element(unknown, reg));
}

TEST_F(Fixture, ValidProofContract) {
  const std::vector<Element> s{signed_element(4, Bytes{1}), signed_element(5, Bytes{2})};
  const EpochProof p = make_epoch_proof(3, s, ProcessId{2}, keys.at(ProcessId{2}));
  EXPECT_TRUE(valid_proof(3, p.proof_sig, p.signer, &s, reg));
  EXPECT_FALSE(valid_proof(3, p.proof_sig, p.signer, nullptr, reg));
  EXPECT_FALSE(valid_proof(4, p.proof_sig, p.signer, &s, reg));
  auto bigger = s;
  bigger.push_back(signed_element(6, Bytes{3}));
  EXPECT_FALSE(valid_proof(3, p.proof_sig, p.signer, &bigger, reg));
  EXPECT_FALSE(valid_proof(3, p.proof_sig, ProcessId{1}, &s, reg));
  // Client keys cannot sign proofs.
  const EpochProof by_client = make_epoch_proof(3, s, ProcessId{4}, keys.at(ProcessId{4}));
  EXPECT_FALSE(valid_proof(3, by_client.proof_sig, by_client.signer, &s, reg));
  const Digest d = epoch_digest(3, s);
  EXPECT_TRUE(valid_proof_digest(3, p.proof_sig, p.signer, &d, reg));
}

TEST_F(Fixture, ProofRoundTripForAnyServerKey) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    std::vector<Element> s;
    for (std::uint64_t k = 0; k < rng() % 5; ++k) s.push_back(signed_element(4 + k % 4, Bytes{static_cast<std::uint8_t>(rng())}));
    const ProcessId w{rng() % 4};
    const std::uint64_t j = 1 + rng() % 100;
    const EpochProof p = make_epoch_proof(j, s, w, keys.at(w));
    EXPECT_TRUE(valid_proof(j, p.proof_sig, w, &s, reg));
  }
}

TEST_F(Fixture, EpochProofWireForm) {
  EpochProof p{0x0102030405060708ULL, {}, ProcessId{0x11}};
  for (std::size_t i = 0; i < p.proof_sig.size(); ++i) p.proof_sig[i] = static_cast<std::uint8_t>(i);
  const Bytes b = encode_epoch_proof(p);
  ASSERT_EQ(b.size(), 139u);
  EXPECT_EQ(b[0], 0x02);
  EXPECT_EQ(b[1], 0x01);
  EXPECT_EQ(b[8], 0x08);
  EXPECT_EQ(b[9], 0x00);
  EXPECT_EQ(b[72], 63);
  EXPECT_EQ(b[80], 0x11);
  EXPECT_TRUE(std::all_of(b.begin() + 81, b.end(), [](std::uint8_t x) { return x == 0; }));
  EXPECT_EQ(decode_epoch_proof(b), p);
  Bytes bad = b;
  bad[100] = 1;
  EXPECT_FALSE(decode_epoch_proof(bad).has_value());
  bad = b;
  bad.pop_back();
  EXPECT_FALSE(decode_epoch_proof(bad).has_value());
}

TEST_F(Fixture, BatchItemTagsAreUnambiguous) {
  const Element e = signed_element(4, Bytes{1});
  const EpochProof p = make_epoch_proof(1, {}, ProcessId{0}, keys.at(ProcessId{0}));
  const auto de = decode_batch_item(encode_batch_item(e));
  const auto dp = decode_batch_item(encode_batch_item(p));
  ASSERT_TRUE(de && dp);
  EXPECT_TRUE(std::holds_alternative<Element>(*de));
  EXPECT_TRUE(std::holds_alternative<EpochProof>(*dp));
  EXPECT_FALSE(decode_batch_item(Bytes{0x07, 1, 2}).has_value());
}

TEST_F(Fixture, BatchSetSemanticsAndWireFormat) {
  Batch b;
  const Element e1 = signed_element(4, Bytes{1});
  const Element e2 = signed_element(5, Bytes{2});
  const EpochProof p = make_epoch_proof(1, {}, ProcessId{0}, keys.at(ProcessId{0}));
  EXPECT_TRUE(b.add(e1));
  EXPECT_TRUE(b.add(p));
  EXPECT_TRUE(b.add(e2));
  EXPECT_FALSE(b.add(e1));
  EXPECT_FALSE(b.add(p));
  EXPECT_EQ(b.size(), 3u);
  const Bytes wire = b.serialize();
  EXPECT_EQ(wire.size(), b.encoded_size());
  EXPECT_EQ((Bytes{wire.begin(), wire.begin() + 4}), (Bytes{0, 0, 0, 3}));
  const auto items = decode_batch(wire);
  ASSERT_TRUE(items.has_value());
  ASSERT_EQ(items->size(), 3u);
  EXPECT_EQ(std::get<Element>((*items)[0]), e1);
  EXPECT_EQ(std::get<EpochProof>((*items)[1]), p);
  const auto [left, right] = b.split();
  EXPECT_EQ(left.size() + right.size(), 3u);
  EXPECT_EQ(std::get<Element>(left.items()[0]), e1);
}

TEST_F(Fixture, BatchDecodeFramingAndItemErrors) {
  Batch b;
  b.add(signed_element(4, Bytes{1}));
  Bytes wire = b.serialize();
  Bytes trailing = wire;
  trailing.push_back(0);
  EXPECT_FALSE(decode_batch(trailing).has_value());
  Bytes truncated(wire.begin(), wire.end() - 1);
  EXPECT_FALSE(decode_batch(truncated).has_value());
  Bytes count = wire;
  count[3] = 2;
  EXPECT_FALSE(decode_batch(count).has_value());
  // A well-framed item that does not parse is dropped on its own.
  Bytes mixed;
  put_u32_be(mixed, 2);
  put_u32_be(mixed, 3);
  put_bytes(mixed, Bytes{0x09, 0x09, 0x09});
  const Bytes good = encode_batch_item(signed_element(5, Bytes{2}));
  put_u32_be(mixed, static_cast<std::uint32_t>(good.size()));
  put_bytes(mixed, good);
  const auto items = decode_batch(mixed);
  ASSERT_TRUE(items.has_value());
  EXPECT_EQ(items->size(), 1u);
}

TEST_F(Fixture, SnapshotIsAValue) {
  SetchainState st;
  const Element e1 = signed_element(4, Bytes{1});
  const Element e2 = signed_element(5, Bytes{2});
  const SetchainSnapshot empty = st.snapshot();
  EXPECT_EQ(empty.epoch, 0u);
  EXPECT_TRUE(empty.the_set.empty() && empty.history.empty() && empty.proofs.empty());
  st.add_to_set(e1);
  st.append_epoch({e1});
  const SetchainSnapshot one = st.snapshot();
  EXPECT_EQ(one, st.snapshot());
  st.add_to_set(e2);
  st.append_epoch({e2});
  st.add_proof(EpochProof{1, {}, ProcessId{0}});
  EXPECT_EQ(one.epoch, 1u);
  EXPECT_EQ(one.the_set.size(), 1u);
  EXPECT_TRUE(one.proofs.empty());
  EXPECT_TRUE(one.in_history(e1));
  EXPECT_FALSE(one.in_history(e2));
  EXPECT_EQ(st.epoch(), 2u);
  EXPECT_EQ(*st.epoch_digest_of(2), epoch_digest(2, std::vector<Element>{e2}));
  EXPECT_EQ(st.epoch_contents(3), nullptr);
}

TEST_F(Fixture, ValidatorMatchesPredicates) {
  Validator v(reg);
  Element good = signed_element(4, Bytes{1});
  Element bad = Element::make(ProcessId{4}, Bytes{1}, Signature{});
  EXPECT_TRUE(v.element(good));
  EXPECT_FALSE(v.element(bad));
  EXPECT_TRUE(v.element(good));
  EXPECT_EQ(v.element_checks(), 3u);
  EXPECT_EQ(v.signature_verifications(), 2u);
  std::vector<Element> batch{signed_element(5, Bytes{2}), Element::make(ProcessId{6}, Bytes{3}, Signature{})};
  v.prevalidate(batch);
  EXPECT_TRUE(v.element(batch[0]));
  EXPECT_FALSE(v.element(batch[1]));
}

}  // namespace
}  // namespace setchain
