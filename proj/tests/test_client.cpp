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

#include "harness.hpp"
#include "setchain/client.hpp"

namespace setchain {
namespace {

using testing::Harness;
using namespace std::chrono_literals;

class ClientTest : public ::testing::Test {
 protected:
  ClientTest() : registry_(crypto::KeyRegistry::build(3, 4, 4, &keys_)) {}

  Element element(const std::string& text) const {
    return Element::sign(ProcessId{4}, Bytes(text.begin(), text.end()), keys_.at(ProcessId{4}));
  }
  EpochProof proof(std::uint64_t j, const std::vector<Element>& g, std::uint64_t server) const {
    return make_epoch_proof(j, g, ProcessId{server}, keys_.at(ProcessId{server}));
  }

  std::map<ProcessId, crypto::KeyPair> keys_;
  crypto::KeyRegistry registry_;
};

TEST_F(ClientTest, VerifyEpochThresholdAndDistinctSigners) {
  const std::vector<Element> g{element("a"), element("b")};
  const std::uint64_t f = 1;
  EXPECT_TRUE(verify_epoch(3, g, std::vector{proof(3, g, 0), proof(3, g, 1)}, f, registry_));
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0)}, f, registry_));
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0), proof(3, g, 0)}, f, registry_));
  EpochProof forged = proof(3, g, 1);
  forged.proof_sig[10] ^= 1;
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0), forged}, f, registry_));
  // Proof for another epoch number or another content does not count.
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0), proof(4, g, 1)}, f, registry_));
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0), proof(3, {g[0]}, 1)}, f, registry_));
  // Signed by a client key under a client id.
  EXPECT_FALSE(verify_epoch(3, g, std::vector{proof(3, g, 0), proof(3, g, 5)}, f, registry_));
  EXPECT_FALSE(verify_epoch(0, g, std::vector{proof(0, g, 0), proof(0, g, 1)}, f, registry_));
  // Element order does not matter.
  const std::vector<Element> rev{g[1], g[0]};
  EXPECT_TRUE(verify_epoch(3, rev, std::vector{proof(3, g, 2), proof(3, g, 3)}, f, registry_));
  EXPECT_EQ(valid_signers(3, g, std::vector{proof(3, g, 3), proof(3, g, 1), forged}, registry_),
            (std::vector<ProcessId>{ProcessId{1}, ProcessId{3}}));
}

TEST_F(ClientTest, CertificateRoundTripAndStrictParse) {
  const std::vector<Element> g{element("x"), element("y")};
  const CommitCertificate cert{7, g[1], g, {proof(7, g, 0), proof(7, g, 2)}};
  EXPECT_TRUE(verify_certificate(cert, 1, registry_));
  const Bytes wire = cert.serialize();
  const auto back = CommitCertificate::parse(wire);
  ASSERT_TRUE(back);
  EXPECT_EQ(back->epoch_no, 7u);
  EXPECT_EQ(back->element, cert.element);
  EXPECT_EQ(back->epoch_elements, cert.epoch_elements);
  EXPECT_EQ(back->proofs, cert.proofs);
  EXPECT_EQ(back->serialize(), wire);
  EXPECT_TRUE(verify_certificate(*back, 1, registry_));

  for (std::size_t cut = 0; cut < wire.size(); cut += 7) {
    EXPECT_FALSE(CommitCertificate::parse(ByteView{wire.data(), cut})) << cut;
  }
  Bytes extra = wire;
  extra.push_back(0);
  EXPECT_FALSE(CommitCertificate::parse(extra));

  CommitCertificate outside = cert;
  outside.element = element("not in epoch");
  EXPECT_FALSE(verify_certificate(outside, 1, registry_));
  EXPECT_FALSE(verify_certificate(cert, 2, registry_));
}

TEST_F(ClientTest, CertifyPicksTheEpochHoldingTheElement) {
  SetchainState st;
  const Element a = element("a");
  const Element b = element("b");
  st.add_to_set(a);
  st.add_to_set(b);
  st.append_epoch({a});
  st.append_epoch({b});
  st.add_proof(proof(2, {b}, 0));
  EXPECT_FALSE(certify(st.snapshot(), b, 1, registry_));
  st.add_proof(proof(2, {b}, 3));
  const auto cert = certify(st.snapshot(), b, 1, registry_);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->epoch_no, 2u);
  EXPECT_TRUE(verify_certificate(*cert, 1, registry_));
  EXPECT_FALSE(certify(st.snapshot(), a, 1, registry_));
  EXPECT_FALSE(certify(st.snapshot(), element("never"), 1, registry_));
}

// Returns a made-up history: the element sits in epoch 1 next to a forged
// element, backed by one real Byzantine signature and one forged one.
class FabricatingServer final : public Server {
 public:
  FabricatingServer(ServerContext ctx, Element target, const crypto::KeyPair& own_key)
      : Server(std::move(ctx)) {
    state_.add_to_set(target);
    const Element fake = Element::make(ProcessId{5}, Bytes{1, 2, 3}, Signature{});
    state_.add_to_set(fake);
    state_.append_epoch({target, fake});
    const std::vector<Element> g{target, fake};
    state_.add_proof(make_epoch_proof(1, g, id(), own_key));
    EpochProof forged = make_epoch_proof(1, g, ProcessId{0}, own_key);
    state_.add_proof(forged);
  }
  bool correct() const override { return false; }
  std::string kind() const override { return "fabricating"; }
  AddResult add(const Element&) override { return {AddStatus::kAccepted}; }
  SetchainSnapshot get() const override { return state_.snapshot(); }
  void on_new_block(const Block&) override {}
  void submit_item(const BatchItem&) override {}
  const SetchainState* state() const override { return &state_; }

 private:
  SetchainState state_;
};

TEST(Client, ConfirmOnCorrectSystemYieldsCertificate) {
  for (Algorithm alg : {Algorithm::kVanilla, Algorithm::kCompresschain, Algorithm::kHashchain}) {
    Harness h(testing::small_config(), alg);
    const Client c(ProcessId{4}, h.key(ProcessId{4}), h.registry(), h.scheduler());
    h.start();
    const Element e = c.make_element(Bytes{'h', 'i'});
    EXPECT_TRUE(c.submit(e, h.server(1)).accepted());
    std::optional<ConfirmResult> result;
    VirtualTime at{};
    c.confirm(e, h.server(2), 1, 30s, h.config().block_interval() / 2, [&](const ConfirmResult& r) {
      result = r;
      at = h.scheduler().now();
    });
    h.run_for(40s);
    ASSERT_TRUE(result) << to_string(alg);
    const auto* cert = std::get_if<CommitCertificate>(&*result);
    ASSERT_NE(cert, nullptr) << to_string(alg);
    EXPECT_TRUE(verify_certificate(*cert, 1, h.registry()));
    EXPECT_EQ(cert->epoch_elements.size(), h.server(0).get().at(cert->epoch_no).size());
    EXPECT_LT(at, 10 * h.config().block_interval()) << to_string(alg);
  }
}

TEST(Client, MalformedSelfSignatureIsRejected) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Element e = h.element(0, "signed");
  Signature sig = e.sig();
  sig[0] ^= 1;
  const Element bad = Element::make(e.creator(), e.payload(), sig);
  const Client c(e.creator(), h.key(e.creator()), h.registry(), h.scheduler());
  EXPECT_EQ(c.submit(bad, h.server(0)).status, AddStatus::kInvalid);
}

TEST(Client, NeverAddedElementTimesOut) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Client c(ProcessId{4}, h.key(ProcessId{4}), h.registry(), h.scheduler());
  h.start();
  h.server(0).add(h.element(1, "other"));
  std::optional<ConfirmResult> result;
  c.confirm(c.make_element(Bytes{9}), h.server(0), 1, 5s, 500ms, [&](const ConfirmResult& r) { result = r; });
  h.run_for(10s);
  ASSERT_TRUE(result);
  const auto* t = std::get_if<ConfirmTimeout>(&*result);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->server, ProcessId{0});
  EXPECT_GT(t->last_epoch_inspected, 0u);
}

TEST(Client, SilentServerTimesOutThenRetryFindsCertificate) {
  Harness h(testing::small_config(), Algorithm::kHashchain, {{ProcessId{3}, AdversaryKind::kSilent}});
  const Client c(ProcessId{4}, h.key(ProcessId{4}), h.registry(), h.scheduler());
  h.start();
  const Element e = c.make_element(Bytes{'r'});
  EXPECT_EQ(c.submit(e, h.server(3)).status, AddStatus::kIgnored);
  EXPECT_TRUE(c.submit(e, h.server(0)).accepted());
  std::optional<ConfirmResult> result;
  c.confirm_with_retry(e, {&h.server(3), &h.server(1)}, 1, 10s, 500ms, [&](const ConfirmResult& r) { result = r; });
  h.run_for(40s);
  ASSERT_TRUE(result);
  ASSERT_TRUE(std::holds_alternative<CommitCertificate>(*result));
  EXPECT_TRUE(verify_certificate(std::get<CommitCertificate>(*result), 1, h.registry()));
}

TEST(Client, FabricatedHistoryGetsNoCertificate) {
  Harness h(testing::small_config(), Algorithm::kVanilla);
  const Element e = h.element(0, "target");
  ServerContext ctx = h.server(3).context();
  FabricatingServer liar(ctx, e, h.key(ProcessId{3}));
  ASSERT_TRUE(liar.get().in_history(e));
  EXPECT_FALSE(certify(liar.get(), e, 1, h.registry()));
  const Client c(ProcessId{4}, h.key(ProcessId{4}), h.registry(), h.scheduler());
  std::optional<ConfirmResult> result;
  c.confirm(e, liar, 1, 3s, 500ms, [&](const ConfirmResult& r) { result = r; });
  h.run_for(5s);
  ASSERT_TRUE(result);
  EXPECT_TRUE(std::holds_alternative<ConfirmTimeout>(*result));
}

}  // namespace
}  // namespace setchain
