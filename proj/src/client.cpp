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

#include "setchain/client.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace setchain {

namespace {

void put_field(Bytes& out, ByteView v) {
  put_u32_be(out, static_cast<std::uint32_t>(v.size()));
  put_bytes(out, v);
}

}  // namespace

Bytes CommitCertificate::serialize() const {
  Bytes out;
  Bytes epoch;
  put_u64_be(epoch, epoch_no);
  put_field(out, epoch);
  put_field(out, element.canonical_bytes());
  Bytes list;
  put_u32_be(list, static_cast<std::uint32_t>(epoch_elements.size()));
  for (const Element& e : epoch_elements) put_field(list, e.canonical_bytes());
  put_field(out, list);
  list.clear();
  put_u32_be(list, static_cast<std::uint32_t>(proofs.size()));
  for (const EpochProof& p : proofs) put_field(list, encode_epoch_proof(p));
  put_field(out, list);
  return out;
}

std::optional<CommitCertificate> CommitCertificate::parse(ByteView bytes, std::size_t max_payload) {
  ByteReader r(bytes);
  auto field = [&r]() -> std::optional<ByteView> {
    auto len = r.u32_be();
    if (!len) return std::nullopt;
    return r.take(*len);
  };
  auto epoch = field();
  if (!epoch || epoch->size() != 8) return std::nullopt;
  auto elem = field();
  if (!elem) return std::nullopt;
  auto e = decode_element(*elem, max_payload);
  if (!e) return std::nullopt;
  CommitCertificate cert{*ByteReader(*epoch).u64_be(), *e, {}, {}};

  auto elems = field();
  if (!elems) return std::nullopt;
  ByteReader er(*elems);
  auto count = er.u32_be();
  if (!count) return std::nullopt;
  for (std::uint32_t i = 0; i < *count; ++i) {
    auto len = er.u32_be();
    if (!len) return std::nullopt;
    auto b = er.take(*len);
    if (!b) return std::nullopt;
    auto x = decode_element(*b, max_payload);
    if (!x) return std::nullopt;
    cert.epoch_elements.push_back(*x);
  }
  if (!er.done()) return std::nullopt;

  auto proofs = field();
  if (!proofs) return std::nullopt;
  ByteReader pr(*proofs);
  count = pr.u32_be();
  if (!count) return std::nullopt;
  for (std::uint32_t i = 0; i < *count; ++i) {
    auto len = pr.u32_be();
    if (!len) return std::nullopt;
    auto b = pr.take(*len);
    if (!b) return std::nullopt;
    auto p = decode_epoch_proof(*b);
    if (!p) return std::nullopt;
    cert.proofs.push_back(*p);
  }
  if (!pr.done() || !r.done()) return std::nullopt;
  return cert;
}

std::vector<ProcessId> valid_signers(std::uint64_t i, std::span<const Element> elements,
                                     std::span<const EpochProof> proofs, const crypto::KeyRegistry& registry) {
  if (i == 0) return {};
  const Digest d = epoch_digest(i, elements);
  std::set<ProcessId> signers;
  for (const EpochProof& p : proofs) {
    if (p.epoch_no != i || signers.contains(p.signer)) continue;
    if (valid_proof_digest(i, p.proof_sig, p.signer, &d, registry)) signers.insert(p.signer);
  }
  return {signers.begin(), signers.end()};
}

bool verify_epoch(std::uint64_t i, std::span<const Element> elements, std::span<const EpochProof> proofs,
                  std::uint64_t f, const crypto::KeyRegistry& registry) {
  return valid_signers(i, elements, proofs, registry).size() >= f + 1;
}

bool verify_certificate(const CommitCertificate& cert, std::uint64_t f, const crypto::KeyRegistry& registry) {
  if (std::find(cert.epoch_elements.begin(), cert.epoch_elements.end(), cert.element) == cert.epoch_elements.end()) {
    return false;
  }
  return verify_epoch(cert.epoch_no, cert.epoch_elements, cert.proofs, f, registry);
}

std::optional<CommitCertificate> certify(const SetchainSnapshot& snap, const Element& e, std::uint64_t f,
                                         const crypto::KeyRegistry& registry) {
  for (std::uint64_t j = 1; j <= snap.epoch; ++j) {
    const Epoch& contents = snap.at(j);
    if (std::find(contents.begin(), contents.end(), e) == contents.end()) continue;
    std::vector<EpochProof> proofs;
    for (const EpochProof& p : snap.proofs) {
      if (p.epoch_no == j) proofs.push_back(p);
    }
    if (!verify_epoch(j, contents, proofs, f, registry)) return std::nullopt;
    return CommitCertificate{j, e, contents, std::move(proofs)};
  }
  return std::nullopt;
}

namespace {

struct Poller : std::enable_shared_from_this<Poller> {
  explicit Poller(Element e) : element(std::move(e)) {}

  Element element;
  const Server* server = nullptr;
  std::uint64_t f = 0;
  VirtualTime deadline{};
  VirtualTime interval{};
  const crypto::KeyRegistry* registry = nullptr;
  Scheduler* scheduler = nullptr;
  std::uint64_t actor = 0;
  std::function<void(const ConfirmResult&)> done;

  void poll() {
    const SetchainSnapshot snap = server->get();
    if (auto cert = certify(snap, element, f, *registry)) {
      done(*cert);
      return;
    }
    if (scheduler->now() + interval > deadline) {
      done(ConfirmTimeout{server->id(), snap.epoch});
      return;
    }
    scheduler->after(interval, [self = shared_from_this()] { self->poll(); }, actor);
  }
};

}  // namespace

void Client::confirm(const Element& e, const Server& server, std::uint64_t f, VirtualTime deadline,
                     VirtualTime poll_interval, std::function<void(const ConfirmResult&)> done) const {
  auto p = std::make_shared<Poller>(e);
  p->server = &server;
  p->f = f;
  p->deadline = deadline;
  p->interval = poll_interval;
  p->registry = &registry_;
  p->scheduler = &scheduler_;
  p->actor = id_.value;
  p->done = std::move(done);
  p->poll();
}

void Client::confirm_with_retry(const Element& e, std::vector<const Server*> servers, std::uint64_t f,
                                VirtualTime per_server_wait, VirtualTime poll_interval,
                                std::function<void(const ConfirmResult&)> done) const {
  if (servers.empty()) {
    done(ConfirmTimeout{});
    return;
  }
  const Server* first = servers.front();
  servers.erase(servers.begin());
  confirm(e, *first, f, scheduler_.now() + per_server_wait, poll_interval,
          [this, e, rest = std::move(servers), f, per_server_wait, poll_interval,
           done = std::move(done)](const ConfirmResult& r) mutable {
            if (std::holds_alternative<CommitCertificate>(r) || rest.empty()) {
              done(r);
              return;
            }
            confirm_with_retry(e, std::move(rest), f, per_server_wait, poll_interval, std::move(done));
          });
}

}  // namespace setchain
