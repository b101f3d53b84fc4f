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

#include "setchain/element.hpp"

#include <algorithm>
#include <functional>

namespace setchain {

namespace {

std::size_t hash_bytes(const Bytes& b) {
  return std::hash<std::string_view>{}(std::string_view{reinterpret_cast<const char*>(b.data()), b.size()});
}

void write_element_header(Bytes& out, ProcessId creator, ByteView payload) {
  put_u8(out, kElementTag);
  put_u64_be(out, creator.value);
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  put_bytes(out, payload);
}

}  // namespace

Bytes element_signing_bytes(ProcessId creator, ByteView payload) {
  Bytes out;
  out.reserve(kElementOverhead - kSignatureSize + payload.size());
  write_element_header(out, creator, payload);
  return out;
}

Element Element::make(ProcessId creator, ByteView payload, const Signature& sig, std::size_t max_payload) {
  if (payload.empty()) throw EncodingError("element payload is empty");
  if (payload.size() > max_payload) throw EncodingError("element payload exceeds max_element_size");
  auto d = std::make_shared<Data>();
  d->creator = creator;
  d->sig = sig;
  d->canonical.reserve(kElementOverhead + payload.size());
  write_element_header(d->canonical, creator, payload);
  put_bytes(d->canonical, ByteView{sig.data(), sig.size()});
  d->hash = hash_bytes(d->canonical);
  return Element{std::move(d)};
}

Element Element::sign(ProcessId creator, ByteView payload, const crypto::KeyPair& key, std::size_t max_payload) {
  if (payload.empty()) throw EncodingError("element payload is empty");
  if (payload.size() > max_payload) throw EncodingError("element payload exceeds max_element_size");
  const Bytes msg = element_signing_bytes(creator, payload);
  return make(creator, payload, crypto::sign(key, msg), max_payload);
}

ByteView Element::payload() const {
  const Bytes& c = data_->canonical;
  return ByteView{c.data() + 13, c.size() - kElementOverhead};
}

ByteView Element::pre_signature_bytes() const {
  const Bytes& c = data_->canonical;
  return ByteView{c.data(), c.size() - kSignatureSize};
}

std::optional<Element> decode_element(ByteView bytes, std::size_t max_payload) {
  ByteReader r(bytes);
  auto tag = r.u8();
  if (!tag || *tag != kElementTag) return std::nullopt;
  auto creator = r.u64_be();
  auto len = r.u32_be();
  if (!creator || !len || *len == 0 || *len > max_payload) return std::nullopt;
  auto payload = r.take(*len);
  auto sig = r.array<kSignatureSize>();
  if (!payload || !sig || !r.done()) return std::nullopt;
  return Element::make(ProcessId{*creator}, *payload, *sig, max_payload);
}

Bytes encode_epoch_proof(const EpochProof& p) {
  Bytes out;
  out.reserve(kEpochProofSize);
  put_u8(out, kEpochProofTag);
  put_u64_be(out, p.epoch_no);
  put_bytes(out, ByteView{p.proof_sig.data(), p.proof_sig.size()});
  put_u64_be(out, p.signer.value);
  out.resize(kEpochProofSize, 0);
  return out;
}

std::optional<EpochProof> decode_epoch_proof(ByteView bytes) {
  if (bytes.size() != kEpochProofSize) return std::nullopt;
  ByteReader r(bytes);
  auto tag = r.u8();
  if (!tag || *tag != kEpochProofTag) return std::nullopt;
  EpochProof p;
  p.epoch_no = *r.u64_be();
  p.proof_sig = *r.array<kSignatureSize>();
  p.signer = ProcessId{*r.u64_be()};
  auto pad = *r.take(r.remaining());
  if (std::any_of(pad.begin(), pad.end(), [](std::uint8_t b) { return b != 0; })) return std::nullopt;
  return p;
}

Digest epoch_digest(std::uint64_t epoch_no, std::span<const Element> elements) {
  std::vector<const Bytes*> sorted;
  sorted.reserve(elements.size());
  std::size_t total = 8;
  for (const Element& e : elements) {
    sorted.push_back(&e.canonical_bytes());
    total += 4 + e.canonical_bytes().size();
  }
  std::sort(sorted.begin(), sorted.end(), [](const Bytes* a, const Bytes* b) { return *a < *b; });
  Bytes msg;
  msg.reserve(total);
  put_u64_be(msg, epoch_no);
  for (const Bytes* b : sorted) {
    put_u32_be(msg, static_cast<std::uint32_t>(b->size()));
    put_bytes(msg, *b);
  }
  return crypto::sha512(msg);
}

Bytes encode_batch_item(const BatchItem& item) {
  if (const auto* e = std::get_if<Element>(&item)) return e->canonical_bytes();
  return encode_epoch_proof(std::get<EpochProof>(item));
}

std::optional<BatchItem> decode_batch_item(ByteView bytes, std::size_t max_payload) {
  if (bytes.empty()) return std::nullopt;
  if (bytes[0] == kElementTag) {
    if (auto e = decode_element(bytes, max_payload)) return BatchItem{std::move(*e)};
    return std::nullopt;
  }
  if (bytes[0] == kEpochProofTag) {
    if (auto p = decode_epoch_proof(bytes)) return BatchItem{*p};
  }
  return std::nullopt;
}

bool Batch::add(const BatchItem& item) {
  Bytes enc = encode_batch_item(item);
  std::string key(reinterpret_cast<const char*>(enc.data()), enc.size());
  if (!seen_.insert(std::move(key)).second) return false;
  encoded_size_ += 4 + enc.size();
  items_.push_back(item);
  encoded_.push_back(std::move(enc));
  return true;
}

bool Batch::contains(const BatchItem& item) const {
  Bytes enc = encode_batch_item(item);
  return seen_.contains(std::string(reinterpret_cast<const char*>(enc.data()), enc.size()));
}

Bytes Batch::serialize() const {
  Bytes out;
  out.reserve(encoded_size_);
  put_u32_be(out, static_cast<std::uint32_t>(items_.size()));
  for (const Bytes& enc : encoded_) {
    put_u32_be(out, static_cast<std::uint32_t>(enc.size()));
    put_bytes(out, enc);
  }
  return out;
}

void Batch::clear() {
  items_.clear();
  encoded_.clear();
  seen_.clear();
  encoded_size_ = 4;
}

std::pair<Batch, Batch> Batch::split() const {
  Batch lo;
  Batch hi;
  const std::size_t half = items_.size() / 2;
  for (std::size_t i = 0; i < items_.size(); ++i) (i < half ? lo : hi).add(items_[i]);
  return {std::move(lo), std::move(hi)};
}

std::optional<std::vector<BatchItem>> decode_batch(ByteView bytes, std::size_t max_payload) {
  ByteReader r(bytes);
  auto count = r.u32_be();
  if (!count) return std::nullopt;
  // Each item needs at least its 4-byte length prefix.
  if (*count > r.remaining() / 4) return std::nullopt;
  std::vector<BatchItem> items;
  items.reserve(*count);
  for (std::uint32_t i = 0; i < *count; ++i) {
    auto len = r.u32_be();
    if (!len) return std::nullopt;
    auto body = r.take(*len);
    if (!body) return std::nullopt;
    if (auto item = decode_batch_item(*body, max_payload)) items.push_back(std::move(*item));
  }
  if (!r.done()) return std::nullopt;
  return items;
}

bool valid_element(const Element& e, const crypto::KeyRegistry& registry) {
  const auto* entry = registry.find(e.creator());
  if (entry == nullptr || entry->role != Role::kClient) return false;
  return crypto::verify(entry->public_key, e.pre_signature_bytes(), e.sig());
}

bool valid_proof_digest(std::uint64_t j, const Signature& p, ProcessId w, const Digest* epoch_digest_value,
                        const crypto::KeyRegistry& registry) {
  if (epoch_digest_value == nullptr || j == 0) return false;
  const auto* entry = registry.find(w);
  if (entry == nullptr || entry->role != Role::kServer) return false;
  return crypto::verify(entry->public_key, ByteView{epoch_digest_value->data(), epoch_digest_value->size()}, p);
}

bool valid_proof(std::uint64_t j, const Signature& p, ProcessId w, const std::vector<Element>* epoch_set,
                 const crypto::KeyRegistry& registry) {
  if (epoch_set == nullptr) return false;
  const Digest d = epoch_digest(j, *epoch_set);
  return valid_proof_digest(j, p, w, &d, registry);
}

EpochProof make_epoch_proof(std::uint64_t epoch_no, std::span<const Element> elements, ProcessId signer,
                            const crypto::KeyPair& key) {
  const Digest d = epoch_digest(epoch_no, elements);
  return EpochProof{epoch_no, crypto::sign(key, ByteView{d.data(), d.size()}), signer};
}

}  // namespace setchain
