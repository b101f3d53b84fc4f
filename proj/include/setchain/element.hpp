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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <variant>
#include <vector>

#include "setchain/bytes.hpp"
#include "setchain/crypto.hpp"
#include "setchain/types.hpp"

namespace setchain {

inline constexpr std::uint8_t kElementTag = 0x01;
inline constexpr std::uint8_t kEpochProofTag = 0x02;
inline constexpr std::uint8_t kCompressedBatchTag = 0x03;
inline constexpr std::uint8_t kHashBatchTag = 0x04;

inline constexpr std::size_t kDefaultMaxElementSize = 16 * 1024;
/// tag + creator + payload length + signature
inline constexpr std::size_t kElementOverhead = 1 + 8 + 4 + kSignatureSize;
inline constexpr std::size_t kEpochProofSize = 139;

/// A client-created, client-signed payload. Immutable; copies share one
/// representation, so passing Elements around by value is cheap.
class Element {
 public:
  /// Throws EncodingError when the payload is empty or longer than
  /// `max_payload`.
  static Element make(ProcessId creator, ByteView payload, const Signature& sig,
                      std::size_t max_payload = kDefaultMaxElementSize);

  /// Builds and signs an element with the creator's key.
  static Element sign(ProcessId creator, ByteView payload, const crypto::KeyPair& key,
                      std::size_t max_payload = kDefaultMaxElementSize);

  ProcessId creator() const { return data_->creator; }
  ByteView payload() const;
  const Signature& sig() const { return data_->sig; }

  /// 0x01 || creator (u64 BE) || payload length (u32 BE) || payload || sig
  const Bytes& canonical_bytes() const { return data_->canonical; }
  /// The signed message: canonical bytes without the trailing signature.
  ByteView pre_signature_bytes() const;
  std::size_t hash() const { return data_->hash; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.data_ == b.data_ || (a.data_->hash == b.data_->hash && a.data_->canonical == b.data_->canonical);
  }
  /// Lexicographic order of canonical bytes.
  friend bool operator<(const Element& a, const Element& b) { return a.data_->canonical < b.data_->canonical; }

 private:
  struct Data {
    ProcessId creator;
    Signature sig{};
    Bytes canonical;
    std::size_t hash = 0;
  };
  explicit Element(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  std::shared_ptr<const Data> data_;
};

/// The message a client signs for (creator, payload).
Bytes element_signing_bytes(ProcessId creator, ByteView payload);

/// Canonical serialization; never fails for a constructed Element.
inline const Bytes& canonical_element_bytes(const Element& e) { return e.canonical_bytes(); }

/// Inverse of canonical_element_bytes. The whole input must be consumed.
std::optional<Element> decode_element(ByteView bytes, std::size_t max_payload = kDefaultMaxElementSize);

/// A server's signature over epoch_digest(epoch_no, history[epoch_no]).
struct EpochProof {
  std::uint64_t epoch_no = 0;
  Signature proof_sig{};
  ProcessId signer;

  friend bool operator==(const EpochProof&, const EpochProof&) = default;
  friend auto operator<=>(const EpochProof& a, const EpochProof& b) {
    if (auto c = a.epoch_no <=> b.epoch_no; c != 0) return c;
    if (auto c = a.signer <=> b.signer; c != 0) return c;
    return a.proof_sig <=> b.proof_sig;
  }
};

/// Fixed 139-byte form: 0x02 || epoch (u64 BE) || sig || signer (u64 BE) || 58 zero bytes.
Bytes encode_epoch_proof(const EpochProof& p);
std::optional<EpochProof> decode_epoch_proof(ByteView bytes);

/// SHA-512 over epoch (u64 BE) followed by every element's canonical bytes,
/// each prefixed with its u32 BE length, in ascending byte order. The result
/// does not depend on the order of `elements`.
Digest epoch_digest(std::uint64_t epoch_no, std::span<const Element> elements);

using BatchItem = std::variant<Element, EpochProof>;

Bytes encode_batch_item(const BatchItem& item);
/// Dispatches on the tag byte.
std::optional<BatchItem> decode_batch_item(ByteView bytes, std::size_t max_payload = kDefaultMaxElementSize);

/// Elements and epoch-proofs collected for one ledger transaction, in
/// insertion order without duplicates.
class Batch {
 public:
  /// Returns false (and leaves the batch unchanged) for a duplicate.
  bool add(const BatchItem& item);
  bool contains(const BatchItem& item) const;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<BatchItem>& items() const { return items_; }
  std::uint64_t encoded_size() const { return encoded_size_; }

  /// u32 BE item count, then every item as u32 BE length || tagged bytes.
  Bytes serialize() const;
  void clear();

  /// Splits into two halves preserving order.
  std::pair<Batch, Batch> split() const;

 private:
  std::vector<BatchItem> items_;
  std::vector<Bytes> encoded_;
  std::unordered_set<std::string> seen_;
  std::uint64_t encoded_size_ = 4;
};

/// Parses the batch wire form. Framing errors (bad counts, truncated lengths,
/// trailing bytes) reject the whole batch; items that frame correctly but do
/// not parse are dropped individually.
std::optional<std::vector<BatchItem>> decode_batch(ByteView bytes, std::size_t max_payload = kDefaultMaxElementSize);

bool valid_element(const Element& e, const crypto::KeyRegistry& registry);

/// `epoch_set` is null when epoch `j` is not (yet) in the local history.
bool valid_proof(std::uint64_t j, const Signature& p, ProcessId w, const std::vector<Element>* epoch_set,
                 const crypto::KeyRegistry& registry);

/// Same check against a precomputed epoch digest.
bool valid_proof_digest(std::uint64_t j, const Signature& p, ProcessId w, const Digest* epoch_digest_value,
                        const crypto::KeyRegistry& registry);

/// Epoch-proof for (epoch_no, elements) signed with `key`.
EpochProof make_epoch_proof(std::uint64_t epoch_no, std::span<const Element> elements, ProcessId signer,
                            const crypto::KeyPair& key);

}  // namespace setchain

template <>
struct std::hash<setchain::Element> {
  std::size_t operator()(const setchain::Element& e) const noexcept { return e.hash(); }
};

template <>
struct std::hash<setchain::EpochProof> {
  std::size_t operator()(const setchain::EpochProof& p) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(p.epoch_no) * 31 + std::hash<std::uint64_t>{}(p.signer.value);
    for (int i = 0; i < 8; ++i) h = h * 131 + p.proof_sig[i];
    return h;
  }
};
