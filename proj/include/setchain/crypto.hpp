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
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "setchain/bytes.hpp"
#include "setchain/types.hpp"

namespace setchain::crypto {

/// FIPS 180-4 SHA-512.
Digest sha512(ByteView message);

/// Ed25519 key pair. The secret holds libsodium's 64-byte expanded form
/// (seed || public key).
struct KeyPair {
  std::array<std::uint8_t, 64> secret{};
  PublicKey public_key{};
};

/// Deterministic key derivation: the 32-byte Ed25519 seed is the first half
/// of SHA-512(seed_material). Throws std::invalid_argument on empty input.
KeyPair generate_keypair(ByteView seed_material);

/// Key for process `id` under a run-wide seed.
KeyPair derive_keypair(std::uint64_t global_seed, ProcessId id);

/// Deterministic Ed25519 (RFC 8032) signature.
Signature sign(const KeyPair& key, ByteView message);

/// Never throws. Malformed keys or signatures of the wrong length yield false.
bool verify(ByteView public_key, ByteView message, ByteView sig);

inline bool verify(const PublicKey& pk, ByteView message, const Signature& sig) {
  return verify(ByteView{pk.data(), pk.size()}, message, ByteView{sig.data(), sig.size()});
}

struct RegistryEntry {
  PublicKey public_key{};
  Role role = Role::kClient;
};

/// Public-key infrastructure shared by every process. Built once during
/// setup and read-only afterwards.
class KeyRegistry {
 public:
  KeyRegistry() = default;

  void add(ProcessId id, const PublicKey& key, Role role);

  const RegistryEntry* find(ProcessId id) const;
  bool is_server(ProcessId id) const;
  bool is_client(ProcessId id) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<ProcessId, RegistryEntry>& entries() const { return entries_; }

  /// Registry (and private keys) for `servers` servers with ids 0..servers-1
  /// and `clients` clients with ids servers..servers+clients-1.
  static KeyRegistry build(std::uint64_t global_seed, std::uint64_t servers, std::uint64_t clients,
                           std::map<ProcessId, KeyPair>* secrets = nullptr);

  /// One line per process: "<id> <server|client> <hex public key>".
  std::string to_text() const;
  static std::optional<KeyRegistry> from_text(const std::string& text);

 private:
  std::map<ProcessId, RegistryEntry> entries_;
};

/// Memo for signature checks whose inputs repeat across the servers of one
/// simulation (hash-batches, epoch-proofs). The key is the full
/// (signer, message, signature) triple, so a hit is exactly a previous
/// verify() with identical inputs.
class VerifyMemo {
 public:
  bool verify(ProcessId signer, const PublicKey& pk, ByteView message, const Signature& sig);
  std::size_t size() const { return memo_.size(); }
  std::uint64_t hits() const { return hits_; }

 private:
  std::unordered_map<std::string, bool> memo_;
  std::uint64_t hits_ = 0;
};

}  // namespace setchain::crypto
