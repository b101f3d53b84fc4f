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

#include "setchain/crypto.hpp"

#include <sodium.h>

#include <sstream>
#include <stdexcept>

namespace setchain::crypto {

namespace {
struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  }
};

void ensure_sodium() { static const SodiumInit init; }
}  // namespace

Digest sha512(ByteView message) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha512(out.data(), message.data(), message.size());
  return out;
}

KeyPair generate_keypair(ByteView seed_material) {
  if (seed_material.empty()) throw std::invalid_argument("generate_keypair: empty seed material");
  ensure_sodium();
  const Digest expanded = sha512(seed_material);
  KeyPair kp;
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret.data(), expanded.data());
  return kp;
}

KeyPair derive_keypair(std::uint64_t global_seed, ProcessId id) {
  Bytes material;
  put_bytes(material, ByteView{reinterpret_cast<const std::uint8_t*>("setchain-key"), 12});
  put_u64_be(material, global_seed);
  put_u64_be(material, id.value);
  return generate_keypair(material);
}

Signature sign(const KeyPair& key, ByteView message) {
  ensure_sodium();
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.secret.data());
  return sig;
}

bool verify(ByteView public_key, ByteView message, ByteView sig) {
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES || sig.size() != crypto_sign_BYTES) return false;
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), public_key.data()) == 0;
}

void KeyRegistry::add(ProcessId id, const PublicKey& key, Role role) {
  entries_[id] = RegistryEntry{key, role};
}

const RegistryEntry* KeyRegistry::find(ProcessId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

bool KeyRegistry::is_server(ProcessId id) const {
  const auto* e = find(id);
  return e != nullptr && e->role == Role::kServer;
}

bool KeyRegistry::is_client(ProcessId id) const {
  const auto* e = find(id);
  return e != nullptr && e->role == Role::kClient;
}

KeyRegistry KeyRegistry::build(std::uint64_t global_seed, std::uint64_t servers, std::uint64_t clients,
                               std::map<ProcessId, KeyPair>* secrets) {
  KeyRegistry reg;
  for (std::uint64_t i = 0; i < servers + clients; ++i) {
    const ProcessId id{i};
    KeyPair kp = derive_keypair(global_seed, id);
    reg.add(id, kp.public_key, i < servers ? Role::kServer : Role::kClient);
    if (secrets != nullptr) (*secrets)[id] = kp;
  }
  return reg;
}

std::string KeyRegistry::to_text() const {
  std::ostringstream out;
  for (const auto& [id, entry] : entries_) {
    out << id.value << ' ' << (entry.role == Role::kServer ? "server" : "client") << ' '
        << to_hex(entry.public_key) << '\n';
  }
  return out.str();
}

std::optional<KeyRegistry> KeyRegistry::from_text(const std::string& text) {
  KeyRegistry reg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::uint64_t id = 0;
    std::string role;
    std::string hex;
    if (!(fields >> id >> role >> hex)) return std::nullopt;
    auto key = from_hex(hex);
    if (!key || key->size() != kPublicKeySize) return std::nullopt;
    if (role != "server" && role != "client") return std::nullopt;
    PublicKey pk{};
    std::copy(key->begin(), key->end(), pk.begin());
    reg.add(ProcessId{id}, pk, role == "server" ? Role::kServer : Role::kClient);
  }
  return reg;
}

bool VerifyMemo::verify(ProcessId signer, const PublicKey& pk, ByteView message, const Signature& sig) {
  std::string key;
  key.reserve(8 + message.size() + sig.size());
  for (int shift = 56; shift >= 0; shift -= 8) key.push_back(static_cast<char>(signer.value >> shift));
  key.append(as_string_view(message));
  key.append(reinterpret_cast<const char*>(sig.data()), sig.size());
  auto it = memo_.find(key);
  if (it != memo_.end()) {
    ++hits_;
    return it->second;
  }
  const bool ok = crypto::verify(pk, message, sig);
  memo_.emplace(std::move(key), ok);
  return ok;
}

}  // namespace setchain::crypto
