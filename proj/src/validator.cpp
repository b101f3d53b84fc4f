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

#include "setchain/validator.hpp"

#include "setchain/kernels.hpp"

namespace setchain {

bool Validator::element(Element& e) {
  ++element_checks_;
  auto it = elements_.find(e);
  if (it != elements_.end()) {
    e = it->first;
    return it->second;
  }
  ++signature_verifications_;
  const bool ok = valid_element(e, registry_);
  elements_.emplace(e, ok);
  return ok;
}

void Validator::prevalidate(std::span<const Element> batch) {
  std::vector<Element> fresh;
  for (const Element& e : batch) {
    if (!elements_.contains(e)) fresh.push_back(e);
  }
  if (fresh.empty()) return;
  const std::vector<std::uint8_t> ok = kernels::validate_elements(fresh, registry_);
  signature_verifications_ += fresh.size();
  for (std::size_t i = 0; i < fresh.size(); ++i) elements_.emplace(fresh[i], ok[i] != 0);
}

bool Validator::proof(const EpochProof& p, const Digest* epoch_digest_value) {
  if (epoch_digest_value == nullptr || p.epoch_no == 0) return false;
  return server_signature(p.signer, ByteView{epoch_digest_value->data(), epoch_digest_value->size()}, p.proof_sig);
}

bool Validator::server_signature(ProcessId signer, ByteView message, const Signature& sig) {
  const auto* entry = registry_.find(signer);
  if (entry == nullptr || entry->role != Role::kServer) return false;
  const std::uint64_t before = memo_.hits();
  const bool ok = memo_.verify(signer, entry->public_key, message, sig);
  if (memo_.hits() == before) ++signature_verifications_;
  return ok;
}

}  // namespace setchain
