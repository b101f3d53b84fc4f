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

#include "setchain/state.hpp"

#include <cassert>

namespace setchain {

bool SetchainSnapshot::in_history(const Element& e) const {
  for (const auto& ep : history) {
    for (const Element& x : *ep) {
      if (x == e) return true;
    }
  }
  return false;
}

bool operator==(const SetchainSnapshot& a, const SetchainSnapshot& b) {
  if (a.epoch != b.epoch || a.the_set != b.the_set || a.proofs != b.proofs) return false;
  if (a.history.size() != b.history.size()) return false;
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    if (*a.history[i] != *b.history[i]) return false;
  }
  return true;
}

std::uint64_t SetchainState::append_epoch(Epoch g) {
  const std::uint64_t j = history_.size() + 1;
  for (const Element& e : g) {
    assert(the_set_.contains(e));
    in_history_.insert(e);
  }
  digests_.push_back(setchain::epoch_digest(j, g));
  history_.push_back(std::make_shared<const Epoch>(std::move(g)));
  return j;
}

const Epoch* SetchainState::epoch_contents(std::uint64_t j) const {
  if (j == 0 || j > history_.size()) return nullptr;
  return history_[j - 1].get();
}

const Digest* SetchainState::epoch_digest_of(std::uint64_t j) const {
  if (j == 0 || j > digests_.size()) return nullptr;
  return &digests_[j - 1];
}

SetchainSnapshot SetchainState::snapshot() const {
  SetchainSnapshot s;
  s.the_set = the_set_;
  s.history = history_;
  s.epoch = history_.size();
  s.proofs = proofs_;
  return s;
}

}  // namespace setchain
