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
#include <set>
#include <unordered_set>
#include <vector>

#include "setchain/element.hpp"

namespace setchain {

using Epoch = std::vector<Element>;

/// (the_set, history, epoch, proofs) as returned by get(). A snapshot is a
/// value: later activity on the server never changes it.
struct SetchainSnapshot {
  std::unordered_set<Element> the_set;
  /// history[j-1] holds epoch j; keys are therefore exactly 1..epoch.
  std::vector<std::shared_ptr<const Epoch>> history;
  std::uint64_t epoch = 0;
  std::set<EpochProof> proofs;

  const Epoch& at(std::uint64_t j) const { return *history.at(j - 1); }
  bool in_history(const Element& e) const;

  friend bool operator==(const SetchainSnapshot& a, const SetchainSnapshot& b);
};

/// Server-side Setchain state shared by the three algorithms. Keeps an index
/// of every element already placed in an epoch and the digest of each epoch
/// so proofs can be checked without rehashing.
class SetchainState {
 public:
  bool in_set(const Element& e) const { return the_set_.contains(e); }
  bool in_history(const Element& e) const { return in_history_.contains(e); }

  /// Returns true when `e` was not already present.
  bool add_to_set(const Element& e) { return the_set_.insert(e).second; }

  /// Appends epoch `epoch()+1` with contents `g`; every element must already
  /// be in the_set and none in history. Returns the new epoch number.
  std::uint64_t append_epoch(Epoch g);

  std::uint64_t epoch() const { return history_.size(); }
  const Epoch* epoch_contents(std::uint64_t j) const;
  const Digest* epoch_digest_of(std::uint64_t j) const;

  bool add_proof(const EpochProof& p) { return proofs_.insert(p).second; }
  const std::set<EpochProof>& proofs() const { return proofs_; }
  const std::unordered_set<Element>& the_set() const { return the_set_; }
  const std::vector<std::shared_ptr<const Epoch>>& history() const { return history_; }

  SetchainSnapshot snapshot() const;

 private:
  std::unordered_set<Element> the_set_;
  std::unordered_set<Element> in_history_;
  std::vector<std::shared_ptr<const Epoch>> history_;
  std::vector<Digest> digests_;
  std::set<EpochProof> proofs_;
};

}  // namespace setchain
