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
#include <set>
#include <string>
#include <vector>

#include "setchain/config.hpp"
#include "setchain/server.hpp"

namespace setchain {

enum class AdversaryKind {
  kSilent,
  kGarbageAppender,
  kWithholder,
  kSelectiveServer,
  kWrongBatchServer,
  kForgedProofSpammer,
};

std::string to_string(AdversaryKind k);
std::optional<AdversaryKind> parse_adversary_kind(const std::string& name);

struct AdversaryCount {
  AdversaryKind kind = AdversaryKind::kSilent;
  std::uint64_t count = 0;

  friend bool operator==(const AdversaryCount&, const AdversaryCount&) = default;
};

using AdversaryMix = std::vector<AdversaryCount>;

/// "Kind:count,Kind:count"; empty text or "none" is the empty mix. Throws
/// ConfigError on malformed entries.
AdversaryMix parse_adversary_mix(const std::string& text);
std::string to_string(const AdversaryMix& mix);
std::uint64_t adversary_total(const AdversaryMix& mix);

/// Server ids taken by the mix, highest ids first, in mix order. Throws
/// ConfigError when the mix holds more than f adversaries.
std::vector<std::pair<ProcessId, AdversaryKind>> assign_adversaries(const SystemConfig& cfg, const AdversaryMix& mix);

struct AdversaryAction {
  enum class Kind {
    kGarbageBytes,
    kInvalidElement,
    kInjectBytes,
    kForgedSignatureProof,
    kFutureEpochProof,
  };
  VirtualTime at{};
  ProcessId actor;
  Kind kind = Kind::kGarbageBytes;
  std::uint64_t nonce = 0;

  friend bool operator==(const AdversaryAction&, const AdversaryAction&) = default;
};

/// Deterministic action stream for one adversary over the injection
/// window: floor(adversary_rate * injection_duration_s) actions for the
/// kinds that act on their own, none for the others.
std::vector<AdversaryAction> adversary_schedule(const SystemConfig& cfg, AdversaryKind kind, ProcessId identity);

/// Byzantine server for `algorithm`. Kinds defined only in terms of hash
/// reversal run the honest algorithm elsewhere. `targets` is the set of
/// servers a SelectiveServer answers.
std::unique_ptr<Server> make_adversary(AdversaryKind kind, Algorithm algorithm, ServerContext ctx,
                                       std::set<ProcessId> targets = {});

/// Honest server for `algorithm`.
std::unique_ptr<Server> make_server(Algorithm algorithm, ServerContext ctx);

}  // namespace setchain
