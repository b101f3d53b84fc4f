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
#include <vector>

#include "setchain/config.hpp"
#include "setchain/crypto.hpp"
#include "setchain/element.hpp"

namespace setchain {

/// Parameters of the synthetic client workload.
struct CorpusSpec {
  std::uint64_t seed = 42;
  std::uint64_t servers = 10;
  double sending_rate = 10000.0;
  double duration_s = 50.0;
  ElementSizeMode size{};
  std::size_t max_element_size = kDefaultMaxElementSize;

  static CorpusSpec from_config(const SystemConfig& cfg);
  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

/// One client add. Client k mod n submits element k to its local server
/// k mod n at time k / sending_rate, so every client adds at
/// sending_rate / n.
struct CorpusEntry {
  std::uint64_t id = 0;
  ProcessId client;
  ProcessId server;
  VirtualTime t_add{};
  Element element;
};

struct Corpus {
  CorpusSpec spec;
  std::vector<CorpusEntry> entries;
};

std::uint64_t corpus_size(const CorpusSpec& spec);
VirtualTime arrival_time(const CorpusSpec& spec, std::uint64_t index);

/// Serialized length of element `index` (canonical bytes, before clipping to
/// the payload limit).
std::size_t sample_element_length(const CorpusSpec& spec, std::uint64_t index);

/// Transaction-like payload of `length` bytes: typed header fields, contract
/// addresses and selectors drawn from small pools, zero-padded ABI words, and
/// a trailing 65-byte ECDSA-style signature. Deterministic in (seed, index).
Bytes synthetic_payload(std::uint64_t seed, std::uint64_t index, std::size_t length);

/// Builds the unsigned parts of entry `index`; shared by the serial and
/// parallel corpus generators.
CorpusEntry make_corpus_entry(const CorpusSpec& spec, std::uint64_t index,
                              const std::map<ProcessId, crypto::KeyPair>& client_keys);

}  // namespace setchain
