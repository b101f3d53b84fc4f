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
#include <span>
#include <vector>

#include "setchain/corpus.hpp"
#include "setchain/crypto.hpp"
#include "setchain/element.hpp"

/// Data-parallel kernels. Each has a serial reference with identical output;
/// the parallel versions use OpenMP and are what the simulator calls.
namespace setchain::kernels {

/// out[i] = valid_element(elements[i], registry).
std::vector<std::uint8_t> validate_elements(std::span<const Element> elements, const crypto::KeyRegistry& registry);
std::vector<std::uint8_t> validate_elements_serial(std::span<const Element> elements,
                                                   const crypto::KeyRegistry& registry);

/// Builds and signs every entry of the synthetic workload.
Corpus generate_corpus(const CorpusSpec& spec, const std::map<ProcessId, crypto::KeyPair>& client_keys);
Corpus generate_corpus_serial(const CorpusSpec& spec, const std::map<ProcessId, crypto::KeyPair>& client_keys);

/// SHA-512 of every input.
std::vector<Digest> digest_all(std::span<const Bytes> inputs);
std::vector<Digest> digest_all_serial(std::span<const Bytes> inputs);

int max_threads();

}  // namespace setchain::kernels
