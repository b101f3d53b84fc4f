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

#include "setchain/kernels.hpp"

#include <omp.h>

namespace setchain::kernels {

std::vector<std::uint8_t> validate_elements(std::span<const Element> elements, const crypto::KeyRegistry& registry) {
  std::vector<std::uint8_t> out(elements.size(), 0);
  const auto count = static_cast<std::int64_t>(elements.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) out[i] = valid_element(elements[i], registry) ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> validate_elements_serial(std::span<const Element> elements,
                                                   const crypto::KeyRegistry& registry) {
  std::vector<std::uint8_t> out;
  out.reserve(elements.size());
  for (const Element& e : elements) out.push_back(valid_element(e, registry) ? 1 : 0);
  return out;
}

Corpus generate_corpus(const CorpusSpec& spec, const std::map<ProcessId, crypto::KeyPair>& client_keys) {
  const std::uint64_t total = corpus_size(spec);
  std::vector<std::optional<CorpusEntry>> slots(total);
  const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < count; ++i) {
    slots[i] = make_corpus_entry(spec, static_cast<std::uint64_t>(i), client_keys);
  }
  Corpus corpus{spec, {}};
  corpus.entries.reserve(total);
  for (auto& s : slots) corpus.entries.push_back(std::move(*s));
  return corpus;
}

Corpus generate_corpus_serial(const CorpusSpec& spec, const std::map<ProcessId, crypto::KeyPair>& client_keys) {
  const std::uint64_t total = corpus_size(spec);
  Corpus corpus{spec, {}};
  corpus.entries.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) corpus.entries.push_back(make_corpus_entry(spec, i, client_keys));
  return corpus;
}

std::vector<Digest> digest_all(std::span<const Bytes> inputs) {
  std::vector<Digest> out(inputs.size());
  const auto count = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) out[i] = crypto::sha512(inputs[i]);
  return out;
}

std::vector<Digest> digest_all_serial(std::span<const Bytes> inputs) {
  std::vector<Digest> out;
  out.reserve(inputs.size());
  for (const Bytes& b : inputs) out.push_back(crypto::sha512(b));
  return out;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace setchain::kernels
