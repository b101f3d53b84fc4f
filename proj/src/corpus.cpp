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

#include "setchain/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace setchain {

namespace {

constexpr std::size_t kMinElementLength = 64;
constexpr std::size_t kEcdsaSigLength = 65;
// Short payloads are pure random bytes; 16 keeps them from colliding.
constexpr std::size_t kMinPayloadLength = 16;

using Address = std::array<std::uint8_t, 20>;

// Popular contracts, routers and token addresses recur across real traffic.
// The pools are fixed for every run so the corpus compresses the same way
// regardless of the scenario seed.
struct Pools {
  std::array<Address, 24> contracts{};
  std::array<Address, 64> accounts{};
  std::array<std::array<std::uint8_t, 4>, 16> selectors{};
  std::array<std::array<std::uint8_t, 5>, 4> fees{};
  std::array<std::array<std::uint8_t, 4>, 6> gas_limits{};

  Pools() {
    std::mt19937_64 rng(0x5e7c4a1bULL);
    auto fill = [&](auto& arr) {
      for (auto& b : arr) b = static_cast<std::uint8_t>(rng());
    };
    for (auto& a : contracts) fill(a);
    for (auto& a : accounts) fill(a);
    for (auto& s : selectors) fill(s);
    for (auto& f : fees) {
      fill(f);
      f[3] = 0;
      f[4] = 0;
    }
    for (auto& g : gas_limits) {
      fill(g);
      g[0] = 0;
      g[3] = 0;
    }
  }
};

const Pools& pools() {
  static const Pools p;
  return p;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ (index * 0x9E3779B97F4A7C15ULL) ^ 0xD1B54A32D192ED03ULL;
}

// Skewed pick: low indices are far more common.
std::size_t skewed_index(std::mt19937_64& rng, std::size_t size) {
  std::geometric_distribution<std::size_t> geo(0.35);
  return std::min(size - 1, geo(rng));
}

template <std::size_t N>
void append(Bytes& out, const std::array<std::uint8_t, N>& a) {
  out.insert(out.end(), a.begin(), a.end());
}

void append_random(Bytes& out, std::mt19937_64& rng, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(rng()));
}

void append_word(Bytes& out, std::mt19937_64& rng) {
  const Pools& p = pools();
  std::uniform_int_distribution<int> kind(0, 99);
  const int k = kind(rng);
  if (k < 48) {
    out.insert(out.end(), 12, 0);
    if (k < 47) {
      append(out, p.accounts[skewed_index(rng, p.accounts.size())]);
    } else {
      append_random(out, rng, 20);
    }
  } else if (k < 85) {
    std::uniform_int_distribution<std::size_t> width(1, 3);
    const std::size_t w = width(rng);
    out.insert(out.end(), 32 - w, 0);
    append_random(out, rng, w);
  } else if (k < 98) {
    out.insert(out.end(), 31, 0);
    out.push_back(static_cast<std::uint8_t>(0x20 * (1 + rng() % 4)));
  } else {
    append_random(out, rng, 32);
  }
}

}  // namespace

CorpusSpec CorpusSpec::from_config(const SystemConfig& cfg) {
  CorpusSpec s;
  s.seed = cfg.seed;
  s.servers = cfg.n;
  s.sending_rate = cfg.sending_rate;
  s.duration_s = cfg.injection_duration_s;
  s.size = cfg.element_size_mode;
  s.max_element_size = cfg.max_element_size;
  return s;
}

std::uint64_t corpus_size(const CorpusSpec& spec) {
  return static_cast<std::uint64_t>(std::llround(spec.sending_rate * spec.duration_s));
}

VirtualTime arrival_time(const CorpusSpec& spec, std::uint64_t index) {
  const double us = static_cast<double>(index) * 1e6 / spec.sending_rate;
  return VirtualTime{static_cast<std::int64_t>(std::floor(us))};
}

std::size_t sample_element_length(const CorpusSpec& spec, std::uint64_t index) {
  double len = spec.size.mean;
  if (spec.size.kind == ElementSizeMode::Kind::kLognormal && spec.size.sigma > 0) {
    // Moment-matched lognormal: mean m and standard deviation s of the
    // length itself.
    const double m = spec.size.mean;
    const double s = spec.size.sigma;
    const double var_log = std::log1p((s * s) / (m * m));
    const double mu = std::log(m) - var_log / 2.0;
    std::mt19937_64 rng(mix_seed(spec.seed, index) ^ 0xA5A5A5A5ULL);
    std::lognormal_distribution<double> dist(mu, std::sqrt(var_log));
    len = dist(rng);
  }
  const double max_len = static_cast<double>(spec.max_element_size + kElementOverhead);
  len = std::clamp(std::round(len), static_cast<double>(kMinElementLength), max_len);
  return static_cast<std::size_t>(len);
}

Bytes synthetic_payload(std::uint64_t seed, std::uint64_t index, std::size_t length) {
  std::mt19937_64 rng(mix_seed(seed, index));
  Bytes out;
  if (length <= kEcdsaSigLength + 8) {
    append_random(out, rng, length);
    return out;
  }
  const Pools& p = pools();
  const std::size_t body_len = length - kEcdsaSigLength;
  out.reserve(length + 64);
  out.push_back(0x02);
  out.push_back(0xf8);
  out.push_back(0xa4);
  out.push_back(0xb1);
  out.push_back(0x83);
  out.push_back(0x00);
  append_random(out, rng, 2);
  append(out, p.fees[rng() % 2]);
  append(out, p.fees[2 + rng() % 2]);
  append(out, p.gas_limits[skewed_index(rng, p.gas_limits.size())]);
  out.push_back(0x94);
  append(out, p.contracts[skewed_index(rng, p.contracts.size())]);
  if (rng() % 100 < 85) {
    out.push_back(0x80);
  } else {
    out.push_back(0x88);
    append_random(out, rng, 8);
  }
  out.push_back(0xb9);
  out.push_back(static_cast<std::uint8_t>(body_len >> 8));
  out.push_back(static_cast<std::uint8_t>(body_len));
  append(out, p.selectors[skewed_index(rng, p.selectors.size())]);
  while (out.size() < body_len) append_word(out, rng);
  out.resize(body_len);
  append_random(out, rng, kEcdsaSigLength);
  return out;
}

CorpusEntry make_corpus_entry(const CorpusSpec& spec, std::uint64_t index,
                              const std::map<ProcessId, crypto::KeyPair>& client_keys) {
  const std::uint64_t c = index % spec.servers;
  CorpusEntry entry{
      .id = index,
      .client = ProcessId{spec.servers + c},
      .server = ProcessId{c},
      .t_add = arrival_time(spec, index),
      .element = Element::make(ProcessId{0}, Bytes{0}, Signature{}),
  };
  const std::size_t total = sample_element_length(spec, index);
  const std::size_t payload_len =
      std::clamp<std::size_t>(total > kElementOverhead ? total - kElementOverhead : 0,
                             std::min(kMinPayloadLength, spec.max_element_size), spec.max_element_size);
  const Bytes payload = synthetic_payload(spec.seed, index, payload_len);
  entry.element = Element::sign(entry.client, payload, client_keys.at(entry.client), spec.max_element_size);
  return entry;
}

}  // namespace setchain
