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
#include <optional>
#include <string>

#include "setchain/element.hpp"
#include "setchain/types.hpp"

namespace setchain {

enum class Algorithm { kVanilla, kCompresschain, kHashchain };

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

/// Size model for synthetic elements. The sampled value is the element's
/// serialized length (what it occupies in a ledger block).
struct ElementSizeMode {
  enum class Kind { kFixed, kLognormal };
  Kind kind = Kind::kLognormal;
  double mean = 438.0;
  double sigma = 753.5;

  static ElementSizeMode fixed(double length) { return {Kind::kFixed, length, 0.0}; }
  static ElementSizeMode lognormal(double mean, double sigma) { return {Kind::kLognormal, mean, sigma}; }

  friend bool operator==(const ElementSizeMode&, const ElementSizeMode&) = default;

  std::string to_string() const;
  static std::optional<ElementSizeMode> parse(const std::string& text);
};

struct SystemConfig {
  std::uint64_t n = 10;
  /// Defaults to floor((n-1)/3) when unset.
  std::optional<std::uint64_t> f;
  double sending_rate = 10000.0;
  std::uint64_t collector_limit = 100;
  double network_delay_ms = 0.0;
  std::uint64_t block_capacity = 524288;
  double block_interval_ms = 1250.0;
  double collector_timeout_ms = 1000.0;
  double request_timeout_ms = 500.0;
  std::uint64_t mempool_max_txs = 10'000'000;
  std::uint64_t mempool_max_bytes = 2ULL * 1024 * 1024 * 1024;
  ElementSizeMode element_size_mode{};
  double injection_duration_s = 50.0;
  std::uint64_t seed = 42;
  bool produce_empty_blocks = false;
  double max_virtual_time_s = 600.0;
  std::size_t max_element_size = kDefaultMaxElementSize;
  /// Hashchain: count a signer only once its batch was fetched.
  bool hashchain_literal_counting = false;
  /// Hashchain: batch contents are known to every server without a
  /// request/response round.
  bool hashchain_no_hash_reversal = false;
  /// Garbage or forged actions per second for each scheduled adversary.
  double adversary_rate = 2.0;
  std::string codec = "brotli";
  int brotli_quality = 5;

  std::uint64_t fault_bound() const { return f.value_or((n - 1) / 3); }
  std::uint64_t quorum() const { return fault_bound() + 1; }

  VirtualTime network_delay() const { return from_millis(network_delay_ms); }
  VirtualTime block_interval() const { return from_millis(block_interval_ms); }
  VirtualTime collector_timeout() const { return from_millis(collector_timeout_ms); }
  VirtualTime request_timeout() const { return from_millis(request_timeout_ms); }
  VirtualTime injection_end() const { return from_millis(injection_duration_s * 1000.0); }
  VirtualTime max_virtual_time() const { return from_millis(max_virtual_time_s * 1000.0); }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

}  // namespace setchain
