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

#include "setchain/config.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace setchain {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kVanilla:
      return "vanilla";
    case Algorithm::kCompresschain:
      return "compresschain";
    case Algorithm::kHashchain:
      return "hashchain";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "vanilla") return Algorithm::kVanilla;
  if (name == "compresschain") return Algorithm::kCompresschain;
  if (name == "hashchain") return Algorithm::kHashchain;
  return std::nullopt;
}

std::string ElementSizeMode::to_string() const {
  std::ostringstream out;
  if (kind == Kind::kFixed) {
    out << "fixed:" << mean;
  } else {
    out << "lognormal:" << mean << ':' << sigma;
  }
  return out.str();
}

std::optional<ElementSizeMode> ElementSizeMode::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 2 && parts[0] == "fixed") {
      const double len = std::stod(parts[1]);
      if (!(len > 0)) return std::nullopt;
      return fixed(len);
    }
    if (parts.size() == 3 && parts[0] == "lognormal") {
      const double mean = std::stod(parts[1]);
      const double sigma = std::stod(parts[2]);
      if (!(mean > 0) || !(sigma >= 0)) return std::nullopt;
      return lognormal(mean, sigma);
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

void SystemConfig::validate() const {
  if (n == 0) throw ConfigError("n must be positive");
  const std::uint64_t fb = fault_bound();
  if (2 * fb >= n) throw ConfigError("f must satisfy f < n/2");
  if (block_capacity == 0) throw ConfigError("block_capacity_bytes must be positive");
  if (!(block_interval_ms > 0)) throw ConfigError("block_interval_ms must be positive");
  if (collector_limit <= n) throw ConfigError("collector_limit must exceed n");
  if (!(sending_rate >= 0) || !std::isfinite(sending_rate)) throw ConfigError("sending_rate must be non-negative");
  if (!(network_delay_ms >= 0)) throw ConfigError("network_delay_ms must be non-negative");
  if (!(collector_timeout_ms > 0)) throw ConfigError("collector_timeout_ms must be positive");
  if (!(request_timeout_ms > 0)) throw ConfigError("request_timeout_ms must be positive");
  if (!(injection_duration_s >= 0)) throw ConfigError("injection_duration_s must be non-negative");
  if (!(max_virtual_time_s > 0)) throw ConfigError("max_virtual_time_s must be positive");
  if (mempool_max_txs == 0 || mempool_max_bytes == 0) throw ConfigError("mempool limits must be positive");
  if (max_element_size == 0) throw ConfigError("max_element_size must be positive");
  if (!(element_size_mode.mean > 0)) throw ConfigError("element_size_mode mean must be positive");
  if (!(adversary_rate >= 0) || !std::isfinite(adversary_rate)) throw ConfigError("adversary_rate must be non-negative");
  if (codec != "brotli" && codec != "null") throw ConfigError("codec must be brotli or null");
  if (brotli_quality < 0 || brotli_quality > 11) throw ConfigError("brotli_quality must be in 0..11");
}

}  // namespace setchain
