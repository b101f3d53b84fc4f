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

#include "setchain/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace setchain {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end || v.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys{
      "algorithm",          "n",
      "f",                  "sending_rate",
      "collector_limit",    "network_delay_ms",
      "block_capacity_bytes", "block_interval_ms",
      "collector_timeout_ms", "request_timeout_ms",
      "mempool_max_txs",    "mempool_max_bytes",
      "element_size_mode",  "injection_duration_s",
      "seed",               "adversaries",
      "produce_empty_blocks", "max_virtual_time_s",
      "max_element_size",   "adversary_rate",
      "codec",              "brotli_quality",
      "hashchain_literal_counting", "hashchain_no_hash_reversal",
  };
  return keys;
}

void set_scenario_key(Scenario& s, const std::string& key, const std::string& value) {
  SystemConfig& c = s.config;
  if (key == "algorithm") {
    const auto a = parse_algorithm(value);
    if (!a) throw ConfigError("algorithm: unknown algorithm '" + value + "'");
    s.algorithm = *a;
  } else if (key == "n") {
    c.n = parse_u64(key, value);
  } else if (key == "f") {
    c.f = parse_u64(key, value);
  } else if (key == "sending_rate") {
    c.sending_rate = parse_double(key, value);
  } else if (key == "collector_limit") {
    c.collector_limit = parse_u64(key, value);
  } else if (key == "network_delay_ms") {
    c.network_delay_ms = parse_double(key, value);
  } else if (key == "block_capacity_bytes") {
    c.block_capacity = parse_u64(key, value);
  } else if (key == "block_interval_ms") {
    c.block_interval_ms = parse_double(key, value);
  } else if (key == "collector_timeout_ms") {
    c.collector_timeout_ms = parse_double(key, value);
  } else if (key == "request_timeout_ms") {
    c.request_timeout_ms = parse_double(key, value);
  } else if (key == "mempool_max_txs") {
    c.mempool_max_txs = parse_u64(key, value);
  } else if (key == "mempool_max_bytes") {
    c.mempool_max_bytes = parse_u64(key, value);
  } else if (key == "element_size_mode") {
    const auto m = ElementSizeMode::parse(value);
    if (!m) throw ConfigError("element_size_mode: expected fixed:<len> or lognormal:<mean>:<sigma>, got '" + value + "'");
    c.element_size_mode = *m;
  } else if (key == "injection_duration_s") {
    c.injection_duration_s = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_u64(key, value);
  } else if (key == "adversaries") {
    s.adversaries = parse_adversary_mix(value);
  } else if (key == "produce_empty_blocks") {
    c.produce_empty_blocks = parse_bool(key, value);
  } else if (key == "max_virtual_time_s") {
    c.max_virtual_time_s = parse_double(key, value);
  } else if (key == "max_element_size") {
    c.max_element_size = parse_u64(key, value);
  } else if (key == "adversary_rate") {
    c.adversary_rate = parse_double(key, value);
  } else if (key == "codec") {
    c.codec = value;
  } else if (key == "brotli_quality") {
    c.brotli_quality = static_cast<int>(parse_u64(key, value));
  } else if (key == "hashchain_literal_counting") {
    c.hashchain_literal_counting = parse_bool(key, value);
  } else if (key == "hashchain_no_hash_reversal") {
    c.hashchain_no_hash_reversal = parse_bool(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  Scenario s;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_scenario_key(s, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    s.config.validate();
    assign_adversaries(s.config, s.adversaries);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

std::string to_text(const Scenario& s) {
  const SystemConfig& c = s.config;
  std::ostringstream out;
  out << "algorithm=" << to_string(s.algorithm) << '\n'
      << "n=" << c.n << '\n'
      << "f=" << c.fault_bound() << '\n'
      << "sending_rate=" << format_double(c.sending_rate) << '\n'
      << "collector_limit=" << c.collector_limit << '\n'
      << "network_delay_ms=" << format_double(c.network_delay_ms) << '\n'
      << "block_capacity_bytes=" << c.block_capacity << '\n'
      << "block_interval_ms=" << format_double(c.block_interval_ms) << '\n'
      << "collector_timeout_ms=" << format_double(c.collector_timeout_ms) << '\n'
      << "request_timeout_ms=" << format_double(c.request_timeout_ms) << '\n'
      << "mempool_max_txs=" << c.mempool_max_txs << '\n'
      << "mempool_max_bytes=" << c.mempool_max_bytes << '\n'
      << "element_size_mode=" << c.element_size_mode.to_string() << '\n'
      << "injection_duration_s=" << format_double(c.injection_duration_s) << '\n'
      << "seed=" << c.seed << '\n'
      << "adversaries=" << to_string(s.adversaries) << '\n'
      << "produce_empty_blocks=" << (c.produce_empty_blocks ? "true" : "false") << '\n'
      << "max_virtual_time_s=" << format_double(c.max_virtual_time_s) << '\n'
      << "max_element_size=" << c.max_element_size << '\n'
      << "adversary_rate=" << format_double(c.adversary_rate) << '\n'
      << "codec=" << c.codec << '\n'
      << "brotli_quality=" << c.brotli_quality << '\n'
      << "hashchain_literal_counting=" << (c.hashchain_literal_counting ? "true" : "false") << '\n'
      << "hashchain_no_hash_reversal=" << (c.hashchain_no_hash_reversal ? "true" : "false") << '\n';
  return out.str();
}

SweepAxis parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("sweep: expected key=v1,v2,... got '" + text + "'");
  SweepAxis axis;
  axis.key = trim(text.substr(0, eq));
  std::istringstream in(text.substr(eq + 1));
  std::string v;
  while (std::getline(in, v, ',')) {
    v = trim(v);
    if (v.empty()) throw ConfigError("sweep " + axis.key + ": empty value");
    axis.values.push_back(v);
  }
  if (axis.values.empty()) throw ConfigError("sweep " + axis.key + ": no values");
  Scenario probe;
  try {
    set_scenario_key(probe, axis.key, axis.values.front());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
  return axis;
}

std::vector<std::vector<std::pair<std::string, std::string>>> sweep_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& p : points) {
      for (const std::string& v : axis.values) {
        auto q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace setchain
