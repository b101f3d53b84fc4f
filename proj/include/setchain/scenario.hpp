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

#include <string>
#include <utility>
#include <vector>

#include "setchain/adversary.hpp"
#include "setchain/config.hpp"

namespace setchain {

/// A parsed scenario: configuration plus the algorithm and adversary mix.
struct Scenario {
  SystemConfig config;
  Algorithm algorithm = Algorithm::kHashchain;
  AdversaryMix adversaries;
};

/// Recognised keys, in documentation order.
const std::vector<std::string>& scenario_keys();

/// Sets one key. Throws ConfigError for unknown keys or malformed values.
void set_scenario_key(Scenario& s, const std::string& key, const std::string& value);

/// Flat key=value text; '#' starts a comment, blank lines are ignored,
/// repeated keys are an error. Missing keys keep the base-scenario
/// defaults. Errors carry "<source>:<line>: " and the configuration is
/// validated after parsing.
Scenario parse_scenario(const std::string& text, const std::string& source = "scenario");
Scenario load_scenario(const std::string& path);

/// key=value text that parse_scenario reads back to the same scenario.
std::string to_text(const Scenario& s);

/// One --sweep axis.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses "key=v1,v2,...". Throws ConfigError.
SweepAxis parse_sweep(const std::string& text);

/// Cartesian product of the axes, first axis varying slowest. Each point
/// lists (key, value) pairs in axis order. No axes gives one empty point.
std::vector<std::vector<std::pair<std::string, std::string>>> sweep_points(const std::vector<SweepAxis>& axes);

}  // namespace setchain
