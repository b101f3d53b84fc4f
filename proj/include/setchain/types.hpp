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

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace setchain {

/// Identity of a server or client. Servers occupy 0..n-1; clients are
/// numbered from n upward so the two ranges never overlap. The role a
/// process plays is recorded in the KeyRegistry, not in the id itself.
struct ProcessId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(const ProcessId&, const ProcessId&) = default;
};

enum class Role : std::uint8_t { kClient, kServer };

/// Virtual simulation time, measured from the start of a run.
using VirtualTime = std::chrono::microseconds;

inline double to_millis(VirtualTime t) { return static_cast<double>(t.count()) / 1000.0; }
inline double to_seconds(VirtualTime t) { return static_cast<double>(t.count()) / 1e6; }
inline VirtualTime from_millis(double ms) {
  return VirtualTime{static_cast<std::int64_t>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5))};
}

/// Raised when a value cannot be put on the wire within protocol limits.
class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid configuration (scenario keys, fault bounds, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the analytical formulas when a precondition does not hold.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace setchain

template <>
struct std::hash<setchain::ProcessId> {
  std::size_t operator()(const setchain::ProcessId& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.value);
  }
};
