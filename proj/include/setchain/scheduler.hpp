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
#include <functional>
#include <vector>

#include "setchain/types.hpp"

namespace setchain {

/// One pending action on the virtual clock.
struct Event {
  VirtualTime fire_time{};
  std::uint64_t sequence = 0;
  std::uint64_t target = 0;
  std::function<void()> action;
};

/// Discrete-event queue. Events run in (fire_time, sequence) order; ties on
/// time keep scheduling order. Actions may schedule further events.
class Scheduler {
 public:
  VirtualTime now() const { return now_; }

  /// Schedules at `t`; times in the past are clamped to now.
  std::uint64_t at(VirtualTime t, std::function<void()> action, std::uint64_t target = 0);
  std::uint64_t after(VirtualTime delay, std::function<void()> action, std::uint64_t target = 0) {
    return at(now_ + delay, std::move(action), target);
  }

  /// Runs the earliest event. Returns false when the queue is empty.
  bool step();

  /// Runs every event with fire_time <= limit, then advances the clock to
  /// `limit`. `stop` is polled after each event.
  void run_until(VirtualTime limit, const std::function<bool()>& stop = {});

  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t processed() const { return processed_; }
  VirtualTime next_time() const;

 private:
  static bool later(const Event& a, const Event& b) {
    if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
    return a.sequence > b.sequence;
  }

  std::vector<Event> queue_;
  VirtualTime now_{0};
  std::uint64_t next_sequence_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace setchain
