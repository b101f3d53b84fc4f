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

#include "setchain/scheduler.hpp"

#include <algorithm>

namespace setchain {

std::uint64_t Scheduler::at(VirtualTime t, std::function<void()> action, std::uint64_t target) {
  const std::uint64_t seq = next_sequence_++;
  queue_.push_back(Event{std::max(t, now_), seq, target, std::move(action)});
  std::push_heap(queue_.begin(), queue_.end(), later);
  return seq;
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  std::pop_heap(queue_.begin(), queue_.end(), later);
  Event ev = std::move(queue_.back());
  queue_.pop_back();
  now_ = ev.fire_time;
  ++processed_;
  ev.action();
  return true;
}

void Scheduler::run_until(VirtualTime limit, const std::function<bool()>& stop) {
  while (!queue_.empty() && queue_.front().fire_time <= limit) {
    step();
    if (stop && stop()) return;
  }
  now_ = std::max(now_, limit);
}

VirtualTime Scheduler::next_time() const {
  return queue_.empty() ? VirtualTime::max() : queue_.front().fire_time;
}

}  // namespace setchain
