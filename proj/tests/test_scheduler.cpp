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

#include <gtest/gtest.h>

#include "setchain/scheduler.hpp"

namespace setchain {
namespace {

using namespace std::chrono_literals;

TEST(Scheduler, RunsInTimeThenSequenceOrder) {
  Scheduler s;
  std::vector<int> order;
  s.at(20ms, [&] { order.push_back(3); });
  s.at(10ms, [&] { order.push_back(1); });
  s.at(10ms, [&] { order.push_back(2); });
  s.at(5ms, [&] { order.push_back(0); });
  while (s.step()) {
  }
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(s.now(), 20ms);
  EXPECT_EQ(s.processed(), 4u);
}

TEST(Scheduler, PastTimesClampToNowAndNestedEventsWork) {
  Scheduler s;
  std::vector<VirtualTime> fired;
  s.at(10ms, [&] {
    fired.push_back(s.now());
    s.at(1ms, [&] { fired.push_back(s.now()); });
    s.after(5ms, [&] { fired.push_back(s.now()); });
  });
  s.run_until(100ms);
  EXPECT_EQ(fired, (std::vector<VirtualTime>{10ms, 10ms, 15ms}));
  EXPECT_EQ(s.now(), 100ms);
}

TEST(Scheduler, RunUntilStopsAtLimitAndPredicate) {
  Scheduler s;
  int count = 0;
  for (int i = 1; i <= 10; ++i) s.at(std::chrono::milliseconds(i), [&] { ++count; });
  s.run_until(5ms);
  EXPECT_EQ(count, 5);
  EXPECT_EQ(s.pending(), 5u);
  EXPECT_EQ(s.next_time(), 6ms);
  s.run_until(100ms, [&] { return count >= 7; });
  EXPECT_EQ(count, 7);
  EXPECT_FALSE(s.empty());
}

TEST(Scheduler, IdenticalSchedulesReplayIdentically) {
  auto trace = [] {
    Scheduler s;
    std::vector<std::pair<std::int64_t, int>> out;
    for (int i = 0; i < 100; ++i) {
      s.at(std::chrono::microseconds((i * 7919) % 503), [&, i] { out.emplace_back(s.now().count(), i); });
    }
    s.run_until(1s);
    return out;
  };
  EXPECT_EQ(trace(), trace());
}

}  // namespace
}  // namespace setchain
