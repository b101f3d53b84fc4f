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

#include "setchain/analysis.hpp"
#include "setchain/types.hpp"

namespace setchain {
namespace {

using analysis::AnalysisParams;

AnalysisParams with_c(double c, double r) {
  AnalysisParams p;
  p.c = c;
  p.r = r;
  return p;
}

TEST(Analysis, PublishedValues) {
  const AnalysisParams base;
  const double tv = analysis::vanilla_throughput(base);
  EXPECT_NEAR(tv, 955.0, 0.5);
  EXPECT_NEAR(analysis::compress_throughput(with_c(100, 2.7)), 2497.0, 1.0);
  const double tc500 = analysis::compress_throughput(with_c(500, 3.5));
  EXPECT_NEAR(tc500, 3330.0, 1.0);
  EXPECT_NEAR(analysis::hash_throughput(with_c(100, 2.7)), 27157.0, 1.0);
  const double th500 = analysis::hash_throughput(with_c(500, 3.5));
  EXPECT_NEAR(th500, 147857.0, 1.0);
  EXPECT_NEAR(th500 / tv, 155.0, 0.5);
  EXPECT_NEAR(th500 / tc500, 44.0, 0.5);
}

TEST(Analysis, EpochLengthByHand) {
  // (90 * 438 + 10 * 139) / 2.7 and (490 * 438 + 1390) / 3.5.
  EXPECT_NEAR(analysis::compress_epoch_length(with_c(100, 2.7)), 40810.0 / 2.7, 1e-9);
  EXPECT_NEAR(analysis::compress_epoch_length(with_c(100, 2.7)), 15114.8, 0.05);
  EXPECT_NEAR(analysis::compress_epoch_length(with_c(500, 3.5)), 61717.1, 0.05);
  EXPECT_DOUBLE_EQ(analysis::compress_epoch_length(with_c(100, 1.0)), 90.0 * 438 + 10.0 * 139);
}

TEST(Analysis, ZeroAtProofSaturationAndLinearInR) {
  AnalysisParams p;
  p.C = p.n * p.l_p;
  EXPECT_DOUBLE_EQ(analysis::vanilla_throughput(p), 0.0);
  AnalysisParams a, b;
  b.R = 2 * a.R;
  EXPECT_DOUBLE_EQ(analysis::vanilla_throughput(b), 2 * analysis::vanilla_throughput(a));
  EXPECT_DOUBLE_EQ(analysis::compress_throughput(b), 2 * analysis::compress_throughput(a));
  EXPECT_DOUBLE_EQ(analysis::hash_throughput(b), 2 * analysis::hash_throughput(a));
}

TEST(Analysis, MonotoneInBlockSizeRateAndRatio) {
  AnalysisParams p = with_c(500, 3.5);
  double tv = 0, tc = 0, th = 0;
  for (double mib = 0.5; mib <= 128; mib *= 2) {
    p.C = mib * 1024 * 1024;
    EXPECT_GT(analysis::vanilla_throughput(p), tv);
    EXPECT_GT(analysis::compress_throughput(p), tc);
    EXPECT_GT(analysis::hash_throughput(p), th);
    tv = analysis::vanilla_throughput(p);
    tc = analysis::compress_throughput(p);
    th = analysis::hash_throughput(p);
  }
  EXPECT_GT(th, 3.0e7);
  double last = 0;
  for (double r = 1; r < 1e6; r *= 3) {
    const double v = analysis::compress_throughput(with_c(100, r));
    EXPECT_GT(v, last);
    last = v;
  }
  for (double R = 0.1; R < 10; R += 0.7) {
    AnalysisParams q;
    q.R = R;
    AnalysisParams q2 = q;
    q2.R = R + 0.7;
    EXPECT_LT(analysis::hash_throughput(q), analysis::hash_throughput(q2));
  }
}

TEST(Analysis, BoundaryAndDomainErrors) {
  const AnalysisParams tiny = with_c(11, 2.7);
  EXPECT_GT(analysis::compress_throughput(tiny), 0.0);
  EXPECT_GT(analysis::hash_throughput(tiny), 0.0);
  EXPECT_LT(analysis::hash_throughput(tiny), analysis::hash_throughput(with_c(12, 2.7)));

  auto message = [](auto fn, AnalysisParams p) -> std::string {
    try {
      fn(p);
    } catch (const DomainError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(analysis::compress_throughput, with_c(10, 2.7)).find("c"), std::string::npos);
  EXPECT_NE(message(analysis::hash_throughput, with_c(5, 2.7)).find("c"), std::string::npos);
  EXPECT_NE(message(analysis::compress_epoch_length, with_c(100, 0)).find("r"), std::string::npos);
  AnalysisParams small;
  small.C = 100;
  EXPECT_NE(message(analysis::vanilla_throughput, small).find("C"), std::string::npos);
  AnalysisParams neg;
  neg.R = -1;
  EXPECT_NE(message(analysis::hash_throughput, neg).find("R"), std::string::npos);
  AnalysisParams zero_le;
  zero_le.l_e = 0;
  EXPECT_NE(message(analysis::vanilla_throughput, zero_le).find("l_e"), std::string::npos);
}

}  // namespace
}  // namespace setchain
