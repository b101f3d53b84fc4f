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

namespace setchain::analysis {

/// Inputs of the steady-state throughput model.
struct AnalysisParams {
  double R = 0.8;          // blocks per second
  double C = 524288.0;     // block capacity, bytes
  double n = 10.0;         // servers
  double l_p = 139.0;      // epoch-proof length, bytes
  double l_e = 438.0;      // element length, bytes
  double c = 100.0;        // collector size
  double r = 2.7;          // compression ratio
  double l_h = 139.0;      // hash-batch length, bytes
};

/// Elements per second when every server posts one proof per block.
/// Throws DomainError unless C >= n * l_p.
double vanilla_throughput(const AnalysisParams& p);

/// Compressed size of one collector batch holding c - n elements and n
/// proofs. Throws DomainError unless c > n and r > 0.
double compress_epoch_length(const AnalysisParams& p);

double compress_throughput(const AnalysisParams& p);

/// Throws DomainError unless c > n.
double hash_throughput(const AnalysisParams& p);

}  // namespace setchain::analysis
