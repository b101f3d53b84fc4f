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

#include "setchain/analysis.hpp"

#include <cmath>
#include <string>

#include "setchain/types.hpp"

namespace setchain::analysis {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be a positive finite number, got " + std::to_string(v));
  }
}

void require_common(const AnalysisParams& p) {
  require_positive(p.R, "R");
  require_positive(p.C, "C");
  require_positive(p.n, "n");
}

void require_collector(const AnalysisParams& p) {
  require_positive(p.c, "c");
  if (!(p.c > p.n)) {
    throw DomainError("collector size c (" + std::to_string(p.c) + ") must exceed n (" + std::to_string(p.n) + ")");
  }
}

}  // namespace

double vanilla_throughput(const AnalysisParams& p) {
  require_common(p);
  require_positive(p.l_p, "l_p");
  require_positive(p.l_e, "l_e");
  if (p.C < p.n * p.l_p) {
    throw DomainError("block capacity C (" + std::to_string(p.C) + ") is below n*l_p (" +
                      std::to_string(p.n * p.l_p) + ")");
  }
  return p.R * (p.C - p.n * p.l_p) / p.l_e;
}

double compress_epoch_length(const AnalysisParams& p) {
  require_positive(p.n, "n");
  require_collector(p);
  require_positive(p.l_p, "l_p");
  require_positive(p.l_e, "l_e");
  require_positive(p.r, "r");
  return ((p.c - p.n) * p.l_e + p.n * p.l_p) / p.r;
}

double compress_throughput(const AnalysisParams& p) {
  require_common(p);
  return p.R * (p.c - p.n) * p.C / compress_epoch_length(p);
}

double hash_throughput(const AnalysisParams& p) {
  require_common(p);
  require_collector(p);
  require_positive(p.l_h, "l_h");
  return p.R * (p.c - p.n) * p.C / (p.n * p.l_h);
}

}  // namespace setchain::analysis
