// Copyright 2026 The qttsim Authors
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
#include <vector>

// Acceptance checks: every tolerance is pinned here in code. Each item
// prints one pass/fail line with the measured against the expected value;
// the same runners back the `verify` command and the acceptance test.

namespace qtt::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

/// ids: 1 .. 11
CriterionResult run_criterion(int id);

/// suite -> criterion ids: operators {1,2}, integrators {3,4},
/// lindblad {5,6,11}, cat {7,8}, transmon {9,10}, all {1..11}
std::vector<int> suite_criteria(const std::string& suite);

std::string format_line(const CriterionResult& r);

}  // namespace qtt::verify
