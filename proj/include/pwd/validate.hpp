// Copyright 2026 The piecewise-dynamics Authors
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

#ifndef PWD_VALIDATE_HPP
#define PWD_VALIDATE_HPP

#include <string>
#include <vector>

namespace pwd {

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // observed figure (error, residual, order, ...)
  double required = 0.0;   // threshold it is compared against
  std::string detail;
};

/// Built-in invariant suite.  quick: unit oracles, seconds.
/// full: adds Monte Carlo cross-checks and the h-halving convergence study.
std::vector<CheckResult> run_validation(bool full);

}  // namespace pwd

#endif
