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

#include "pwd/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef PWD_HAVE_OPENMP
#include <omp.h>
#endif

namespace pwd {

int worker_count() {
#ifdef PWD_HAVE_OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("PWD_THREADS")) {
    try {
      // Explicit setting wins, even above the core count: results are
      // worker-count independent by construction, so this only affects speed.
      const int req = std::stoi(env);
      if (req >= 1) n = std::min(req, 256);
    } catch (...) {
      // ignore malformed values
    }
  }
  return std::max(1, n);
}

}  // namespace pwd
