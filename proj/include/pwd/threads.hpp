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

#ifndef PWD_THREADS_HPP
#define PWD_THREADS_HPP

namespace pwd {

// Worker count: min(omp_get_max_threads(), PWD_THREADS).  Affects speed only;
// all parallel reductions use fixed-order blocking so results are identical
// for any worker count.
int worker_count();

}  // namespace pwd

#endif
