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

// Compares the blocked (OpenMP) Volterra kernels against the serial
// reference implementations, and times the Monte Carlo engine, at the
// current PWD_THREADS setting.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "pwd/engines.hpp"
#include "pwd/threads.hpp"
#include "pwd/volterra.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void bench_scalar(int n) {
  const double h = 5.0 / n;
  std::vector<double> kernel(n + 1), rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    kernel[i] = 2.0 * std::exp(-2.0 * t) * std::cos(t);
    rhs[i] = std::exp(-t);
  }

  auto t0 = Clock::now();
  const std::vector<double> fast =
      pwd::solve_scalar_volterra(kernel, rhs, 1.0, h);
  const double dt_fast = seconds_since(t0);

  t0 = Clock::now();
  const std::vector<double> ref =
      pwd::reference::solve_scalar_volterra(kernel, rhs, 1.0, h);
  const double dt_ref = seconds_since(t0);

  double diff = 0.0;
  for (int i = 0; i <= n; ++i) diff = std::max(diff, std::abs(fast[i] - ref[i]));
  std::printf("scalar volterra  n=%-7d blocked %8.3f ms  reference %8.3f ms  "
              "speedup %5.2fx  max|diff| %.3e\n",
              n, 1e3 * dt_fast, 1e3 * dt_ref, dt_ref / dt_fast, diff);
}

void bench_matrix(int n) {
  const double h = 5.0 / n;
  const pwd::ProcessSpec p{pwd::TimedMapSpec::dephasing_cos(1.0),
                           pwd::ChannelSpec::pauli(1),
                           pwd::WaitingTimeDist::erlang(3, 2.0),
                           pwd::TimeGrid(h, n)};
  const pwd::Mat4 E = pwd::Mat4(channel_transfer(p.E).m);
  std::vector<pwd::Mat4> kernel(n + 1), rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    const pwd::Mat4 F = pwd::Mat4(p.F.eval(i * h).m);
    kernel[i] = p.f.density(i * h) * (F * E);
    rhs[i] = p.f.survival(i * h) * F;
  }

  auto t0 = Clock::now();
  const std::vector<pwd::Mat4> fast =
      pwd::solve_matrix_volterra(kernel, rhs, h);
  const double dt_fast = seconds_since(t0);

  t0 = Clock::now();
  const std::vector<pwd::Mat4> ref =
      pwd::reference::solve_matrix_volterra(kernel, rhs, h);
  const double dt_ref = seconds_since(t0);

  double diff = 0.0;
  for (int i = 0; i <= n; ++i)
    diff = std::max(diff, (fast[i] - ref[i]).cwiseAbs().maxCoeff());
  std::printf("matrix volterra  n=%-7d blocked %8.3f ms  reference %8.3f ms  "
              "speedup %5.2fx  max|diff| %.3e\n",
              n, 1e3 * dt_fast, 1e3 * dt_ref, dt_ref / dt_fast, diff);
}

void bench_monte_carlo(int n_traj) {
  pwd::ProcessSpec p;
  p.F = pwd::TimedMapSpec::dephasing_cos(1.0);
  p.E = pwd::ChannelSpec::pauli(1);
  p.f = pwd::WaitingTimeDist::erlang(3, 2.0);
  p.grid = pwd::TimeGrid(0.02, 250);

  const auto t0 = Clock::now();
  const pwd::MapTrajectory traj = simulate_monte_carlo(p, n_traj, 42);
  const double dt = seconds_since(t0);
  std::printf("monte carlo      n_traj=%-6d %8.3f ms  (%.2f us/trajectory)\n",
              n_traj, 1e3 * dt, 1e6 * dt / n_traj);
  (void)traj;
}

}  // namespace

int main() {
  std::printf("workers: %d\n", pwd::worker_count());
  for (int n : {2000, 8000, 20000}) bench_scalar(n);
  for (int n : {1000, 4000}) bench_matrix(n);
  for (int n : {10000, 50000}) bench_monte_carlo(n);
  return 0;
}
