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

#include "pwd/volterra.hpp"

#include <algorithm>
#include <stdexcept>

#include "pwd/threads.hpp"

#ifdef PWD_HAVE_OPENMP
#include <omp.h>
#endif

namespace pwd {

namespace {
constexpr int kBlock = 256;        // fixed: reduction order must not depend
constexpr int kParallelCutoff = 4096;  // on worker count
}  // namespace

std::vector<double> solve_scalar_volterra(const std::vector<double>& kernel,
                                          const std::vector<double>& rhs,
                                          double sign, double h) {
  const int n = static_cast<int>(rhs.size()) - 1;
  if (kernel.size() != rhs.size())
    throw std::invalid_argument("solve_scalar_volterra: size mismatch");
  std::vector<double> x(n + 1);
  x[0] = rhs[0];
  const int nthreads = worker_count();
  (void)nthreads;
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    const int nblocks = (i + kBlock - 1) / kBlock;
    if (i >= kParallelCutoff && nblocks > 1) {
      std::vector<double> partial(nblocks, 0.0);
#ifdef PWD_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
      for (int b = 0; b < nblocks; ++b) {
        const int lo = b * kBlock;
        const int hi = std::min(i, lo + kBlock);  // exclusive of j = i
        double ps = 0.0;
        for (int j = lo; j < hi; ++j)
          ps += quad_weight(i, j, h) * kernel[i - j] * x[j];
        partial[b] = ps;
      }
      for (int b = 0; b < nblocks; ++b) s += partial[b];
    } else {
      for (int j = 0; j < i; ++j)
        s += quad_weight(i, j, h) * kernel[i - j] * x[j];
    }
    const double diag = quad_weight(i, i, h) * kernel[0];
    x[i] = (rhs[i] - sign * s) / (1.0 + sign * diag);
  }
  return x;
}

std::vector<Mat4> solve_matrix_volterra(const std::vector<Mat4>& kernel,
                                        const std::vector<Mat4>& rhs,
                                        double h) {
  const int n = static_cast<int>(rhs.size()) - 1;
  if (kernel.size() != rhs.size())
    throw std::invalid_argument("solve_matrix_volterra: size mismatch");
  std::vector<Mat4> x(n + 1);
  x[0] = rhs[0];
  const int nthreads = worker_count();
  (void)nthreads;
  const bool implicit_diag = kernel[0].cwiseAbs().maxCoeff() > 0.0;
  for (int i = 1; i <= n; ++i) {
    Mat4 s = Mat4::Zero();
    const int nblocks = (i + kBlock - 1) / kBlock;
    if (i >= kParallelCutoff && nblocks > 1) {
      std::vector<Mat4> partial(nblocks, Mat4::Zero());
#ifdef PWD_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
      for (int b = 0; b < nblocks; ++b) {
        const int lo = b * kBlock;
        const int hi = std::min(i, lo + kBlock);
        Mat4 ps = Mat4::Zero();
        for (int j = lo; j < hi; ++j)
          ps += quad_weight(i, j, h) * (kernel[i - j] * x[j]);
        partial[b] = ps;
      }
      for (int b = 0; b < nblocks; ++b) s += partial[b];
    } else {
      for (int j = 0; j < i; ++j)
        s += quad_weight(i, j, h) * (kernel[i - j] * x[j]);
    }
    const Mat4 b = rhs[i] + s;
    if (implicit_diag) {
      const Mat4 lhs = Mat4::Identity() - quad_weight(i, i, h) * kernel[0];
      Eigen::FullPivLU<Mat4> lu(lhs);
      if (!lu.isInvertible())
        throw std::runtime_error("solve_matrix_volterra: singular implicit "
                                 "system; reduce the step size");
      x[i] = lu.solve(b);
    } else {
      x[i] = b;
    }
  }
  return x;
}

namespace reference {

std::vector<double> solve_scalar_volterra(const std::vector<double>& kernel,
                                          const std::vector<double>& rhs,
                                          double sign, double h) {
  const int n = static_cast<int>(rhs.size()) - 1;
  std::vector<double> x(n + 1);
  x[0] = rhs[0];
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j < i; ++j)
      s += quad_weight(i, j, h) * kernel[i - j] * x[j];
    x[i] = (rhs[i] - sign * s) / (1.0 + sign * quad_weight(i, i, h) * kernel[0]);
  }
  return x;
}

std::vector<Mat4> solve_matrix_volterra(const std::vector<Mat4>& kernel,
                                        const std::vector<Mat4>& rhs,
                                        double h) {
  const int n = static_cast<int>(rhs.size()) - 1;
  std::vector<Mat4> x(n + 1);
  x[0] = rhs[0];
  for (int i = 1; i <= n; ++i) {
    Mat4 s = Mat4::Zero();
    for (int j = 0; j < i; ++j)
      s += quad_weight(i, j, h) * (kernel[i - j] * x[j]);
    const Mat4 lhs = Mat4::Identity() - quad_weight(i, i, h) * kernel[0];
    x[i] = lhs.fullPivLu().solve(rhs[i] + s);
  }
  return x;
}

}  // namespace reference

}  // namespace pwd
