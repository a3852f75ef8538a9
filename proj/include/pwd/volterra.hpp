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

#ifndef PWD_VOLTERRA_HPP
#define PWD_VOLTERRA_HPP

#include <Eigen/Dense>
#include <vector>

#include "pwd/grid.hpp"

namespace pwd {

// Forward-marching solvers for Volterra equations of the second kind on a
// uniform grid, with the end-corrected convolution quadrature of grid.hpp.
// The implicit diagonal term (kernel value at lag zero) is resolved exactly:
// scalar division, or a small LU solve in the matrix case.
//
// Inner convolution sums are accumulated in fixed-size blocks; block partial
// sums are combined in index order, so results are identical for any worker
// count.  OpenMP is applied across blocks for long sums.

/// x_n + sign * sum_j w_{n,j} a_{n-j} x_j = b_n;  x_0 = b_0.
std::vector<double> solve_scalar_volterra(const std::vector<double>& kernel,
                                          const std::vector<double>& rhs,
                                          double sign, double h);

using Mat4 = Eigen::Matrix4d;

/// X_n = B_n + sum_j w_{n,j} A_{n-j} X_j;  X_0 = B_0.
/// Requires (I - w_{n,n} A_0) nonsingular (holds for small enough h).
std::vector<Mat4> solve_matrix_volterra(const std::vector<Mat4>& kernel,
                                        const std::vector<Mat4>& rhs,
                                        double h);

namespace reference {
/// Plain serial implementations (naive accumulation order), kept as the
/// cross-check and benchmark baseline for the blocked kernels above.
std::vector<double> solve_scalar_volterra(const std::vector<double>& kernel,
                                          const std::vector<double>& rhs,
                                          double sign, double h);
std::vector<Mat4> solve_matrix_volterra(const std::vector<Mat4>& kernel,
                                        const std::vector<Mat4>& rhs,
                                        double h);
}  // namespace reference

}  // namespace pwd

#endif
