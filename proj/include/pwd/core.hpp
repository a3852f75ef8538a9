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

#ifndef PWD_CORE_HPP
#define PWD_CORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace pwd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Hilbert-Schmidt orthonormal Hermitian operator basis for dimension d.
// d = 2: {1, sigma_x, sigma_y, sigma_z} / sqrt(2).
// d > 2: identity/sqrt(d) followed by generalized Gell-Mann matrices,
// normalized so Tr[B_i B_j] = delta_ij.  Element 0 is always proportional to
// the identity, so the first row of a trace-preserving transfer matrix is
// (1, 0, ..., 0).
class OperatorBasis {
 public:
  explicit OperatorBasis(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elems_.size()); }  // dim^2
  const Matrix& element(int i) const { return elems_[i]; }

  static const OperatorBasis& get(int dim);  // cached per dimension

 private:
  int dim_;
  std::vector<Matrix> elems_;
};

/// d x d Hermitian, unit-trace, positive semidefinite system state.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-12) and eigenvalues (>= -1e-10).
  explicit DensityMatrix(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(int dim);

 private:
  Matrix entries_;
};

// Named qubit states used throughout the examples and tests.
DensityMatrix ket0();           // |0><0|
DensityMatrix ket1();           // |1><1|
DensityMatrix ket_plus();       // |+><+|
DensityMatrix ket_plus_i();     // |+i><+i|

/// Coefficients on the orthonormal operator basis; real for Hermitian
/// operators.  Not restricted to states: differences of states live here too.
using PauliVec = Eigen::VectorXd;

PauliVec to_pauli_vec(const Matrix& op);
PauliVec to_pauli_vec(const DensityMatrix& rho);
Matrix from_pauli_vec(const PauliVec& v);

/// Real dim^2 x dim^2 matrix of a Hermiticity-preserving map in the
/// orthonormal operator basis.
struct TransferMatrix {
  RealMatrix m;

  TransferMatrix() = default;
  explicit TransferMatrix(RealMatrix mat);
  static TransferMatrix identity(int hilbert_dim);
  /// Qubit map diag(1, x, y, z).
  static TransferMatrix diagonal(double x, double y, double z);
  /// diagonal(x, y, z) plus the corner matrix B(w): entry w at (3, 0).
  static TransferMatrix diagonal_corner(double x, double y, double z, double w);
  /// From a Kraus set {K_i} acting on C^dim.
  static TransferMatrix from_kraus(const std::vector<Matrix>& kraus);

  int hilbert_dim() const;
  int size() const { return static_cast<int>(m.rows()); }  // dim^2

  double tp_residual() const;  // max |first row - (1,0,...,0)|
};

/// Apply the map: from_pauli_vec(M * to_pauli_vec(op)).
Matrix apply_map(const TransferMatrix& M, const Matrix& op);
DensityMatrix apply_map(const TransferMatrix& M, const DensityMatrix& rho);

using ChoiMatrix = Matrix;

/// Choi matrix sum_ij E_ij (x) M(E_ij); PSD iff M is CP; partial trace over
/// the output factor equals the identity iff M is TP.
ChoiMatrix choi_of(const TransferMatrix& M);

struct CptReport {
  bool cp = false;
  bool tp = false;
  double choi_min_eigenvalue = 0.0;
  double tp_residual = 0.0;
  bool ok() const { return cp && tp; }
};

CptReport is_cpt(const TransferMatrix& M, double tol_psd = 1e-8,
                 double tol_tp = 1e-10);

/// Half the trace norm of the difference; in [0, 1] for states.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Closed form for qubit maps diag(1, X, Y, Z) (+ corner, which cancels in
/// differences): sqrt(dp^2 Z^2 + Re^2(dc) X^2 + Im^2(dc) Y^2).
double trace_distance_diagonal(double X, double Y, double Z, double delta_p,
                               Complex delta_c);

/// Random CPT map from a Haar-ish random Kraus set (test utility).
TransferMatrix random_cpt_map(int hilbert_dim, int n_kraus,
                              std::uint64_t seed);
/// Random density matrix (test utility).
DensityMatrix random_density_matrix(int dim, std::uint64_t seed);

}  // namespace pwd

#endif
