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

#include "pwd/core.hpp"

#include <Eigen/Eigenvalues>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pwd/grid.hpp"
#include "pwd/rng.hpp"

namespace pwd {

std::vector<double> cumulative_integral(const std::vector<double>& y, double h) {
  const int n = static_cast<int>(y.size()) - 1;
  std::vector<double> out(y.size(), 0.0);
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += quad_weight(k, j, h) * y[j];
    out[k] = s;
  }
  return out;
}

OperatorBasis::OperatorBasis(int dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("OperatorBasis: dim must be >= 2");
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(dim));
  elems_.push_back(inv_sqrt_d * Matrix::Identity(dim, dim));
  if (dim == 2) {
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    sz << 1, 0, 0, -1;
    const double s = 1.0 / std::sqrt(2.0);
    elems_.push_back(s * sx);
    elems_.push_back(s * sy);
    elems_.push_back(s * sz);
    return;
  }
  // Generalized Gell-Mann set, HS-normalized.
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      Matrix re = Matrix::Zero(dim, dim);
      re(j, k) = re(k, j) = 1.0 / std::sqrt(2.0);
      elems_.push_back(re);
      Matrix im = Matrix::Zero(dim, dim);
      im(j, k) = Complex(0, -1.0 / std::sqrt(2.0));
      im(k, j) = Complex(0, 1.0 / std::sqrt(2.0));
      elems_.push_back(im);
    }
  }
  for (int l = 1; l < dim; ++l) {
    Matrix d = Matrix::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) d(j, j) = norm;
    d(l, l) = -static_cast<double>(l) * norm;
    elems_.push_back(d);
  }
}

const OperatorBasis& OperatorBasis::get(int dim) {
  static std::mutex mu;
  static std::map<int, OperatorBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, OperatorBasis(dim)).first;
  return it->second;
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw std::invalid_argument("DensityMatrix: square matrix required");
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(entries_.trace() - Complex(1.0)) > 1e-12)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix ket0() {
  Eigen::VectorXcd v(2);
  v << 1, 0;
  return DensityMatrix::pure(v);
}
DensityMatrix ket1() {
  Eigen::VectorXcd v(2);
  v << 0, 1;
  return DensityMatrix::pure(v);
}
DensityMatrix ket_plus() {
  Eigen::VectorXcd v(2);
  v << 1, 1;
  return DensityMatrix::pure(v);
}
DensityMatrix ket_plus_i() {
  Eigen::VectorXcd v(2);
  v << 1, Complex(0, 1);
  return DensityMatrix::pure(v);
}

namespace {

// Complex-linear decomposition, needed for non-Hermitian arguments in the
// Choi construction.
Eigen::VectorXcd decompose_complex(const Matrix& op) {
  const int d = static_cast<int>(op.rows());
  const OperatorBasis& basis = OperatorBasis::get(d);
  Eigen::VectorXcd out(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    out(i) = (basis.element(i).adjoint() * op).trace();
  return out;
}

Matrix reconstruct_complex(const Eigen::VectorXcd& v, int dim) {
  const OperatorBasis& basis = OperatorBasis::get(dim);
  Matrix out = Matrix::Zero(dim, dim);
  for (int i = 0; i < basis.size(); ++i) out += v(i) * basis.element(i);
  return out;
}

}  // namespace

PauliVec to_pauli_vec(const Matrix& op) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("to_pauli_vec: square matrix required");
  return decompose_complex(op).real();
}

PauliVec to_pauli_vec(const DensityMatrix& rho) {
  return to_pauli_vec(rho.entries());
}

Matrix from_pauli_vec(const PauliVec& v) {
  const int d2 = static_cast<int>(v.size());
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  if (d * d != d2)
    throw std::invalid_argument("from_pauli_vec: length must be a square");
  return reconstruct_complex(v.cast<Complex>(), d);
}

TransferMatrix::TransferMatrix(RealMatrix mat) : m(std::move(mat)) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("TransferMatrix: square matrix required");
  const int d = static_cast<int>(std::lround(std::sqrt(double(m.rows()))));
  if (d * d != m.rows())
    throw std::invalid_argument("TransferMatrix: size must be dim^2");
}

TransferMatrix TransferMatrix::identity(int hilbert_dim) {
  return TransferMatrix(RealMatrix::Identity(hilbert_dim * hilbert_dim,
                                             hilbert_dim * hilbert_dim));
}

TransferMatrix TransferMatrix::diagonal(double x, double y, double z) {
  RealMatrix m = RealMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = x;
  m(2, 2) = y;
  m(3, 3) = z;
  return TransferMatrix(std::move(m));
}

TransferMatrix TransferMatrix::diagonal_corner(double x, double y, double z,
                                               double w) {
  TransferMatrix M = diagonal(x, y, z);
  M.m(3, 0) = w;
  return M;
}

TransferMatrix TransferMatrix::from_kraus(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty set");
  const int d = static_cast<int>(kraus[0].rows());
  Matrix completeness = Matrix::Zero(d, d);
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("from_kraus: inconsistent dimensions");
    completeness += k.adjoint() * k;
  }
  if ((completeness - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("from_kraus: Kraus set not complete");
  const OperatorBasis& basis = OperatorBasis::get(d);
  RealMatrix m(basis.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    Matrix img = Matrix::Zero(d, d);
    for (const Matrix& k : kraus) img += k * basis.element(j) * k.adjoint();
    for (int i = 0; i < basis.size(); ++i)
      m(i, j) = (basis.element(i).adjoint() * img).trace().real();
  }
  return TransferMatrix(std::move(m));
}

int TransferMatrix::hilbert_dim() const {
  return static_cast<int>(std::lround(std::sqrt(double(m.rows()))));
}

double TransferMatrix::tp_residual() const {
  double r = std::abs(m(0, 0) - 1.0);
  for (int j = 1; j < m.cols(); ++j) r = std::max(r, std::abs(m(0, j)));
  return r;
}

Matrix apply_map(const TransferMatrix& M, const Matrix& op) {
  if (op.rows() * op.cols() != M.size())
    throw std::invalid_argument("apply_map: dimension mismatch");
  const Eigen::VectorXcd v = decompose_complex(op);
  return reconstruct_complex(M.m.cast<Complex>() * v, M.hilbert_dim());
}

DensityMatrix apply_map(const TransferMatrix& M, const DensityMatrix& rho) {
  return DensityMatrix(apply_map(M, rho.entries()));
}

ChoiMatrix choi_of(const TransferMatrix& M) {
  const int d = M.hilbert_dim();
  ChoiMatrix c = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1.0;
      const Matrix img = apply_map(M, eij);
      // E_ij (x) M(E_ij)
      c.block(i * d, j * d, d, d) += img;
    }
  }
  return c;
}

CptReport is_cpt(const TransferMatrix& M, double tol_psd, double tol_tp) {
  if (!(tol_psd > 0.0) || !(tol_tp > 0.0))
    throw std::invalid_argument("is_cpt: tolerances must be positive");
  CptReport rep;
  const ChoiMatrix c = choi_of(M);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  rep.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  rep.tp_residual = M.tp_residual();
  rep.cp = rep.choi_min_eigenvalue >= -tol_psd;
  rep.tp = rep.tp_residual <= tol_tp;
  return rep;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.entries(), b.entries());
}

double trace_distance_diagonal(double X, double Y, double Z, double delta_p,
                               Complex delta_c) {
  const double re = delta_c.real(), im = delta_c.imag();
  return std::sqrt(delta_p * delta_p * Z * Z + re * re * X * X +
                   im * im * Y * Y);
}

TransferMatrix random_cpt_map(int hilbert_dim, int n_kraus,
                              std::uint64_t seed) {
  Rng rng(seed);
  const int d = hilbert_dim;
  Matrix stacked(n_kraus * d, d);
  for (int i = 0; i < stacked.rows(); ++i)
    for (int j = 0; j < d; ++j)
      stacked(i, j) = Complex(rng.normal(), rng.normal());
  // Isometry via thin QR; the d columns of Q stacked blockwise give a
  // complete Kraus set.
  Eigen::HouseholderQR<Matrix> qr(stacked);
  Matrix q = qr.householderQ() * Matrix::Identity(n_kraus * d, d);
  std::vector<Matrix> kraus;
  for (int k = 0; k < n_kraus; ++k)
    kraus.push_back(q.block(k * d, 0, d, d).eval());
  // q^dag q = 1 -> sum_k K_k^dag K_k = 1.
  return TransferMatrix::from_kraus(kraus);
}

DensityMatrix random_density_matrix(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(rho);
}

}  // namespace pwd
