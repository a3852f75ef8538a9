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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pwd/core.hpp"
#include "pwd/grid.hpp"

using namespace pwd;

TEST_CASE("operator basis is Hilbert-Schmidt orthonormal") {
  for (int dim : {2, 3}) {
    const OperatorBasis& basis = OperatorBasis::get(dim);
    REQUIRE(basis.size() == dim * dim);
    for (int i = 0; i < basis.size(); ++i) {
      CHECK((basis.element(i) - basis.element(i).adjoint()).cwiseAbs().maxCoeff() <
            1e-14);
      for (int j = 0; j < basis.size(); ++j) {
        const Complex ip = (basis.element(i).adjoint() * basis.element(j)).trace();
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-14);
      }
    }
    // element 0 proportional to the identity
    const Matrix id = Matrix::Identity(dim, dim) / std::sqrt(double(dim));
    CHECK((basis.element(0) - id).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("pauli vector round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const DensityMatrix rho = random_density_matrix(2, seed);
    const Matrix back = from_pauli_vec(to_pauli_vec(rho));
    CHECK((back - rho.entries()).cwiseAbs().maxCoeff() < 1e-14);
  }
  // trace component is the only one for the maximally mixed state
  const PauliVec v = to_pauli_vec(DensityMatrix::maximally_mixed(2));
  CHECK(v(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(v(1)) + std::abs(v(2)) + std::abs(v(3)) < 1e-14);
}

TEST_CASE("density matrix validation rejects bad inputs") {
  Matrix not_herm(2, 2);
  not_herm << 1.0, Complex(0.2, 0.1), Complex(0.3, 0.1), 0.0;
  CHECK_THROWS_AS((DensityMatrix(not_herm)), std::invalid_argument);

  Matrix bad_trace(2, 2);
  bad_trace << 0.7, 0.0, 0.0, 0.7;
  CHECK_THROWS_AS((DensityMatrix(bad_trace)), std::invalid_argument);

  Matrix neg(2, 2);
  neg << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS((DensityMatrix(neg)), std::invalid_argument);
}

TEST_CASE("named states") {
  CHECK(ket0().entries()(0, 0).real() == doctest::Approx(1.0));
  CHECK(ket1().entries()(1, 1).real() == doctest::Approx(1.0));
  CHECK(ket_plus().entries()(0, 1).real() == doctest::Approx(0.5));
  CHECK(ket_plus_i().entries()(0, 1).imag() == doctest::Approx(-0.5));
  CHECK(trace_distance(ket0(), ket1()) == doctest::Approx(1.0));
  CHECK(trace_distance(ket_plus(), ket_plus()) == doctest::Approx(0.0));
}

TEST_CASE("transfer matrix of a unitary Kraus set") {
  // sigma_x conjugation: diag(1, 1, -1, -1) in the Pauli basis
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const TransferMatrix M = TransferMatrix::from_kraus({sx});
  CHECK((M.m - Eigen::Vector4d(1, 1, -1, -1).asDiagonal().toDenseMatrix())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK(M.tp_residual() < 1e-14);
}

TEST_CASE("from_kraus rejects incomplete sets") {
  Matrix half(2, 2);
  half << 0.5, 0, 0, 0.5;
  CHECK_THROWS_AS(TransferMatrix::from_kraus({half}), std::invalid_argument);
}

TEST_CASE("apply_map agrees with direct Kraus action") {
  const TransferMatrix M = random_cpt_map(2, 3, 42);
  const DensityMatrix rho = random_density_matrix(2, 7);
  const DensityMatrix out = apply_map(M, rho);
  CHECK(std::abs(out.entries().trace() - Complex(1.0)) < 1e-12);
  // dephasing map diag(1, 0.5, 0.5, 1) halves the coherence
  const TransferMatrix D = TransferMatrix::diagonal(0.5, 0.5, 1.0);
  const Matrix img = apply_map(D, ket_plus().entries());
  CHECK(img(0, 1).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(img(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("choi certification accepts CPT and rejects non-CP") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    const CptReport rep = is_cpt(random_cpt_map(2, 2 + seed % 3, seed));
    CHECK(rep.ok());
    CHECK(rep.choi_min_eigenvalue > -1e-12);
    CHECK(rep.tp_residual < 1e-12);
  }
  // transpose map: TP but not CP (Choi is the swap, eigenvalue -1)
  RealMatrix transpose = RealMatrix::Identity(4, 4);
  transpose(2, 2) = -1.0;  // sigma_y is imaginary: transposition flips it
  const CptReport rep = is_cpt(TransferMatrix(transpose));
  CHECK(rep.tp);
  CHECK(!rep.cp);
  CHECK(rep.choi_min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-10));

  // Pauli-diagonal CP condition 1 + z >= |x + y| violated: non-CP, TP
  const CptReport rep2 = is_cpt(TransferMatrix::diagonal(1.0, 1.0, -1.0 + 1e-3));
  CHECK(!rep2.cp);
  CHECK(rep2.tp);
}

TEST_CASE("trace distance closed form for diagonal maps") {
  const double X = 0.7, Y = -0.4, Z = 0.9;
  const TransferMatrix M = TransferMatrix::diagonal(X, Y, Z);
  for (auto& [a, b] : std::vector<std::pair<DensityMatrix, DensityMatrix>>{
           {ket0(), ket1()}, {ket_plus(), ket0()}, {ket_plus_i(), ket1()}}) {
    const double dp = (a.entries()(0, 0) - b.entries()(0, 0)).real();
    const Complex dc = a.entries()(0, 1) - b.entries()(0, 1);
    const double direct =
        trace_distance(apply_map(M, a.entries()), apply_map(M, b.entries()));
    CHECK(trace_distance_diagonal(X, Y, Z, dp, dc) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
  // the corner block cancels in differences of states
  const TransferMatrix Mc = TransferMatrix::diagonal_corner(X, Y, Z, 0.3);
  const double direct = trace_distance(apply_map(Mc, ket0().entries()),
                                       apply_map(Mc, ket1().entries()));
  CHECK(trace_distance_diagonal(X, Y, Z, 1.0, 0.0) ==
        doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("quadrature weights integrate smooth functions to O(h^3)") {
  // int_0^2 e^{-t} dt = 1 - e^{-2}
  const int n = 200;
  const double h = 2.0 / n;
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) sum += quad_weight(n, j, h) * std::exp(-j * h);
  CHECK(std::abs(sum - (1.0 - std::exp(-2.0))) < 1e-6);  // O(h^3), h = 0.01

  std::vector<double> y(n + 1);
  for (int j = 0; j <= n; ++j) y[j] = std::cos(1.5 * j * h);
  const std::vector<double> cum = cumulative_integral(y, h);
  for (int i = 0; i <= n; ++i)
    CHECK(std::abs(cum[i] - std::sin(1.5 * i * h) / 1.5) < 1e-6);
}
