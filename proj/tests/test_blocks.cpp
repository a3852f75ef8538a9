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

#include "pwd/blocks.hpp"

using namespace pwd;

TEST_CASE("lindblad generator has a zero first row and the dephasing form") {
  const LindbladSpec L = LindbladSpec::pure_dephasing(0.4);
  const TransferMatrix G = lindblad_transfer_generator(L);
  CHECK(G.m.row(0).cwiseAbs().maxCoeff() < 1e-14);
  // pure dephasing: diag(0, -2k, -2k, 0)
  const RealMatrix expected =
      Eigen::Vector4d(0.0, -0.8, -0.8, 0.0).asDiagonal();
  CHECK((G.m - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("pauli channels: transfer form, signs and involution") {
  const std::array<std::array<int, 4>, 4> expected = {{{1, 1, 1, 1},
                                                       {1, 1, -1, -1},
                                                       {1, -1, 1, -1},
                                                       {1, -1, -1, 1}}};
  for (int idx = 0; idx < 4; ++idx) {
    const ChannelSpec c = ChannelSpec::pauli(idx);
    const auto signs = c.pauli_signs();
    const TransferMatrix E = channel_transfer(c);
    for (int i = 0; i < 4; ++i) {
      CHECK(signs[i] == expected[idx][i]);
      CHECK(E.m(i, i) == doctest::Approx(double(signs[i])));
    }
    CHECK((E.m * E.m - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-14);
  }
  CHECK_THROWS_AS(ChannelSpec::pauli(4), std::invalid_argument);
}

TEST_CASE("kraus channel matches its pauli counterpart") {
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  const ChannelSpec k = ChannelSpec::from_kraus({sz});
  const TransferMatrix Ek = channel_transfer(k);
  const TransferMatrix Ep = channel_transfer(ChannelSpec::pauli(3));
  CHECK((Ek.m - Ep.m).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dephasing map family") {
  const TimedMapSpec F = TimedMapSpec::dephasing_cos(1.3);
  CHECK(F.eval(0.0).m.isApprox(RealMatrix::Identity(4, 4), 1e-14));
  for (double t : {0.3, 1.0, 2.7}) {
    const TransferMatrix M = F.eval(t);
    CHECK(M.m(1, 1) == doctest::Approx(std::cos(1.3 * t)));
    CHECK(M.m(2, 2) == doctest::Approx(std::cos(1.3 * t)));
    CHECK(M.m(3, 3) == doctest::Approx(1.0));
    CHECK(F.derivative(t).m(1, 1) ==
          doctest::Approx(-1.3 * std::sin(1.3 * t)));
  }
}

TEST_CASE("semigroup map family is the matrix exponential") {
  const double kappa = 0.35;
  const TimedMapSpec F = TimedMapSpec::semigroup(LindbladSpec::pure_dephasing(kappa));
  for (double t : {0.0, 0.8, 2.0}) {
    const TransferMatrix M = F.eval(t);
    CHECK(M.m(1, 1) == doctest::Approx(std::exp(-2.0 * kappa * t)).epsilon(1e-12));
    CHECK(M.m(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(M.tp_residual() < 1e-13);
    // derivative = L e^{tL}
    const TransferMatrix D = F.derivative(t);
    CHECK(D.m(1, 1) ==
          doctest::Approx(-2.0 * kappa * std::exp(-2.0 * kappa * t))
              .epsilon(1e-10));
  }
}

TEST_CASE("vacuum-coupling G: branches, derivative, first zero") {
  // weak coupling: hyperbolic branch, monotone decay, no zeros
  for (double t = 0.0; t <= 20.0; t += 0.1)
    CHECK(eval_G(1.0, 0.1, t) > 0.0);

  // strong coupling first zero at lambda = 1, gamma = 3
  const double t_star =
      (2.0 / std::sqrt(5.0)) * (M_PI - std::atan(std::sqrt(5.0)));
  CHECK(std::abs(eval_G(1.0, 3.0, t_star)) < 1e-12);
  CHECK(eval_G(1.0, 3.0, t_star - 0.05) > 0.0);
  CHECK(eval_G(1.0, 3.0, t_star + 0.05) < 0.0);

  // continuity across the degenerate branch lambda = 2 gamma
  const double lam = 1.0;
  for (double t : {0.5, 1.5, 3.0}) {
    const double below = eval_G(lam, 0.5 * lam * (1 - 1e-9), t);
    const double at = eval_G(lam, 0.5 * lam, t);
    const double above = eval_G(lam, 0.5 * lam * (1 + 1e-9), t);
    CHECK(std::abs(below - at) < 1e-8);
    CHECK(std::abs(above - at) < 1e-8);
    // series form at degeneracy
    CHECK(at == doctest::Approx(std::exp(-0.5 * lam * t) * (1 + 0.5 * lam * t))
                    .epsilon(1e-12));
  }

  // derivative matches central differences in both branches
  for (double gamma : {0.2, 0.5, 2.0}) {
    for (double t : {0.3, 1.1, 2.9}) {
      const double eps = 1e-6;
      const double fd =
          (eval_G(1.0, gamma, t + eps) - eval_G(1.0, gamma, t - eps)) / (2 * eps);
      CHECK(std::abs(fd - eval_G_derivative(1.0, gamma, t)) < 1e-8);
    }
    CHECK(eval_G_derivative(1.0, gamma, 0.0) == doctest::Approx(0.0));
  }
}

TEST_CASE("damping map family diag(1, G, G, G^2) + corner(G^2 - 1)") {
  const double lambda = 1.0, gamma = 0.25;
  const TimedMapSpec F = TimedMapSpec::damping(lambda, gamma);
  CHECK(F.eval(0.0).m.isApprox(RealMatrix::Identity(4, 4), 1e-14));
  for (double t : {0.4, 1.0, 3.0}) {
    const double G = eval_G(lambda, gamma, t);
    const TransferMatrix M = F.eval(t);
    CHECK(M.m(1, 1) == doctest::Approx(G).epsilon(1e-12));
    CHECK(M.m(2, 2) == doctest::Approx(G).epsilon(1e-12));
    CHECK(M.m(3, 3) == doctest::Approx(G * G).epsilon(1e-12));
    CHECK(M.m(3, 0) == doctest::Approx(G * G - 1.0).epsilon(1e-12));
    CHECK(M.tp_residual() < 1e-14);
    // derivative via product rule on G
    const double Gp = eval_G_derivative(lambda, gamma, t);
    CHECK(F.derivative(t).m(3, 3) == doctest::Approx(2 * G * Gp).epsilon(1e-10));
  }
}

TEST_CASE("custom tabulated maps: lookup, interpolation, derivative") {
  const TimeGrid grid(0.1, 20);
  std::vector<TransferMatrix> maps;
  for (int i = 0; i < grid.size(); ++i) {
    const double d = std::exp(-0.6 * grid.t(i));
    maps.push_back(TransferMatrix::diagonal(d, d, 1.0));
  }

  const TimedMapSpec strict = TimedMapSpec::custom(grid, maps, false);
  CHECK(strict.eval(0.5).m(1, 1) == doctest::Approx(std::exp(-0.3)));
  CHECK_THROWS_AS(strict.eval(0.55), std::invalid_argument);

  const TimedMapSpec interp = TimedMapSpec::custom(grid, maps, true);
  CHECK(interp.eval(0.55).m(1, 1) ==
        doctest::Approx(std::exp(-0.6 * 0.55)).epsilon(1e-3));
  CHECK(interp.derivative(1.0).m(1, 1) ==
        doctest::Approx(-0.6 * std::exp(-0.6)).epsilon(1e-2));
}

TEST_CASE("dephasing map rejects non-contractive profiles at CPT check") {
  // |D| > 1 is representable; CPT certification is a separate concern and
  // must flag it
  const TimedMapSpec F =
      TimedMapSpec::dephasing([](double t) { return 1.0 + t; },
                              [](double) { return 1.0; });
  const TransferMatrix M = F.eval(0.5);
  CHECK(M.m(1, 1) == doctest::Approx(1.5));
}
