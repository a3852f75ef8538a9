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

#ifndef PWD_ENGINES_HPP
#define PWD_ENGINES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pwd/blocks.hpp"
#include "pwd/core.hpp"
#include "pwd/renewal.hpp"
#include "pwd/volterra.hpp"

namespace pwd {

/// The triple (F, E, f) defining the piecewise evolution, plus the time grid.
struct ProcessSpec {
  TimedMapSpec F;
  ChannelSpec E;
  WaitingTimeDist f = WaitingTimeDist::exponential(1.0);
  TimeGrid grid;
};

/// One transfer matrix per grid node; maps[0] = identity.
struct MapTrajectory {
  TimeGrid grid;
  std::vector<TransferMatrix> maps;
  std::string engine;             // provenance
  std::uint64_t seed = 0;         // Monte Carlo only
  int n_traj = 0;                 // Monte Carlo only
  std::vector<RealMatrix> stderr_entries;  // Monte Carlo only
};

/// Scalar time series on a grid (d+-, q, g+-, h+-, W, ...).
struct ScalarSolution {
  TimeGrid grid;
  std::vector<double> values;
  std::string label;
};

// How the survival probability entering a quadrature-consistent recursion is
// produced.  DiscreteConsistent replaces g(t_n) by 1 - Q_n[f] (the same
// convolution quadrature applied to f), which makes the trace-preservation
// row identity and the semigroup limit hold to round-off instead of O(h^3);
// the difference from the closed form is within quadrature error.
enum class SurvivalMode { ClosedForm, DiscreteConsistent };

/// Survival samples per node in the requested mode.
std::vector<double> survival_series(const WaitingTimeDist& f,
                                    const TimeGrid& grid, SurvivalMode mode);

/// Deterministic solve of Lambda = gF + (fF) E * Lambda (matrix Volterra).
MapTrajectory solve_volterra_map(
    const ProcessSpec& p, SurvivalMode mode = SurvivalMode::DiscreteConsistent);

/// Monte Carlo jump expansion: averages the composed transfer matrices
/// F(t - t_k) E ... E F(t_1) over sampled renewal trajectories.  Entrywise
/// standard errors are returned alongside.  Bit-identical results for fixed
/// (seed, n_traj) at any worker count.
MapTrajectory simulate_monte_carlo(const ProcessSpec& p, int n_traj,
                                   std::uint64_t seed);

/// x(t) + sign * int_0^t f(t-s) M(t-s) x(s) ds = (gM)(t), the time-domain
/// form of gM / (1 + sign * fM) in Laplace transform; x(0) = 1.
ScalarSolution scalar_functional(
    int sign, const std::vector<double>& M, const WaitingTimeDist& f,
    const TimeGrid& grid, SurvivalMode mode = SurvivalMode::DiscreteConsistent);

/// Closed-form dephasing map diag(1, X, Y, Z): X, Y from d+- = L^{+-}[D] and
/// Z from q or 1, with signs chosen per diagonal entry by the Pauli pattern
/// (denominator 1 - eps_i * fD in Laplace domain).
MapTrajectory assemble_lambda_dephasing(
    const TimedMapSpec& F_d, const WaitingTimeDist& f, int pauli_index,
    const TimeGrid& grid, SurvivalMode mode = SurvivalMode::DiscreteConsistent);

/// Closed-form damping map diag(1, X, Y, Z) + B(W): X, Y from L^{+-}[G],
/// Z from L^{+-}[|G|^2], W from the scalar corner equation
/// W - eps_z (f|G|^2) * W = g(|G|^2 - 1) + int f(|G|^2 - 1).
MapTrajectory assemble_lambda_damping(
    double lambda, double gamma, const WaitingTimeDist& f, int pauli_index,
    const TimeGrid& grid, SurvivalMode mode = SurvivalMode::DiscreteConsistent);

/// Memory-kernel master equation
/// d rho/dt = int_0^t K(t-s) E rho(s) ds + f(0) E rho(t) + I(t) rho(0),
/// K = d/dt[f F] (regular part), I = d/dt[g F]; Heun predictor-corrector.
std::vector<DensityMatrix> integrate_master_equation(const ProcessSpec& p,
                                                     const DensityMatrix& rho0);

/// Renewal kernel k with k^ = f^/g^: regular series plus the point mass f(0).
struct RenewalKernel {
  ScalarSolution regular;
  double point_mass = 0.0;  // weight of f(0) delta(t)
};
RenewalKernel renewal_kernel_k(const WaitingTimeDist& f, const TimeGrid& grid);

/// d rho/dt = L rho + int_0^t k(t-s) e^{(t-s)L} [E - 1] rho(s) ds
/// (point mass applied as f(0) [E - 1] rho(t)); Heun predictor-corrector.
std::vector<DensityMatrix> integrate_budini(const LindbladSpec& L,
                                            const ChannelSpec& E,
                                            const WaitingTimeDist& f,
                                            const DensityMatrix& rho0,
                                            const TimeGrid& grid);

/// Residual of the reset-limit equation (E = identity):
/// dLambda/dt - [ int_0^t f(t-s) F(t-s) dLambda/ds ds + g(t) dF/dt ],
/// max-norm per node, dLambda/dt by central differences.
std::vector<double> reset_equation_residual(const TimedMapSpec& F,
                                            const WaitingTimeDist& f,
                                            const MapTrajectory& traj);

}  // namespace pwd

#endif
