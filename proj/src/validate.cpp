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

#include "pwd/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unsupported/Eigen/MatrixFunctions>

#include "pwd/blocks.hpp"
#include "pwd/core.hpp"
#include "pwd/engines.hpp"
#include "pwd/renewal.hpp"
#include "pwd/witness.hpp"

namespace pwd {

namespace {

CheckResult below(std::string name, double observed, double required,
                  std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.observed = observed;
  c.required = required;
  c.passed = observed <= required;
  c.detail = std::move(detail);
  return c;
}

double poisson_pmf(int k, double mu) {
  double v = std::exp(-mu);
  for (int j = 1; j <= k; ++j) v *= mu / j;
  return v;
}

// Semigroup reference exp(t (L + rate (E - 1))) applied per node.
std::vector<Mat4> semigroup_reference(const LindbladSpec& L,
                                      const ChannelSpec& E, double rate,
                                      const TimeGrid& grid) {
  const Mat4 gen = Mat4(lindblad_transfer_generator(L).m) +
                   rate * (Mat4(channel_transfer(E).m) - Mat4::Identity());
  std::vector<Mat4> out(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    out[i] = Mat4((grid.t(i) * gen).exp());
  return out;
}

double max_map_diff(const MapTrajectory& a, const MapTrajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.maps.size(); ++i)
    m = std::max(m, (a.maps[i].m - b.maps[i].m).cwiseAbs().maxCoeff());
  return m;
}

void run_quick(std::vector<CheckResult>& out) {
  // Operator-basis round trip on a random Hermitian operator.
  {
    const DensityMatrix rho = random_density_matrix(2, 77);
    const Matrix back = from_pauli_vec(to_pauli_vec(rho));
    out.push_back(below("basis_roundtrip",
                        (back - rho.entries()).cwiseAbs().maxCoeff(), 1e-12));
  }

  // Random Kraus map passes the CPT certificate.
  {
    const CptReport rep = is_cpt(random_cpt_map(2, 3, 99));
    CheckResult c;
    c.name = "random_kraus_cpt";
    c.observed = std::min(rep.choi_min_eigenvalue, -rep.tp_residual);
    c.required = -1e-8;
    c.passed = rep.ok();
    out.push_back(c);
  }

  // Poisson counting statistics: exponential waiting times reproduce the
  // Poisson pmf on the pinned grid.
  {
    const WaitingTimeDist w = WaitingTimeDist::exponential(1.0);
    const TimeGrid grid(1e-3, 5000);
    const int k_max = 40;  // alternating-sum tail < 1e-20 at t = 5
    const CountingTable tab = counting_probabilities(w, grid, k_max);
    double err = 0.0;
    for (int k = 0; k <= 8; ++k)
      for (int i = 0; i < grid.size(); ++i)
        err = std::max(err, std::abs(tab.p[k][i] - poisson_pmf(k, grid.t(i))));
    out.push_back(below("poisson_counting", err, 1e-8));

    // Parity: q from its Volterra equation vs the alternating count sum and
    // the closed form e^{-2 rate t}.
    const std::vector<double> q = parity_q(w, grid);
    double err_sum = 0.0, err_closed = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      double alt = 0.0;
      for (int k = 0; k <= k_max; ++k)
        alt += (k % 2 ? -1.0 : 1.0) * tab.p[k][i];
      err_sum = std::max(err_sum, std::abs(q[i] - alt));
      err_closed = std::max(err_closed,
                            std::abs(q[i] - std::exp(-2.0 * grid.t(i))));
    }
    out.push_back(below("parity_alternating_sum", err_sum, 1e-8));
    out.push_back(below("parity_closed_form", err_closed, 1e-8));
  }

  // Dephasing example: Volterra engine vs closed-form assembly, node-wise
  // CPT, and exact trace preservation.
  {
    ProcessSpec p;
    p.F = TimedMapSpec::dephasing_cos(1.0);
    p.E = ChannelSpec::pauli(1);
    p.f = WaitingTimeDist::erlang(3, 2.0);
    p.grid = TimeGrid(0.01, 1000);
    const MapTrajectory volt = solve_volterra_map(p);
    const MapTrajectory closed =
        assemble_lambda_dephasing(p.F, p.f, 1, p.grid);

    double tp = 0.0, psd_min = 0.0;
    bool cpt_ok = true;
    for (const TransferMatrix& M : volt.maps) {
      tp = std::max(tp, M.tp_residual());
      const CptReport rep = is_cpt(M);
      cpt_ok = cpt_ok && rep.ok();
      psd_min = std::min(psd_min, rep.choi_min_eigenvalue);
    }
    out.push_back(below("volterra_tp_row", tp, 1e-10));
    CheckResult c;
    c.name = "volterra_cpt_nodes";
    c.observed = psd_min;
    c.required = -1e-8;
    c.passed = cpt_ok;
    out.push_back(c);
    out.push_back(
        below("dephasing_closed_vs_volterra", max_map_diff(volt, closed), 1e-8));
  }

  // Exponential waiting times recover the semigroup exp(t(L + rate(E-1))).
  {
    ProcessSpec p;
    p.F = TimedMapSpec::semigroup(LindbladSpec::pure_dephasing(0.3));
    p.E = ChannelSpec::pauli(1);
    p.f = WaitingTimeDist::exponential(0.7);
    p.grid = TimeGrid(0.01, 500);
    const MapTrajectory volt = solve_volterra_map(p);
    const std::vector<Mat4> ref =
        semigroup_reference(LindbladSpec::pure_dephasing(0.3), p.E, 0.7, p.grid);
    double err = 0.0;
    for (int i = 0; i < p.grid.size(); ++i)
      err = std::max(err, (Mat4(volt.maps[i].m) - ref[i]).cwiseAbs().maxCoeff());
    out.push_back(below("semigroup_recovery", err, 1e-6));
  }

  // Damping example: closed-form assembly vs Volterra engine.
  {
    ProcessSpec p;
    p.F = TimedMapSpec::damping(1.0, 0.25);
    p.E = ChannelSpec::pauli(1);
    p.f = WaitingTimeDist::erlang(2, 1.0);
    p.grid = TimeGrid(0.01, 800);
    const MapTrajectory volt = solve_volterra_map(p);
    const MapTrajectory closed =
        assemble_lambda_damping(1.0, 0.25, p.f, 1, p.grid);
    out.push_back(
        below("damping_closed_vs_volterra", max_map_diff(volt, closed), 1e-8));
  }

  // First zero of G in the strong-coupling branch, lambda = 1, gamma = 3.
  {
    const double t_star =
        (2.0 / std::sqrt(5.0)) * (M_PI - std::atan(std::sqrt(5.0)));
    out.push_back(
        below("damping_G_first_zero", std::abs(eval_G(1.0, 3.0, t_star)), 1e-12));
  }
}

void run_full(std::vector<CheckResult>& out) {
  ProcessSpec p;
  p.F = TimedMapSpec::dephasing_cos(1.0);
  p.E = ChannelSpec::pauli(1);
  p.f = WaitingTimeDist::erlang(3, 2.0);
  p.grid = TimeGrid(0.02, 250);
  const MapTrajectory volt = solve_volterra_map(p);

  // Monte Carlo engine against the deterministic solve; statistical bound
  // max(3 sigma, 5e-3) per entry, reported as the worst normalized excess.
  {
    const MapTrajectory mc = simulate_monte_carlo(p, 100000, 12345);
    double worst = 0.0;
    for (std::size_t i = 0; i < mc.maps.size(); ++i) {
      const RealMatrix diff = (mc.maps[i].m - volt.maps[i].m).cwiseAbs();
      const RealMatrix bound =
          (3.0 * mc.stderr_entries[i]).cwiseMax(5e-3);
      worst = std::max(worst, (diff.array() / bound.array()).maxCoeff());
    }
    out.push_back(below("monte_carlo_vs_volterra", worst, 1.0,
                        "normalized by max(3 sigma, 5e-3)"));
  }

  // Bit-identical Monte Carlo across worker counts.
  {
    char* old = std::getenv("PWD_THREADS");
    const std::string saved = old ? old : "";
    setenv("PWD_THREADS", "1", 1);
    const MapTrajectory a = simulate_monte_carlo(p, 4096, 2024);
    setenv("PWD_THREADS", "4", 1);
    const MapTrajectory b = simulate_monte_carlo(p, 4096, 2024);
    if (old) setenv("PWD_THREADS", saved.c_str(), 1);
    else unsetenv("PWD_THREADS");
    out.push_back(below("monte_carlo_worker_invariance", max_map_diff(a, b),
                        0.0, "exact bitwise match required"));
  }

  // Memory-kernel master equation vs the map route, and its h-halving
  // convergence order.
  {
    const DensityMatrix rho0 = ket_plus();
    ProcessSpec pm = p;
    std::vector<double> errs;
    for (double h : {2e-3, 1e-3}) {
      pm.grid = TimeGrid::from_horizon(2.0, static_cast<int>(2.0 / h + 0.5));
      const MapTrajectory ref = assemble_lambda_dephasing(pm.F, pm.f, 1, pm.grid);
      const std::vector<DensityMatrix> rho =
          integrate_master_equation(pm, rho0);
      double err = 0.0;
      for (int i = 0; i < pm.grid.size(); ++i)
        err = std::max(err, trace_distance(apply_map(ref.maps[i], rho0),
                                           rho[i]));
      errs.push_back(err);
    }
    out.push_back(below("master_equation_vs_map", errs.back(), 1e-4,
                        "h = 1e-3"));
    const double order = std::log2(errs[0] / errs[1]);
    CheckResult c;
    c.name = "master_equation_order";
    c.observed = order;
    c.required = 2.0;
    c.passed = std::abs(order - 2.0) <= 0.3;
    c.detail = "log2 error ratio under h halving, band 2.0 +- 0.3";
    out.push_back(c);
  }

  // Renewal kernel closed forms: Erlang(2) regular part and the exponential
  // point mass, then the kernel-resolved equation against the semigroup.
  {
    const double rate = 1.3;
    const TimeGrid grid(1e-3, 3000);
    const RenewalKernel k2 =
        renewal_kernel_k(WaitingTimeDist::erlang(2, rate), grid);
    double err = std::abs(k2.point_mass);
    for (int i = 0; i < grid.size(); ++i)
      err = std::max(err, std::abs(k2.regular.values[i] -
                                   rate * rate *
                                       std::exp(-2.0 * rate * grid.t(i))));
    out.push_back(below("erlang2_renewal_kernel", err, 1e-8));

    const WaitingTimeDist fexp = WaitingTimeDist::exponential(rate);
    const RenewalKernel k1 = renewal_kernel_k(fexp, grid);
    double reg = 0.0;
    for (double v : k1.regular.values) reg = std::max(reg, std::abs(v));
    out.push_back(below("exponential_kernel_point_mass",
                        std::max(reg, std::abs(k1.point_mass - rate)), 1e-8));

    const LindbladSpec L = LindbladSpec::pure_dephasing(0.3);
    const ChannelSpec E = ChannelSpec::pauli(1);
    const TimeGrid bgrid(1e-3, 2000);
    const DensityMatrix rho0 = ket_plus();
    const std::vector<DensityMatrix> rho =
        integrate_budini(L, E, fexp, rho0, bgrid);
    const std::vector<Mat4> ref = semigroup_reference(L, E, rate, bgrid);
    double berr = 0.0;
    for (int i = 0; i < bgrid.size(); ++i) {
      const TransferMatrix M{RealMatrix(ref[i])};
      berr = std::max(berr, trace_distance(apply_map(M, rho0), rho[i]));
    }
    out.push_back(below("kernel_equation_semigroup_limit", berr, 1e-5));
  }

  // Reset limit (E = identity): the trajectory satisfies the transport form
  // of the evolution equation.
  {
    ProcessSpec pr;
    pr.F = TimedMapSpec::dephasing_cos(1.0);
    pr.E = ChannelSpec::pauli(0);
    pr.f = WaitingTimeDist::erlang(2, 1.5);
    pr.grid = TimeGrid(1e-3, 2000);
    const MapTrajectory traj = solve_volterra_map(pr);
    const std::vector<double> res = reset_equation_residual(pr.F, pr.f, traj);
    out.push_back(below("reset_equation_residual",
                        *std::max_element(res.begin(), res.end()), 1e-4,
                        "central-difference discretization bound"));
  }
}

}  // namespace

std::vector<CheckResult> run_validation(bool full) {
  std::vector<CheckResult> out;
  run_quick(out);
  if (full) run_full(out);
  return out;
}

}  // namespace pwd
