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

// Acceptance gate: the ten release criteria, one verdict line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "pwd/engines.hpp"
#include "pwd/rng.hpp"
#include "pwd/witness.hpp"

using namespace pwd;

namespace {

void verdict(int num, bool ok, const std::string& what) {
  std::printf("[criterion %2d] %s  %s\n", num, ok ? "PASS" : "FAIL",
              what.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion " << num << ": " << what);
}

double max_map_diff(const MapTrajectory& a, const MapTrajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.maps.size(); ++i)
    m = std::max(m, (a.maps[i].m - b.maps[i].m).cwiseAbs().maxCoeff());
  return m;
}

std::vector<Matrix> random_kraus_pair(Rng& rng) {
  // Haar-ish 4x2 isometry, split into two Kraus blocks
  Eigen::MatrixXcd g(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g)
                                 .householderQ() *
                             Eigen::MatrixXcd::Identity(4, 2);
  return {q.block(0, 0, 2, 2), q.block(2, 0, 2, 2)};
}

}  // namespace

TEST_CASE("criterion 1: CPT by construction on randomized specs") {
  Rng rng(20260823);
  double worst_psd = 0.0, worst_tp = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    ProcessSpec p;
    switch (trial % 3) {
      case 0:
        p.F = TimedMapSpec::dephasing_cos(0.5 + 1.5 * rng.uniform());
        break;
      case 1:
        p.F = TimedMapSpec::damping(1.0, 0.1 + 2.9 * rng.uniform());
        break;
      default:
        p.F = TimedMapSpec::semigroup(
            LindbladSpec::pure_dephasing(0.1 + 0.9 * rng.uniform()));
    }
    if (trial % 5 == 4)
      p.E = ChannelSpec::from_kraus(random_kraus_pair(rng));
    else
      p.E = ChannelSpec::pauli(trial % 5);
    const double rate = 0.5 + 2.0 * rng.uniform();
    switch (trial % 7 % 3) {
      case 0: p.f = WaitingTimeDist::exponential(rate); break;
      case 1: p.f = WaitingTimeDist::erlang(2, rate); break;
      default: p.f = WaitingTimeDist::erlang(3, rate);
    }
    p.grid = TimeGrid(0.01, 1000);

    const MapTrajectory traj = solve_volterra_map(p);
    for (const TransferMatrix& M : traj.maps) {
      const CptReport rep = is_cpt(M);
      worst_psd = std::min(worst_psd, rep.choi_min_eigenvalue);
      worst_tp = std::max(worst_tp, rep.tp_residual);
      ok = ok && rep.ok();
    }
  }
  std::ostringstream what;
  what << "50 randomized specs, 1001 nodes each: min Choi eigenvalue "
       << worst_psd << " (>= -1e-8), max TP residual " << worst_tp
       << " (<= 1e-10)";
  verdict(1, ok, what.str());
}

TEST_CASE("criterion 2: semigroup recovery for every waiting time") {
  const LindbladSpec L = LindbladSpec::pure_dephasing(0.3);
  const TimeGrid grid(1e-3, 5000);
  double worst = 0.0;
  for (const WaitingTimeDist& f :
       {WaitingTimeDist::exponential(0.9), WaitingTimeDist::erlang(2, 1.2),
        WaitingTimeDist::erlang(3, 2.0)}) {
    ProcessSpec p;
    p.F = TimedMapSpec::semigroup(L);
    p.E = ChannelSpec::pauli(0);  // identity channel: jumps must be invisible
    p.f = f;
    p.grid = grid;
    const MapTrajectory traj = solve_volterra_map(p);
    const Mat4 gen = Mat4(lindblad_transfer_generator(L).m);
    for (int i = 0; i < grid.size(); ++i) {
      const Mat4 ref = (grid.t(i) * gen).exp();
      worst = std::max(worst,
                       (Mat4(traj.maps[i].m) - ref).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream what;
  what << "sup-norm |Lambda(t) - e^{tL}| = " << worst
       << " (<= 1e-6) across exponential, Erlang(2), Erlang(3)";
  verdict(2, worst <= 1e-6, what.str());
}

TEST_CASE("criterion 3: parity identity") {
  double worst_sum = 0.0;
  for (const WaitingTimeDist& w :
       {WaitingTimeDist::exponential(1.0), WaitingTimeDist::erlang(3, 2.0)}) {
    const TimeGrid grid(1e-3, 5000);
    const std::vector<double> q = parity_q(w, grid);
    const CountingTable tab = counting_probabilities(w, grid, 40);
    for (int i = 0; i < grid.size(); ++i) {
      double alt = 0.0;
      for (int k = 0; k <= 40; ++k)
        alt += (k % 2 ? -1.0 : 1.0) * tab.p[k][i];
      worst_sum = std::max(worst_sum, std::abs(q[i] - alt));
    }
  }

  const double rate = 1.4;
  const TimeGrid cgrid = TimeGrid::from_horizon(5.0 / rate, 4000);
  const std::vector<double> q =
      parity_q(WaitingTimeDist::exponential(rate), cgrid);
  double worst_closed = 0.0;
  for (int i = 0; i < cgrid.size(); ++i)
    worst_closed = std::max(
        worst_closed, std::abs(q[i] - std::exp(-2.0 * rate * cgrid.t(i))));

  std::ostringstream what;
  what << "q vs alternating count sum " << worst_sum
       << " (<= 1e-8); exponential q vs e^{-2 rate t} " << worst_closed
       << " (<= 1e-8)";
  verdict(3, worst_sum <= 1e-8 && worst_closed <= 1e-8, what.str());
}

namespace {

// shared between criteria 4 and 9
std::vector<double> master_equation_errors(const std::vector<double>& hs) {
  const DensityMatrix rho0 = ket_plus();
  std::vector<double> errs;
  for (double h : hs) {
    ProcessSpec p;
    p.F = TimedMapSpec::dephasing_cos(1.0);
    p.E = ChannelSpec::pauli(1);
    p.f = WaitingTimeDist::erlang(3, 2.0);
    p.grid = TimeGrid::from_horizon(2.0, static_cast<int>(2.0 / h + 0.5));
    const MapTrajectory ref = assemble_lambda_dephasing(p.F, p.f, 1, p.grid);
    const std::vector<DensityMatrix> rho = integrate_master_equation(p, rho0);
    double err = 0.0;
    for (int i = 0; i < p.grid.size(); ++i)
      err = std::max(err, trace_distance(apply_map(ref.maps[i], rho0), rho[i]));
    errs.push_back(err);
  }
  return errs;
}

}  // namespace

TEST_CASE("criterion 4: cross-engine oracle equivalence") {
  // closed-form assemblies vs the Volterra matrix solve
  double closed_err = 0.0;
  for (int idx : {0, 1, 2, 3}) {
    ProcessSpec p;
    p.F = TimedMapSpec::dephasing_cos(1.0);
    p.E = ChannelSpec::pauli(idx);
    p.f = WaitingTimeDist::erlang(3, 2.0);
    p.grid = TimeGrid(0.01, 1000);
    closed_err = std::max(
        closed_err, max_map_diff(solve_volterra_map(p),
                                 assemble_lambda_dephasing(p.F, p.f, idx, p.grid)));
  }
  {
    ProcessSpec p;
    p.F = TimedMapSpec::damping(1.0, 0.25);
    p.E = ChannelSpec::pauli(1);
    p.f = WaitingTimeDist::erlang(2, 1.5);
    p.grid = TimeGrid(0.01, 1000);
    closed_err = std::max(
        closed_err, max_map_diff(solve_volterra_map(p),
                                 assemble_lambda_damping(1.0, 0.25, p.f, 1, p.grid)));
  }

  // Monte Carlo vs Volterra with the statistical bound max(3 sigma, 5e-3)
  ProcessSpec pm;
  pm.F = TimedMapSpec::dephasing_cos(1.0);
  pm.E = ChannelSpec::pauli(1);
  pm.f = WaitingTimeDist::erlang(3, 2.0);
  pm.grid = TimeGrid(0.02, 250);
  const MapTrajectory volt = solve_volterra_map(pm);
  const MapTrajectory mc = simulate_monte_carlo(pm, 100000, 424242);
  double mc_excess = 0.0;
  for (std::size_t i = 0; i < mc.maps.size(); ++i) {
    const RealMatrix diff = (mc.maps[i].m - volt.maps[i].m).cwiseAbs();
    const RealMatrix bound = (3.0 * mc.stderr_entries[i]).cwiseMax(5e-3);
    mc_excess = std::max(mc_excess, (diff.array() / bound.array()).maxCoeff());
  }

  // master equation vs the map route at h = 1e-3
  const double master_err = master_equation_errors({1e-3})[0];

  std::ostringstream what;
  what << "closed-form vs Volterra " << closed_err
       << " (<= 1e-8); MC/bound ratio " << mc_excess
       << " (<= 1, 1e5 trajectories); master equation " << master_err
       << " (<= 1e-4)";
  verdict(4, closed_err <= 1e-8 && mc_excess <= 1.0 && master_err <= 1e-4,
          what.str());
}

TEST_CASE("criterion 5: limiting-case kernels") {
  const double rate = 1.3;
  const TimeGrid grid(1e-3, 3000);

  const RenewalKernel k2 =
      renewal_kernel_k(WaitingTimeDist::erlang(2, rate), grid);
  double kernel_err = std::abs(k2.point_mass);
  for (int i = 0; i < grid.size(); ++i)
    kernel_err = std::max(
        kernel_err, std::abs(k2.regular.values[i] -
                             rate * rate * std::exp(-2.0 * rate * grid.t(i))));

  const LindbladSpec L = LindbladSpec::pure_dephasing(0.3);
  const ChannelSpec E = ChannelSpec::pauli(1);
  const DensityMatrix rho0 = ket_plus();
  const std::vector<DensityMatrix> rho = integrate_budini(
      L, E, WaitingTimeDist::exponential(rate), rho0, grid);
  const Mat4 gen = Mat4(lindblad_transfer_generator(L).m) +
                   rate * (Mat4(channel_transfer(E).m) - Mat4::Identity());
  double semi_err = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const TransferMatrix M{RealMatrix((grid.t(i) * gen).exp())};
    semi_err = std::max(semi_err, trace_distance(apply_map(M, rho0), rho[i]));
  }

  double reset_err = 0.0;
  for (int kind = 0; kind < 2; ++kind) {
    ProcessSpec p;
    p.F = kind == 0 ? TimedMapSpec::dephasing_cos(1.0)
                    : TimedMapSpec::damping(1.0, 0.25);
    p.E = ChannelSpec::pauli(0);
    p.f = WaitingTimeDist::erlang(2, 1.5);
    p.grid = TimeGrid(1e-3, 2000);
    const std::vector<double> res =
        reset_equation_residual(p.F, p.f, solve_volterra_map(p));
    for (double r : res) reset_err = std::max(reset_err, r);
  }

  std::ostringstream what;
  what << "Erlang(2) kernel vs rate^2 e^{-2 rate t} " << kernel_err
       << " (<= 1e-8); exponential semigroup limit " << semi_err
       << " (<= 1e-6); reset-limit residual " << reset_err << " (<= 1e-4)";
  verdict(5, kernel_err <= 1e-8 && semi_err <= 1e-6 && reset_err <= 1e-4,
          what.str());
}

TEST_CASE("criterion 6: oscillation suppression, parity persistence") {
  const TimeGrid grid = TimeGrid::from_horizon(15.0, 1500);
  const std::vector<double> ratios = {0.5, 20.0};
  const SurfaceData data =
      sweep_surface(SurfaceExample::Dephasing, 0.0, grid, ratios);
  const double m_small =
      detect_growth(data.layers.at("|d-|")[0], grid, 1e-9).nm_measure;
  const double m_large =
      detect_growth(data.layers.at("|d-|")[1], grid, 1e-9).nm_measure;
  const bool q_small =
      detect_growth(data.layers.at("|q|")[0], grid, 1e-9).detected;
  const bool q_large =
      detect_growth(data.layers.at("|q|")[1], grid, 1e-9).detected;
  const double ratio = m_large / m_small;
  std::ostringstream what;
  what << "|d-| growth measure suppression ratio (rate 20 / rate 0.5) = "
       << ratio << " (< 1); |q| detected at both rates: " << q_small << "/"
       << q_large;
  verdict(6, m_large < m_small && ratio < 0.01 && q_small && q_large,
          what.str());
}

TEST_CASE("criterion 7: NM confined to shorter times with faster jumps") {
  const TimeGrid grid = TimeGrid::from_horizon(15.0, 1500);
  const std::vector<double> ratios = default_ratio_grid();
  const SurfaceData data =
      sweep_surface(SurfaceExample::Damping, 3.0, grid, ratios);
  bool all_detected = true, monotone = true;
  double prev_start = 1e300;
  for (std::size_t r = 0; r < ratios.size(); ++r) {
    const GrowthReport rep =
        detect_growth(data.layers.at("|h+|")[r], grid, 1e-9);
    all_detected = all_detected && rep.detected;
    if (!rep.detected) continue;
    monotone = monotone && rep.intervals[0].t_start <= prev_start + 1e-12;
    prev_start = rep.intervals[0].t_start;
  }
  std::ostringstream what;
  what << "|h+| growth detected at all 40 ratios in [0.25, 25]: "
       << all_detected << "; first-growth onset non-increasing: " << monotone;
  verdict(7, all_detected && monotone, what.str());
}

TEST_CASE("criterion 8: Markovianity threshold of the jump-free map") {
  bool ok = true;
  std::ostringstream what;
  what << "jump-free damping detection by gamma/lambda:";
  for (double gamma : {0.1, 0.4, 0.6, 1.0, 3.0}) {
    const TimedMapSpec F = TimedMapSpec::damping(1.0, gamma);
    MapTrajectory traj;
    traj.grid = TimeGrid(1e-3, 20000);
    for (int i = 0; i < traj.grid.size(); ++i)
      traj.maps.push_back(F.eval(traj.grid.t(i)));
    const bool detected = witness_detects(traj);
    const bool expected = gamma > 0.5;
    ok = ok && (detected == expected);
    what << " " << gamma << "->" << detected;
  }
  what << " (expect false below 1/2, true above)";
  verdict(8, ok, what.str());
}

TEST_CASE("criterion 9: second-order convergence of the integrator") {
  const std::vector<double> errs = master_equation_errors({2e-3, 1e-3});
  const double order = std::log2(errs[0] / errs[1]);
  std::ostringstream what;
  what << "h-halving order estimate " << order << " (within 2.0 +- 0.3)";
  verdict(9, std::abs(order - 2.0) <= 0.3, what.str());
}

TEST_CASE("criterion 10: byte-identical CLI outputs") {
  namespace fs = std::filesystem;
  const char* cli = std::getenv("PWD_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "PWD_CLI must point to the CLI binary");
  const fs::path dir = fs::temp_directory_path() / "pwd_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path cfg = dir / "mc.json";
  {
    std::ofstream out(cfg);
    out << R"({
      "schema_version": 1,
      "process": {
        "map": {"kind": "dephasing_cos", "lambda": 1.0},
        "channel": {"kind": "pauli", "index": 1},
        "waiting_time": {"kind": "erlang", "stages": 3, "rate": 2.0}
      },
      "grid": {"t_max": 3.0, "steps": 150},
      "engine": {"kind": "monte_carlo", "n_traj": 5000, "seed": 97}
    })";
  }

  auto run = [&](const std::string& env, const fs::path& out) {
    const std::string cmd = env + (env.empty() ? "" : " ") + cli +
                            " simulate --config " + cfg.string() + " --out " +
                            out.string() + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(out, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const std::string a = run("", dir / "a.csv");
  const std::string b = run("", dir / "b.csv");
  const std::string w1 = run("PWD_THREADS=1", dir / "w1.csv");
  const std::string w4 = run("PWD_THREADS=4", dir / "w4.csv");
  const bool ok = !a.empty() && a == b && a == w1 && a == w4;
  std::ostringstream what;
  what << "Monte Carlo CSV identical across two runs and PWD_THREADS {1, 4}: "
       << ok;
  verdict(10, ok, what.str());
}
