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

#include "pwd/engines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "pwd/threads.hpp"

#ifdef PWD_HAVE_OPENMP
#include <omp.h>
#endif

namespace pwd {

namespace {

Mat4 to_mat4(const TransferMatrix& M) {
  if (M.size() != 4)
    throw std::invalid_argument("engines: qubit (4x4 transfer) maps required");
  return Mat4(M.m);
}

std::vector<double> sample_density(const WaitingTimeDist& f,
                                   const TimeGrid& grid) {
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.size(); ++i) out[i] = f.density(grid.t(i));
  return out;
}

// Fast evaluator for F(t) at arbitrary lags; semigroup maps go through a
// one-time eigendecomposition of the generator when well conditioned.
class MapEvaluator {
 public:
  explicit MapEvaluator(const TimedMapSpec& spec) : spec_(spec) {
    if (spec.kind() == TimedMapSpec::Kind::Semigroup) {
      const Mat4 gen = to_mat4(lindblad_transfer_generator(spec.lindblad()));
      Eigen::EigenSolver<Mat4> es(gen);
      const Eigen::Matrix4cd v = es.eigenvectors();
      Eigen::FullPivLU<Eigen::Matrix4cd> lu(v);
      if (lu.isInvertible()) {
        const Eigen::Matrix4cd vinv = lu.inverse();
        const double cond = v.cwiseAbs().maxCoeff() * vinv.cwiseAbs().maxCoeff();
        if (cond < 1e8) {
          diagonalized_ = true;
          v_ = v;
          vinv_ = vinv;
          eig_ = es.eigenvalues();
        }
      }
    }
  }

  Mat4 operator()(double t) const {
    if (diagonalized_) {
      Eigen::Vector4cd e;
      for (int i = 0; i < 4; ++i) e(i) = std::exp(eig_(i) * t);
      return (v_ * e.asDiagonal() * vinv_).real();
    }
    return to_mat4(spec_.eval(t));
  }

 private:
  const TimedMapSpec& spec_;
  bool diagonalized_ = false;
  Eigen::Matrix4cd v_, vinv_;
  Eigen::Vector4cd eig_;
};

}  // namespace

std::vector<double> survival_series(const WaitingTimeDist& f,
                                    const TimeGrid& grid, SurvivalMode mode) {
  std::vector<double> out(grid.size());
  if (mode == SurvivalMode::ClosedForm) {
    for (int i = 0; i < grid.size(); ++i) out[i] = f.survival(grid.t(i));
  } else {
    const std::vector<double> fd = sample_density(f, grid);
    const std::vector<double> cum = cumulative_integral(fd, grid.h);
    for (int i = 0; i < grid.size(); ++i) out[i] = 1.0 - cum[i];
  }
  return out;
}

MapTrajectory solve_volterra_map(const ProcessSpec& p, SurvivalMode mode) {
  const TimeGrid& grid = p.grid;
  const int n = grid.steps;
  if (p.f.density_at_zero() > 0.0 && !(grid.h < 2.0 / p.f.density_at_zero()))
    throw std::invalid_argument(
        "solve_volterra_map: step too large, need h < 2/f(0)");
  const Mat4 E = to_mat4(channel_transfer(p.E));
  const std::vector<double> fd = sample_density(p.f, grid);
  const std::vector<double> g = survival_series(p.f, grid, mode);

  std::vector<Mat4> F(n + 1), kernel(n + 1), rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    F[i] = to_mat4(p.F.eval(grid.t(i)));
    kernel[i] = fd[i] * (F[i] * E);
    rhs[i] = g[i] * F[i];
  }
  const std::vector<Mat4> sol = solve_matrix_volterra(kernel, rhs, grid.h);

  MapTrajectory traj;
  traj.grid = grid;
  traj.engine = "volterra";
  traj.maps.reserve(n + 1);
  for (const Mat4& m : sol) traj.maps.emplace_back(RealMatrix(m));
  return traj;
}

MapTrajectory simulate_monte_carlo(const ProcessSpec& p, int n_traj,
                                   std::uint64_t seed) {
  if (n_traj < 1)
    throw std::invalid_argument("simulate_monte_carlo: n_traj must be >= 1");
  const TimeGrid& grid = p.grid;
  const int nodes = grid.size();
  const Mat4 E = to_mat4(channel_transfer(p.E));
  const MapEvaluator F(p.F);
  const double horizon = grid.horizon();

  constexpr int kChunk = 512;
  const int nchunks = (n_traj + kChunk - 1) / kChunk;

  std::vector<Mat4> sum(nodes, Mat4::Zero());
  std::vector<Mat4> sumsq(nodes, Mat4::Zero());

  const int nthreads = worker_count();
  (void)nthreads;
  const int batch = std::max(16, 4 * nthreads);
  std::vector<std::vector<Mat4>> part_sum, part_sq;

  for (int base = 0; base < nchunks; base += batch) {
    const int nb = std::min(batch, nchunks - base);
    part_sum.assign(nb, std::vector<Mat4>(nodes, Mat4::Zero()));
    part_sq.assign(nb, std::vector<Mat4>(nodes, Mat4::Zero()));
#ifdef PWD_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (int b = 0; b < nb; ++b) {
      const int chunk = base + b;
      const int lo = chunk * kChunk;
      const int hi = std::min(n_traj, lo + kChunk);
      Rng rng(substream_seed(seed, chunk));
      std::vector<Mat4>& ls = part_sum[b];
      std::vector<Mat4>& lq = part_sq[b];
      for (int traj = lo; traj < hi; ++traj) {
        const JumpTrajectory jt = sample_trajectory(p.f, horizon, rng);
        Mat4 acc = Mat4::Identity();
        double last_jump = 0.0;
        std::size_t next = 0;
        for (int i = 0; i < nodes; ++i) {
          const double t = grid.t(i);
          while (next < jt.jump_times.size() && jt.jump_times[next] <= t) {
            acc = E * (F(jt.jump_times[next] - last_jump) * acc);
            last_jump = jt.jump_times[next];
            ++next;
          }
          const Mat4 node = F(t - last_jump) * acc;
          ls[i] += node;
          lq[i] += node.cwiseProduct(node);
        }
      }
    }
    for (int b = 0; b < nb; ++b)
      for (int i = 0; i < nodes; ++i) {
        sum[i] += part_sum[b][i];
        sumsq[i] += part_sq[b][i];
      }
  }

  MapTrajectory traj;
  traj.grid = grid;
  traj.engine = "monte_carlo";
  traj.seed = seed;
  traj.n_traj = n_traj;
  traj.maps.reserve(nodes);
  traj.stderr_entries.reserve(nodes);
  const double inv_n = 1.0 / n_traj;
  for (int i = 0; i < nodes; ++i) {
    const Mat4 mean = sum[i] * inv_n;
    traj.maps.emplace_back(RealMatrix(mean));
    const Mat4 var = (sumsq[i] * inv_n - mean.cwiseProduct(mean)).cwiseMax(0.0);
    traj.stderr_entries.emplace_back(RealMatrix((var * inv_n).cwiseSqrt()));
  }
  return traj;
}

ScalarSolution scalar_functional(int sign, const std::vector<double>& M,
                                 const WaitingTimeDist& f, const TimeGrid& grid,
                                 SurvivalMode mode) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("scalar_functional: sign must be +-1");
  if (static_cast<int>(M.size()) != grid.size())
    throw std::invalid_argument("scalar_functional: M must be tabulated on grid");
  const std::vector<double> fd = sample_density(f, grid);
  const std::vector<double> g = survival_series(f, grid, mode);
  std::vector<double> kernel(grid.size()), rhs(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    kernel[i] = fd[i] * M[i];
    rhs[i] = g[i] * M[i];
  }
  ScalarSolution s;
  s.grid = grid;
  s.label = sign > 0 ? "L+" : "L-";
  s.values = solve_scalar_volterra(kernel, rhs, sign, grid.h);
  return s;
}

namespace {

std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }

// Diagonal-entry sign rule: Laplace denominator 1 - eps * (fM)^ means the
// time-domain equation carries sign = -eps.
int functional_sign(int eps) { return -eps; }

}  // namespace

MapTrajectory assemble_lambda_dephasing(const TimedMapSpec& F_d,
                                        const WaitingTimeDist& f,
                                        int pauli_index, const TimeGrid& grid,
                                        SurvivalMode mode) {
  if (F_d.kind() != TimedMapSpec::Kind::Dephasing)
    throw std::invalid_argument("assemble_lambda_dephasing: dephasing map required");
  const auto eps = ChannelSpec::pauli(pauli_index).pauli_signs();
  std::vector<double> D(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    D[i] = F_d.eval(grid.t(i)).m(1, 1);

  const std::vector<double> X =
      scalar_functional(functional_sign(eps[1]), D, f, grid, mode).values;
  const std::vector<double> Y =
      (eps[2] == eps[1])
          ? X
          : scalar_functional(functional_sign(eps[2]), D, f, grid, mode).values;
  const std::vector<double> Z =
      (eps[3] == 1)
          ? ones(grid.size())
          : scalar_functional(1, ones(grid.size()), f, grid, mode).values;

  MapTrajectory traj;
  traj.grid = grid;
  traj.engine = "closed_form_dephasing";
  for (int i = 0; i < grid.size(); ++i)
    traj.maps.push_back(TransferMatrix::diagonal(X[i], Y[i], Z[i]));
  return traj;
}

MapTrajectory assemble_lambda_damping(double lambda, double gamma,
                                      const WaitingTimeDist& f, int pauli_index,
                                      const TimeGrid& grid, SurvivalMode mode) {
  const auto eps = ChannelSpec::pauli(pauli_index).pauli_signs();
  const int n = grid.size();
  std::vector<double> G(n), M(n);
  for (int i = 0; i < n; ++i) {
    G[i] = eval_G(lambda, gamma, grid.t(i));
    M[i] = G[i] * G[i];
  }
  const std::vector<double> X =
      scalar_functional(functional_sign(eps[1]), G, f, grid, mode).values;
  const std::vector<double> Y =
      (eps[2] == eps[1])
          ? X
          : scalar_functional(functional_sign(eps[2]), G, f, grid, mode).values;
  const std::vector<double> Z =
      scalar_functional(functional_sign(eps[3]), M, f, grid, mode).values;

  // Corner: W - eps_z (fM)*W = g(M-1) + int_0^t f(M-1).
  const std::vector<double> fd = sample_density(f, grid);
  const std::vector<double> g = survival_series(f, grid, mode);
  std::vector<double> kernel(n), fM1(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    kernel[i] = fd[i] * M[i];
    fM1[i] = fd[i] * (M[i] - 1.0);
  }
  const std::vector<double> cum = cumulative_integral(fM1, grid.h);
  for (int i = 0; i < n; ++i) rhs[i] = g[i] * (M[i] - 1.0) + cum[i];
  const std::vector<double> W =
      solve_scalar_volterra(kernel, rhs, functional_sign(eps[3]), grid.h);

  MapTrajectory traj;
  traj.grid = grid;
  traj.engine = "closed_form_damping";
  for (int i = 0; i < n; ++i)
    traj.maps.push_back(TransferMatrix::diagonal_corner(X[i], Y[i], Z[i], W[i]));
  return traj;
}

std::vector<DensityMatrix> integrate_master_equation(const ProcessSpec& p,
                                                     const DensityMatrix& rho0) {
  const TimeGrid& grid = p.grid;
  const int n = grid.steps;
  const Mat4 E = to_mat4(channel_transfer(p.E));
  const double f0 = p.f.density_at_zero();

  // K_reg = f'F + fF', I = -fF + gF'.
  std::vector<Mat4> K(n + 1), Ih(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = grid.t(i);
    const Mat4 F = to_mat4(p.F.eval(t));
    const Mat4 Fp = to_mat4(p.F.derivative(t));
    const double fd = p.f.density(t);
    K[i] = p.f.density_derivative(t) * F + fd * Fp;
    Ih[i] = -fd * F + p.f.survival(t) * Fp;
  }

  using Vec4 = Eigen::Vector4d;
  std::vector<Vec4> r(n + 1);
  r[0] = Vec4(to_pauli_vec(rho0));

  auto rhs_at = [&](int i, const std::vector<Vec4>& hist,
                    const Vec4& head) -> Vec4 {
    // head stands in for hist[i] (predictor support).
    Vec4 s = Vec4::Zero();
    for (int j = 0; j < i; ++j)
      s += quad_weight(i, j, grid.h) * (K[i - j] * (E * hist[j]));
    if (i > 0) s += quad_weight(i, i, grid.h) * (K[0] * (E * head));
    s += f0 * (E * head);
    s += Ih[i] * hist[0];
    return s;
  };

  for (int i = 0; i < n; ++i) {
    const Vec4 k1 = rhs_at(i, r, r[i]);
    const Vec4 pred = r[i] + grid.h * k1;
    const Vec4 k2 = rhs_at(i + 1, r, pred);
    r[i + 1] = r[i] + 0.5 * grid.h * (k1 + k2);
    // one more corrector pass tightens the implicit head dependence
    const Vec4 k3 = rhs_at(i + 1, r, r[i + 1]);
    r[i + 1] = r[i] + 0.5 * grid.h * (k1 + k3);
    // trace component is analytically conserved (TP structure); pin it so
    // quadrature error cannot accumulate into the normalization
    r[i + 1](0) = r[0](0);
  }

  std::vector<DensityMatrix> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    out.emplace_back(from_pauli_vec(PauliVec(r[i])));
  return out;
}

RenewalKernel renewal_kernel_k(const WaitingTimeDist& f, const TimeGrid& grid) {
  const int n = grid.size();
  std::vector<double> fd(n), rhs(n);
  const double f0 = f.density_at_zero();
  for (int i = 0; i < n; ++i) {
    fd[i] = f.density(grid.t(i));
    rhs[i] = f.density_derivative(grid.t(i)) + f0 * fd[i];
  }
  RenewalKernel k;
  k.point_mass = f0;
  k.regular.grid = grid;
  k.regular.label = "k";
  k.regular.values = solve_scalar_volterra(fd, rhs, -1.0, grid.h);
  return k;
}

std::vector<DensityMatrix> integrate_budini(const LindbladSpec& L,
                                            const ChannelSpec& E,
                                            const WaitingTimeDist& f,
                                            const DensityMatrix& rho0,
                                            const TimeGrid& grid) {
  const int n = grid.steps;
  const Mat4 gen = to_mat4(lindblad_transfer_generator(L));
  const Mat4 Em = to_mat4(channel_transfer(E));
  const Mat4 jump = Em - Mat4::Identity();
  const RenewalKernel kern = renewal_kernel_k(f, grid);
  const double f0 = kern.point_mass;

  // P_i = k(t_i) e^{t_i L} [E - 1]
  std::vector<Mat4> P(n + 1);
  for (int i = 0; i <= n; ++i)
    P[i] = kern.regular.values[i] * Mat4((grid.t(i) * gen).exp()) * jump;

  using Vec4 = Eigen::Vector4d;
  std::vector<Vec4> r(n + 1);
  r[0] = Vec4(to_pauli_vec(rho0));

  auto rhs_at = [&](int i, const std::vector<Vec4>& hist,
                    const Vec4& head) -> Vec4 {
    Vec4 s = gen * head + f0 * (jump * head);
    for (int j = 0; j < i; ++j)
      s += quad_weight(i, j, grid.h) * (P[i - j] * hist[j]);
    if (i > 0) s += quad_weight(i, i, grid.h) * (P[0] * head);
    return s;
  };

  for (int i = 0; i < n; ++i) {
    const Vec4 k1 = rhs_at(i, r, r[i]);
    const Vec4 pred = r[i] + grid.h * k1;
    const Vec4 k2 = rhs_at(i + 1, r, pred);
    r[i + 1] = r[i] + 0.5 * grid.h * (k1 + k2);
    const Vec4 k3 = rhs_at(i + 1, r, r[i + 1]);
    r[i + 1] = r[i] + 0.5 * grid.h * (k1 + k3);
    // see integrate_master_equation: the trace component is conserved
    r[i + 1](0) = r[0](0);
  }

  std::vector<DensityMatrix> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    out.emplace_back(from_pauli_vec(PauliVec(r[i])));
  return out;
}

std::vector<double> reset_equation_residual(const TimedMapSpec& F,
                                            const WaitingTimeDist& f,
                                            const MapTrajectory& traj) {
  const TimeGrid& grid = traj.grid;
  const int n = grid.steps;
  if (static_cast<int>(traj.maps.size()) != n + 1)
    throw std::invalid_argument("reset_equation_residual: trajectory/grid mismatch");

  std::vector<Mat4> lam(n + 1), dlam(n + 1);
  for (int i = 0; i <= n; ++i) lam[i] = to_mat4(traj.maps[i]);
  for (int i = 1; i < n; ++i) dlam[i] = (lam[i + 1] - lam[i - 1]) / (2.0 * grid.h);
  dlam[0] = (lam[1] - lam[0]) / grid.h;
  dlam[n] = (lam[n] - lam[n - 1]) / grid.h;

  std::vector<double> fd(n + 1);
  std::vector<Mat4> Fm(n + 1);
  for (int i = 0; i <= n; ++i) {
    fd[i] = f.density(grid.t(i));
    Fm[i] = to_mat4(F.eval(grid.t(i)));
  }

  std::vector<double> res(n + 1, 0.0);
  // Central differences are unavailable at the ends; residual reported for
  // interior nodes only.
  for (int i = 1; i < n; ++i) {
    Mat4 rhs = f.survival(grid.t(i)) * to_mat4(F.derivative(grid.t(i)));
    for (int j = 0; j <= i; ++j)
      rhs += quad_weight(i, j, grid.h) * fd[i - j] * (Fm[i - j] * dlam[j]);
    res[i] = (dlam[i] - rhs).cwiseAbs().maxCoeff();
  }
  return res;
}

}  // namespace pwd
