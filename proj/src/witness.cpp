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

#include "pwd/witness.hpp"

#include <cmath>
#include <stdexcept>

#include "pwd/rng.hpp"
#include "pwd/threads.hpp"

#ifdef PWD_HAVE_OPENMP
#include <omp.h>
#endif

namespace pwd {

StatePair::StatePair(DensityMatrix a, DensityMatrix b)
    : rho1(std::move(a)), rho2(std::move(b)) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("StatePair: dimension mismatch");
  if (trace_distance(rho1, rho2) <= 0.0)
    throw std::invalid_argument("StatePair: states must be distinct");
}

double StatePair::delta_p() const {
  return (rho1.entries()(0, 0) - rho2.entries()(0, 0)).real();
}

Complex StatePair::delta_c() const {
  return rho1.entries()(0, 1) - rho2.entries()(0, 1);
}

std::vector<double> trace_distance_series(const MapTrajectory& traj,
                                          const StatePair& pair) {
  const Matrix diff = pair.rho1.entries() - pair.rho2.entries();
  std::vector<double> out(traj.maps.size());
  for (std::size_t i = 0; i < traj.maps.size(); ++i) {
    const Matrix img = apply_map(traj.maps[i], diff);
    out[i] = 0.5 * Eigen::SelfAdjointEigenSolver<Matrix>(img,
                       Eigen::EigenvaluesOnly)
                       .eigenvalues()
                       .cwiseAbs()
                       .sum();
  }
  return out;
}

GrowthReport detect_growth(const std::vector<double>& series,
                           const TimeGrid& grid, double eps_growth) {
  if (!(eps_growth > 0.0))
    throw std::invalid_argument("detect_growth: eps_growth must be > 0");
  GrowthReport rep;
  std::optional<GrowthInterval> open;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const double inc = series[i + 1] - series[i];
    if (inc > 0.0) rep.nm_measure += inc;
    if (inc > eps_growth) {
      if (!open) {
        open = GrowthInterval{grid.t(static_cast<int>(i)),
                              grid.t(static_cast<int>(i + 1)), inc};
      } else {
        open->t_end = grid.t(static_cast<int>(i + 1));
        open->max_increment = std::max(open->max_increment, inc);
      }
    } else if (open) {
      rep.intervals.push_back(*open);
      open.reset();
    }
  }
  if (open) rep.intervals.push_back(*open);
  rep.detected = !rep.intervals.empty();
  return rep;
}

namespace {

bool is_diagonal_corner(const TransferMatrix& M, double tol = 1e-12) {
  if (M.size() != 4) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j || (i == 3 && j == 0)) continue;
      if (std::abs(M.m(i, j)) > tol) return false;
    }
  return true;
}

}  // namespace

std::map<std::string, std::vector<double>> witness_functions(
    const MapTrajectory& traj) {
  std::map<std::string, std::vector<double>> out;
  std::vector<double> x, y, z;
  for (const TransferMatrix& M : traj.maps) {
    if (!is_diagonal_corner(M))
      throw std::invalid_argument(
          "witness_functions: trajectory is not diagonal-plus-corner");
    x.push_back(std::abs(M.m(1, 1)));
    y.push_back(std::abs(M.m(2, 2)));
    z.push_back(std::abs(M.m(3, 3)));
  }
  out["|X|"] = std::move(x);
  out["|Y|"] = std::move(y);
  out["|Z|"] = std::move(z);
  return out;
}

bool witness_detects(const MapTrajectory& traj, double eps_growth) {
  try {
    for (const auto& [name, series] : witness_functions(traj))
      if (detect_growth(series, traj.grid, eps_growth).detected) return true;
    return false;
  } catch (const std::invalid_argument&) {
    // Non-diagonal trajectory: pair-based detection with the axis pairs.
    const WitnessReport rep = pair_search(traj, 0, 0, eps_growth);
    return rep.detected;
  }
}

namespace {

StatePair random_orthogonal_pair(std::uint64_t seed) {
  Rng rng(seed);
  // Haar-ish random pure state and its orthogonal complement.
  Eigen::VectorXcd psi(2);
  psi << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
  psi.normalize();
  Eigen::VectorXcd phi(2);
  phi << -std::conj(psi(1)), std::conj(psi(0));
  return StatePair(DensityMatrix::pure(psi), DensityMatrix::pure(phi));
}

}  // namespace

WitnessReport pair_search(const MapTrajectory& traj, int n_random,
                          std::uint64_t seed, double eps_growth) {
  if (n_random < 0)
    throw std::invalid_argument("pair_search: n_random must be >= 0");
  std::vector<StatePair> pairs;
  std::vector<std::string> labels;
  pairs.emplace_back(ket0(), ket1());
  labels.push_back("z-axis");
  pairs.emplace_back(ket_plus(),
                     DensityMatrix::pure((Eigen::VectorXcd(2) << 1, -1).finished()));
  labels.push_back("x-axis");
  pairs.emplace_back(ket_plus_i(),
                     DensityMatrix::pure(
                         (Eigen::VectorXcd(2) << 1, Complex(0, -1)).finished()));
  labels.push_back("y-axis");
  for (int k = 0; k < n_random; ++k) {
    pairs.push_back(random_orthogonal_pair(substream_seed(seed, k)));
    labels.push_back("random-" + std::to_string(k));
  }

  WitnessReport rep;
  rep.grid = traj.grid;
  rep.pair_labels = labels;
  rep.d_values.resize(pairs.size());
  rep.growth.resize(pairs.size());

  const int npairs = static_cast<int>(pairs.size());
  const int nthreads = worker_count();
  (void)nthreads;
#ifdef PWD_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
  for (int i = 0; i < npairs; ++i) {
    rep.d_values[i] = trace_distance_series(traj, pairs[i]);
    rep.growth[i] = detect_growth(rep.d_values[i], traj.grid, eps_growth);
  }

  double best = -1.0;
  for (int i = 0; i < npairs; ++i) {
    rep.detected = rep.detected || rep.growth[i].detected;
    if (rep.growth[i].nm_measure > best) {
      best = rep.growth[i].nm_measure;
      rep.best_pair = i;
    }
  }
  return rep;
}

std::vector<double> default_ratio_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("default_ratio_grid: bad range");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return out;
}

SurfaceData sweep_surface(SurfaceExample example, double gamma_over_lambda,
                          const TimeGrid& t_grid,
                          const std::vector<double>& ratio_grid) {
  for (double r : ratio_grid)
    if (!(r > 0.0))
      throw std::invalid_argument("sweep_surface: ratios must be positive");

  SurfaceData data;
  for (int i = 0; i < t_grid.size(); ++i) data.lambda_t.push_back(t_grid.t(i));
  data.ratio = ratio_grid;

  const int nr = static_cast<int>(ratio_grid.size());
  const int nt = t_grid.size();
  const double lambda = 1.0;  // time axis is lambda t

  std::vector<std::vector<double>> layer_a(nr), layer_b(nr);
  const int nthreads = worker_count();
  (void)nthreads;
#ifdef PWD_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
  for (int r = 0; r < nr; ++r) {
    const double rate = ratio_grid[r] * lambda;
    // The requested display grid can be far coarser than the waiting-time
    // density (peaked near 1/rate); solve on a refined grid and subsample.
    const double h_target = std::min(0.01 / lambda, 0.1 / rate);
    const int refine = std::max(1, static_cast<int>(std::ceil(t_grid.h / h_target)));
    const TimeGrid fine(t_grid.h / refine, t_grid.steps * refine);
    const int nf = fine.size();
    auto subsample = [&](std::vector<double> v) {
      std::vector<double> out(nt);
      for (int i = 0; i < nt; ++i) out[i] = std::abs(v[i * refine]);
      return out;
    };
    if (example == SurfaceExample::Dephasing) {
      const WaitingTimeDist f = WaitingTimeDist::erlang(3, rate);
      std::vector<double> D(nf);
      for (int i = 0; i < nf; ++i) D[i] = std::cos(lambda * fine.t(i));
      layer_a[r] = subsample(scalar_functional(-1, D, f, fine).values);
      layer_b[r] = subsample(
          scalar_functional(1, std::vector<double>(nf, 1.0), f, fine).values);
    } else {
      const WaitingTimeDist f = WaitingTimeDist::erlang(2, rate);
      const double gamma = gamma_over_lambda * lambda;
      std::vector<double> G(nf), M(nf);
      for (int i = 0; i < nf; ++i) {
        G[i] = eval_G(lambda, gamma, fine.t(i));
        M[i] = G[i] * G[i];
      }
      layer_a[r] = subsample(scalar_functional(-1, G, f, fine).values);
      layer_b[r] = subsample(scalar_functional(1, M, f, fine).values);
    }
  }

  if (example == SurfaceExample::Dephasing) {
    data.layers["|d-|"] = std::move(layer_a);
    data.layers["|q|"] = std::move(layer_b);
  } else {
    data.layers["|g-|"] = std::move(layer_a);
    data.layers["|h+|"] = std::move(layer_b);
  }
  return data;
}

}  // namespace pwd
