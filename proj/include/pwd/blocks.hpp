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

#ifndef PWD_BLOCKS_HPP
#define PWD_BLOCKS_HPP

#include <functional>
#include <memory>
#include <vector>

#include "pwd/core.hpp"
#include "pwd/grid.hpp"

namespace pwd {

/// Lindblad generator data: Hamiltonian H plus jump operators L_k.
struct LindbladSpec {
  Matrix hamiltonian;           // Hermitian, units of rate (hbar = 1)
  std::vector<Matrix> jumps;

  static LindbladSpec pure_dephasing(double kappa);  // single jump sqrt(k) s_z
};

/// Transfer representation of L rho = -i[H, rho] + sum_k (L_k rho L_k^dag
/// - (1/2){L_k^dag L_k, rho}); first row identically zero.
TransferMatrix lindblad_transfer_generator(const LindbladSpec& L);

/// Jump channel: Pauli conjugation or a general Kraus set.
struct ChannelSpec {
  enum class Kind { Pauli, Kraus };
  Kind kind = Kind::Pauli;
  int pauli_index = 0;          // 0, 1 (x), 2 (y), 3 (z)
  std::vector<Matrix> kraus;

  static ChannelSpec pauli(int index);
  static ChannelSpec from_kraus(std::vector<Matrix> ops);

  /// Signs (1, e_x, e_y, e_z) for Pauli channels.
  std::array<int, 4> pauli_signs() const;
};

TransferMatrix channel_transfer(const ChannelSpec& c);

// Family t -> F(t) of inter-jump CPT maps with F(0) = 1, plus the analytic
// time derivative for the built-in kinds.
class TimedMapSpec {
 public:
  enum class Kind { Dephasing, Damping, Semigroup, Custom };

  /// Default-constructed spec is the identity family (D = 1 dephasing).
  TimedMapSpec()
      : D_([](double) { return 1.0; }), D_prime_([](double) { return 0.0; }) {}

  /// diag(1, D(t), D(t), 1); D(0) = 1, |D| <= 1 required for CPT.
  static TimedMapSpec dephasing(std::function<double(double)> D,
                                std::function<double(double)> D_prime);
  /// Default dephasing: D(t) = cos(lambda t).
  static TimedMapSpec dephasing_cos(double lambda);
  /// Vacuum-coupling qubit map diag(1, G, G, G^2) + B(G^2 - 1).
  static TimedMapSpec damping(double lambda, double gamma);
  /// exp(t L) for a Lindblad generator.
  static TimedMapSpec semigroup(const LindbladSpec& L);
  /// Tabulated maps on a grid; evaluation off-grid throws unless
  /// interpolation is enabled, derivatives use central differences.
  static TimedMapSpec custom(TimeGrid grid, std::vector<TransferMatrix> maps,
                             bool interpolate = false, double h_fd = 1e-4);

  Kind kind() const { return kind_; }
  int hilbert_dim() const { return 2; }

  TransferMatrix eval(double t) const;         // F(t)
  TransferMatrix derivative(double t) const;   // dF/dt

  double damping_lambda() const { return lambda_; }
  double damping_gamma() const { return gamma_; }
  const LindbladSpec& lindblad() const;

 private:
  Kind kind_ = Kind::Dephasing;
  std::function<double(double)> D_, D_prime_;
  double lambda_ = 0.0, gamma_ = 0.0;
  std::shared_ptr<LindbladSpec> lindblad_;
  TransferMatrix generator_;           // Semigroup
  // Custom
  TimeGrid table_grid_;
  std::vector<TransferMatrix> table_;
  bool interpolate_ = false;
  double h_fd_ = 1e-4;
};

/// G(t) of the vacuum-coupling map: e^{-lt/2}[cosh(yt/2) + (l/y) sinh(yt/2)],
/// y = sqrt(l^2 - 2 g l); trig branch for l < 2g, series limit at y = 0.
double eval_G(double lambda, double gamma, double t);
double eval_G_derivative(double lambda, double gamma, double t);

}  // namespace pwd

#endif
