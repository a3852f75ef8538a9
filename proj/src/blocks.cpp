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

#include "pwd/blocks.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace pwd {

LindbladSpec LindbladSpec::pure_dephasing(double kappa) {
  LindbladSpec spec;
  spec.hamiltonian = Matrix::Zero(2, 2);
  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  spec.jumps.push_back(std::sqrt(kappa) * sz);
  return spec;
}

TransferMatrix lindblad_transfer_generator(const LindbladSpec& L) {
  const int d = static_cast<int>(L.hamiltonian.rows());
  if ((L.hamiltonian - L.hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("lindblad_transfer_generator: H not Hermitian");
  const OperatorBasis& basis = OperatorBasis::get(d);
  const Complex I(0, 1);
  RealMatrix m(basis.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const Matrix& bj = basis.element(j);
    Matrix img = -I * (L.hamiltonian * bj - bj * L.hamiltonian);
    for (const Matrix& lk : L.jumps) {
      const Matrix ldl = lk.adjoint() * lk;
      img += lk * bj * lk.adjoint() - 0.5 * (ldl * bj + bj * ldl);
    }
    for (int i = 0; i < basis.size(); ++i)
      m(i, j) = (basis.element(i).adjoint() * img).trace().real();
  }
  return TransferMatrix(std::move(m));
}

ChannelSpec ChannelSpec::pauli(int index) {
  if (index < 0 || index > 3)
    throw std::invalid_argument("ChannelSpec::pauli: index in {0,1,2,3}");
  ChannelSpec c;
  c.kind = Kind::Pauli;
  c.pauli_index = index;
  return c;
}

ChannelSpec ChannelSpec::from_kraus(std::vector<Matrix> ops) {
  ChannelSpec c;
  c.kind = Kind::Kraus;
  c.kraus = std::move(ops);
  return c;
}

std::array<int, 4> ChannelSpec::pauli_signs() const {
  if (kind != Kind::Pauli)
    throw std::logic_error("pauli_signs: not a Pauli channel");
  // s_i rho s_i: basis element j picks up +1 if j commutes with i.
  switch (pauli_index) {
    case 0: return {1, 1, 1, 1};
    case 1: return {1, 1, -1, -1};
    case 2: return {1, -1, 1, -1};
    default: return {1, -1, -1, 1};
  }
}

TransferMatrix channel_transfer(const ChannelSpec& c) {
  if (c.kind == ChannelSpec::Kind::Pauli) {
    const auto s = c.pauli_signs();
    return TransferMatrix::diagonal(s[1], s[2], s[3]);
  }
  return TransferMatrix::from_kraus(c.kraus);
}

TimedMapSpec TimedMapSpec::dephasing(std::function<double(double)> D,
                                     std::function<double(double)> D_prime) {
  TimedMapSpec s;
  s.kind_ = Kind::Dephasing;
  s.D_ = std::move(D);
  s.D_prime_ = std::move(D_prime);
  if (std::abs(s.D_(0.0) - 1.0) > 1e-12)
    throw std::invalid_argument("dephasing: D(0) must be 1");
  return s;
}

TimedMapSpec TimedMapSpec::dephasing_cos(double lambda) {
  return dephasing([lambda](double t) { return std::cos(lambda * t); },
                   [lambda](double t) { return -lambda * std::sin(lambda * t); });
}

TimedMapSpec TimedMapSpec::damping(double lambda, double gamma) {
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("damping: rates must be > 0");
  TimedMapSpec s;
  s.kind_ = Kind::Damping;
  s.lambda_ = lambda;
  s.gamma_ = gamma;
  return s;
}

TimedMapSpec TimedMapSpec::semigroup(const LindbladSpec& L) {
  TimedMapSpec s;
  s.kind_ = Kind::Semigroup;
  s.lindblad_ = std::make_shared<LindbladSpec>(L);
  s.generator_ = lindblad_transfer_generator(L);
  return s;
}

TimedMapSpec TimedMapSpec::custom(TimeGrid grid,
                                  std::vector<TransferMatrix> maps,
                                  bool interpolate, double h_fd) {
  if (static_cast<int>(maps.size()) != grid.size())
    throw std::invalid_argument("custom: one map per grid node required");
  TimedMapSpec s;
  s.kind_ = Kind::Custom;
  s.table_grid_ = grid;
  s.table_ = std::move(maps);
  s.interpolate_ = interpolate;
  s.h_fd_ = h_fd;
  return s;
}

const LindbladSpec& TimedMapSpec::lindblad() const {
  if (!lindblad_) throw std::logic_error("lindblad(): not a Semigroup spec");
  return *lindblad_;
}

TransferMatrix TimedMapSpec::eval(double t) const {
  if (t < 0.0) throw std::invalid_argument("eval_F: t must be >= 0");
  switch (kind_) {
    case Kind::Dephasing: {
      const double d = D_(t);
      return TransferMatrix::diagonal(d, d, 1.0);
    }
    case Kind::Damping: {
      const double g = eval_G(lambda_, gamma_, t);
      const double g2 = g * g;
      return TransferMatrix::diagonal_corner(g, g, g2, g2 - 1.0);
    }
    case Kind::Semigroup:
      return TransferMatrix(RealMatrix((t * generator_.m).exp()));
    case Kind::Custom: {
      const double x = t / table_grid_.h;
      const int i = static_cast<int>(std::lround(x));
      if (i >= 0 && i < table_grid_.size() &&
          std::abs(x - i) < 1e-9 * (1.0 + std::abs(x)))
        return table_[i];
      if (!interpolate_)
        throw std::invalid_argument(
            "custom map queried off-grid without interpolation enabled");
      const int lo = std::min(std::max(0, static_cast<int>(std::floor(x))),
                              table_grid_.steps - 1);
      const double a = x - lo;
      return TransferMatrix(
          RealMatrix((1.0 - a) * table_[lo].m + a * table_[lo + 1].m));
    }
  }
  throw std::logic_error("eval_F: unreachable");
}

TransferMatrix TimedMapSpec::derivative(double t) const {
  if (t < 0.0) throw std::invalid_argument("eval_F_derivative: t must be >= 0");
  switch (kind_) {
    case Kind::Dephasing: {
      const double dp = D_prime_(t);
      RealMatrix m = RealMatrix::Zero(4, 4);
      m(1, 1) = m(2, 2) = dp;
      return TransferMatrix(std::move(m));
    }
    case Kind::Damping: {
      const double g = eval_G(lambda_, gamma_, t);
      const double gp = eval_G_derivative(lambda_, gamma_, t);
      RealMatrix m = RealMatrix::Zero(4, 4);
      m(1, 1) = m(2, 2) = gp;
      m(3, 3) = 2.0 * g * gp;
      m(3, 0) = 2.0 * g * gp;
      return TransferMatrix(std::move(m));
    }
    case Kind::Semigroup:
      return TransferMatrix(RealMatrix(generator_.m * (t * generator_.m).exp()));
    case Kind::Custom: {
      // Central difference; one-sided at t = 0.
      const double h = h_fd_;
      if (t < h) {
        const TransferMatrix f0 = eval(0.0), f1 = eval(h);
        return TransferMatrix(RealMatrix((f1.m - f0.m) / h));
      }
      const TransferMatrix fm = eval(t - h), fp = eval(t + h);
      return TransferMatrix(RealMatrix((fp.m - fm.m) / (2.0 * h)));
    }
  }
  throw std::logic_error("eval_F_derivative: unreachable");
}

double eval_G(double lambda, double gamma, double t) {
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("eval_G: rates must be > 0");
  if (t < 0.0) throw std::invalid_argument("eval_G: t must be >= 0");
  const double disc = lambda * lambda - 2.0 * gamma * lambda;
  const double pre = std::exp(-lambda * t / 2.0);
  if (std::abs(disc) < 1e-16 * lambda * lambda)
    return pre * (1.0 + lambda * t / 2.0);
  if (disc > 0.0) {
    const double y = std::sqrt(disc);
    return pre * (std::cosh(y * t / 2.0) +
                  (lambda / y) * std::sinh(y * t / 2.0));
  }
  const double y = std::sqrt(-disc);
  return pre * (std::cos(y * t / 2.0) + (lambda / y) * std::sin(y * t / 2.0));
}

double eval_G_derivative(double lambda, double gamma, double t) {
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("eval_G_derivative: rates must be > 0");
  if (t < 0.0) throw std::invalid_argument("eval_G_derivative: t must be >= 0");
  // G' = -(gamma lambda / y) e^{-lambda t/2} sinh(y t / 2)
  const double disc = lambda * lambda - 2.0 * gamma * lambda;
  const double pre = std::exp(-lambda * t / 2.0);
  if (std::abs(disc) < 1e-16 * lambda * lambda)
    return -gamma * lambda * (t / 2.0) * pre;
  if (disc > 0.0) {
    const double y = std::sqrt(disc);
    return -(gamma * lambda / y) * pre * std::sinh(y * t / 2.0);
  }
  const double y = std::sqrt(-disc);
  return -(gamma * lambda / y) * pre * std::sin(y * t / 2.0);
}

}  // namespace pwd
