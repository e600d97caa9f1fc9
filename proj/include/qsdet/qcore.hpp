// Copyright 2026 The qsdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qsdet/parallel.hpp"
#include "qsdet/rng.hpp"

namespace qsdet {

using Complex = std::complex<double>;

/// Tolerance for exact linear-algebra identities.
inline constexpr double kExactTolerance = 1e-10;
/// Largest dense statevector (amplitude count) any operation will allocate.
inline constexpr std::size_t kDenseStateBudget = std::size_t{1} << 20;
/// Largest dimension of a dense density operator.
inline constexpr std::size_t kDenseOperatorBudget = 1024;

/// Unit-norm pure state of dimension >= 2.
class StateVector {
 public:
  /// Throws InvalidArgument if dim < 2 or the norm deviates from 1.
  explicit StateVector(std::vector<Complex> amplitudes);
  /// Rescales to unit norm; throws on the zero vector.
  static StateVector normalized(std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector uniform(std::size_t dim);

  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

 private:
  std::vector<Complex> amps_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOp {
 public:
  explicit DensityOp(Eigen::MatrixXcd matrix);
  static DensityOp pure(const StateVector& psi);
  static DensityOp maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXcd matrix_;
};

/// Unitary exchanging two orthogonal unit vectors a <-> b and fixing their
/// orthogonal complement. Only the two defining vectors are stored.
class RankTwoFlip {
 public:
  RankTwoFlip(StateVector a, StateVector b);

  std::size_t dim() const { return a_.dim(); }
  const StateVector& a() const { return a_; }
  const StateVector& b() const { return b_; }

 private:
  StateVector a_;
  StateVector b_;
};

/// Normalized vector of i.i.d. standard complex Gaussians.
StateVector haar_sample(std::size_t dim, SeededRng& rng);

std::vector<double> born_distribution(const StateVector& psi);

/// Samples a computational-basis outcome with probability |amplitude|^2.
std::size_t measure_computational(const StateVector& psi, SeededRng& rng);

Complex inner_product(const StateVector& a, const StateVector& b);
/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

/// (1/2) * sum of |eigenvalues| of (rho - sigma), clamped to [0, 1].
double trace_distance(const DensityOp& rho, const DensityOp& sigma);
/// (1/2) * Schatten-1 norm of a Hermitian matrix.
double half_trace_norm(const Eigen::MatrixXcd& hermitian);

/// (I - |a><a| - |b><b| + |a><b| + |b><a|) psi as a rank-2 update.
StateVector apply_flip(const RankTwoFlip& flip, const StateVector& psi);

/// Amplitudes of psi^{(x) t}, index digits most significant first.
std::vector<Complex> tensor_power(const StateVector& psi, std::size_t t);

/// Haar average of |phi><phi|^{(x) t}: the symmetric-subspace projector on
/// (C^dim)^{(x) t} divided by binom(dim + t - 1, t). Throws BudgetExceeded
/// when dim^t > kDenseOperatorBudget.
DensityOp symmetric_moment(std::size_t dim, std::size_t t);

/// dim^t, or throws BudgetExceeded if it exceeds `budget`.
std::size_t checked_power(std::size_t dim, std::size_t t, std::size_t budget);

double binomial(std::size_t n, std::size_t k);

}  // namespace qsdet
