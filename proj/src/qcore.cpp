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

#include "qsdet/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qsdet/errors.hpp"
#include "qsdet/kernels.hpp"

namespace qsdet {
namespace {

double squared_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) throw InvalidArgument("invalid-dimension: state dimension must be >= 2");
  const double norm = std::sqrt(squared_norm(amps_));
  if (std::abs(norm - 1.0) > kExactTolerance) {
    throw InvalidArgument("state vector norm is " + std::to_string(norm) + ", expected 1");
  }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  const double norm = std::sqrt(squared_norm(amplitudes));
  if (norm == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  for (auto& a : amplitudes) a /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("basis index out of range");
  std::vector<Complex> v(dim, 0.0);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::uniform(std::size_t dim) {
  if (dim < 2) throw InvalidArgument("invalid-dimension: state dimension must be >= 2");
  return StateVector(std::vector<Complex>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

DensityOp::DensityOp(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw DimensionMismatch("density operator must be square");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kExactTolerance) {
    throw InvalidArgument("density operator is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kExactTolerance) {
    throw InvalidArgument("density operator trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kExactTolerance) {
    throw InvalidArgument("density operator has a negative eigenvalue");
  }
}

DensityOp DensityOp::pure(const StateVector& psi) {
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dim()));
  return DensityOp(v * v.adjoint());
}

DensityOp DensityOp::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityOp(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(dim));
}

RankTwoFlip::RankTwoFlip(StateVector a, StateVector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.dim() != b_.dim()) throw DimensionMismatch("flip vectors have different dimensions");
  if (std::abs(inner_product(a_, b_)) > kExactTolerance) {
    throw InvalidArgument("flip vectors must be orthogonal");
  }
}

StateVector haar_sample(std::size_t dim, SeededRng& rng) {
  if (dim < 2) throw InvalidArgument("invalid-dimension: Haar sampling needs dim >= 2");
  if (dim > kDenseStateBudget) throw BudgetExceeded("Haar sample exceeds dense state budget");
  std::vector<Complex> v(dim);
  for (auto& a : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = Complex(re, im);
  }
  return StateVector::normalized(std::move(v));
}

std::vector<double> born_distribution(const StateVector& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) p[i] = std::norm(psi[i]);
  return p;
}

std::size_t measure_computational(const StateVector& psi, SeededRng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const double p = std::norm(psi[i]);
    if (p == 0.0) continue;
    last_nonzero = i;
    cumulative += p;
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative sum just below u.
  return last_nonzero;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner product of states with different dims");
  return kernels::inner_product(a.amplitudes(), b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner_product(a, b)); }

double half_trace_norm(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOp& rho, const DensityOp& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("trace distance of operators with different dims");
  return std::clamp(half_trace_norm(rho.matrix() - sigma.matrix()), 0.0, 1.0);
}

StateVector apply_flip(const RankTwoFlip& flip, const StateVector& psi) {
  if (flip.dim() != psi.dim()) throw DimensionMismatch("flip and state dimensions differ");
  const Complex on_a = inner_product(flip.a(), psi);
  const Complex on_b = inner_product(flip.b(), psi);
  const Complex delta = on_b - on_a;
  const auto& a = flip.a().amplitudes();
  const auto& b = flip.b().amplitudes();
  std::vector<Complex> out(psi.amplitudes().begin(), psi.amplitudes().end());
  const auto count = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] += delta * a[k] - delta * b[k];
  }
  return StateVector(std::move(out));
}

std::size_t checked_power(std::size_t dim, std::size_t t, std::size_t budget) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < t; ++i) {
    if (total > budget / dim) throw BudgetExceeded("dim^t exceeds the memory budget");
    total *= dim;
  }
  if (total > budget) throw BudgetExceeded("dim^t exceeds the memory budget");
  return total;
}

std::vector<Complex> tensor_power(const StateVector& psi, std::size_t t) {
  const std::size_t total = checked_power(psi.dim(), t, kDenseStateBudget);
  std::vector<Complex> out(total, 1.0);
  const std::size_t d = psi.dim();
  for (std::size_t index = 0; index < total; ++index) {
    std::size_t rest = index;
    Complex v = 1.0;
    for (std::size_t f = 0; f < t; ++f) {
      v *= psi[rest % d];
      rest /= d;
    }
    out[index] = v;
  }
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

DensityOp symmetric_moment(std::size_t dim, std::size_t t) {
  if (dim < 2) throw InvalidArgument("invalid-dimension: symmetric moment needs dim >= 2");
  if (t < 1) throw InvalidArgument("symmetric moment needs t >= 1");
  const std::size_t total = checked_power(dim, t, kDenseOperatorBudget);
  std::vector<std::size_t> perm(t);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double factorial = 1.0;
  for (std::size_t i = 2; i <= t; ++i) factorial *= static_cast<double>(i);

  Eigen::MatrixXcd projector = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(total),
                                                      static_cast<Eigen::Index>(total));
  std::vector<std::size_t> digits(t), permuted(t);
  do {
    for (std::size_t index = 0; index < total; ++index) {
      std::size_t rest = index;
      for (std::size_t f = 0; f < t; ++f) {
        digits[t - 1 - f] = rest % dim;
        rest /= dim;
      }
      std::size_t image = 0;
      for (std::size_t f = 0; f < t; ++f) image = image * dim + digits[perm[f]];
      projector(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(index)) += 1.0 / factorial;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return DensityOp(projector / binomial(dim + t - 1, t));
}

}  // namespace qsdet
