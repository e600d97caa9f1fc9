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

#include "qsdet/kernels.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "qsdet/errors.hpp"

namespace qsdet {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void configure_threads_from_env() {
  const char* env = std::getenv("QSDET_THREADS");
  if (env == nullptr) return;
  const int n = std::atoi(env);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace kernels {
namespace {

constexpr std::size_t kChunk = 4096;

void check_sizes(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner product of vectors with different sizes");
}

}  // namespace

Complex inner_product_serial(std::span<const Complex> a, std::span<const Complex> b) {
  check_sizes(a, b);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

Complex inner_product_omp(std::span<const Complex> a, std::span<const Complex> b) {
  check_sizes(a, b);
  const std::size_t chunks = (a.size() + kChunk - 1) / kChunk;
  std::vector<Complex> partial(chunks, 0.0);
  const auto count = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < count; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, a.size());
    Complex s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += std::conj(a[i]) * b[i];
    partial[static_cast<std::size_t>(c)] = s;
  }
  Complex sum = 0.0;
  for (const auto& p : partial) sum += p;
  return sum;
}

// acc(:, j) += batch(:, c) * weight * conj(batch(j, c)), in plain real
// arithmetic so the compiler vectorizes it and skips the libgcc NaN path.
inline void axpy_column(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight, Eigen::Index j,
                        Eigen::Index c) {
  const double re = weight * batch(j, c).real();
  const double im = -weight * batch(j, c).imag();
  const double* __restrict src = reinterpret_cast<const double*>(batch.col(c).data());
  double* __restrict dst = reinterpret_cast<double*>(acc.col(j).data());
  const Eigen::Index n = acc.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = src[2 * i], b = src[2 * i + 1];
    dst[2 * i] += a * re - b * im;
    dst[2 * i + 1] += a * im + b * re;
  }
}

void accumulate_outer_serial(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight) {
  const Eigen::Index dim = acc.rows();
  if (acc.cols() != dim || batch.rows() != dim) {
    throw DimensionMismatch("accumulate_outer: accumulator and batch dimensions differ");
  }
  for (Eigen::Index c = 0; c < batch.cols(); ++c) {
    for (Eigen::Index j = 0; j < dim; ++j) axpy_column(acc, batch, weight, j, c);
  }
}

void accumulate_outer_omp(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight) {
  const Eigen::Index dim = acc.rows();
  if (acc.cols() != dim || batch.rows() != dim) {
    throw DimensionMismatch("accumulate_outer: accumulator and batch dimensions differ");
  }
  const Eigen::Index columns = batch.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index c = 0; c < columns; ++c) axpy_column(acc, batch, weight, j, c);
  }
}

}  // namespace kernels
}  // namespace qsdet
