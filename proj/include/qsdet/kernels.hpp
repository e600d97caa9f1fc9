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
#include <span>

#include <Eigen/Dense>

#include "qsdet/parallel.hpp"

namespace qsdet::kernels {

using Complex = std::complex<double>;

/// <a|b>. The serial version is a plain left-to-right sum; the parallel
/// version sums fixed 4096-element chunks and combines them in chunk order,
/// so its result does not depend on the thread count.
Complex inner_product_serial(std::span<const Complex> a, std::span<const Complex> b);
Complex inner_product_omp(std::span<const Complex> a, std::span<const Complex> b);

/// acc += weight * sum_c column(c) * column(c)^dagger over the columns of
/// `batch` (dim x count). The parallel version owns one accumulator column
/// per thread iteration; both versions add batch columns in the same order.
void accumulate_outer_serial(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight);
void accumulate_outer_omp(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight);

inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b,
                             Exec exec = Exec::kParallel) {
  return exec == Exec::kSerial ? inner_product_serial(a, b) : inner_product_omp(a, b);
}

inline void accumulate_outer(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& batch, double weight,
                             Exec exec = Exec::kParallel) {
  if (exec == Exec::kSerial) {
    accumulate_outer_serial(acc, batch, weight);
  } else {
    accumulate_outer_omp(acc, batch, weight);
  }
}

}  // namespace qsdet::kernels
