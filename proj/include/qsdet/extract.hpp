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

#include <cstdint>
#include <variant>
#include <vector>

#include "qsdet/bits.hpp"
#include "qsdet/parallel.hpp"
#include "qsdet/tomography.hpp"

namespace qsdet {

/// Block geometry for rounding a d-dimensional diagonal. d must be 2^(6a),
/// a >= 1, so that k = d^(5/6), r = d^(2/3) and ell = d^(1/6) are integers.
class RoundParams {
 public:
  /// Throws InvalidArgument with the valid-dimension rule when d is not 2^(6a).
  explicit RoundParams(std::size_t d);
  static bool is_valid_dimension(std::size_t d);
  static const char* dimension_rule();

  std::size_t d() const { return d_; }
  std::size_t k() const { return k_; }
  std::size_t r() const { return r_; }
  std::size_t ell() const { return ell_; }
  /// r/d, the rounding threshold (exact in binary floating point).
  double threshold() const { return static_cast<double>(r_) / static_cast<double>(d_); }
  /// 2/d, the good-set margin.
  double margin() const { return 2.0 / static_cast<double>(d_); }

 private:
  std::size_t d_, k_, r_, ell_;
};

/// q_i = sum of the i-th block of r consecutive entries, i < ell.
std::vector<double> block_sums(const DiagonalEstimate& diag, const RoundParams& params);
/// b_i = 1 iff q_i > r/d (strict).
BitString round_bits(const DiagonalEstimate& diag, const RoundParams& params);
/// True iff |q_i - r/d| > 2/d for every block.
bool good_set_member(const DiagonalEstimate& diag, const RoundParams& params);

struct ExactMode {};
struct SampledMode {
  std::uint64_t t;
};
using ExtractMode = std::variant<ExactMode, SampledMode>;

/// Diagonal estimation (exact, or t measurements) followed by rounding.
BitString extract(const StateVector& psi, const RoundParams& params, const ExtractMode& mode,
                  SeededRng& rng);

struct GaussianBlockReport {
  std::size_t d = 0;
  std::size_t n_states = 0;
  std::size_t samples = 0;  // n_states * ell block sums
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double expected_mean = 0.0;      // r/d
  double expected_variance = 0.0;  // r/d^2
  /// Kolmogorov-Smirnov statistic of the block sums against N(r/d, r/d^2).
  double ks_distance = 0.0;
  double good_fraction = 0.0;
  std::vector<double> bit_frequencies;  // per output bit, fraction of ones
};

/// Samples n_states Haar states (state i uses rng.split(i)) and summarizes
/// their block sums.
GaussianBlockReport gaussian_block_check(std::size_t d, std::size_t n_states, const SeededRng& rng,
                                         Exec exec = Exec::kParallel);

/// Kolmogorov-Smirnov distance between a sample and N(mean, variance).
double ks_distance_normal(std::vector<double> sample, double mean, double variance);

}  // namespace qsdet
