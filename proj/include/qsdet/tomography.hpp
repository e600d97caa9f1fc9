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
#include <vector>

#include "qsdet/qcore.hpp"

namespace qsdet {

enum class EstimateMode { kExact, kSampled };

/// Computational-basis diagonal of a state, either exact Born probabilities
/// or empirical frequencies of `samples_used` measurements.
struct DiagonalEstimate {
  std::size_t dim = 0;
  std::vector<double> probs;
  EstimateMode mode = EstimateMode::kExact;
  std::uint64_t samples_used = 0;
  /// Outcome counts; empty in exact mode. probs[i] == counts[i] / samples_used.
  std::vector<std::uint64_t> counts;
};

DiagonalEstimate exact_diagonal(const StateVector& psi);

/// Frequencies of t computational-basis measurements (alias-table sampling).
/// Throws InvalidArgument("invalid-sample-count") when t == 0.
DiagonalEstimate sampled_diagonal(const StateVector& psi, std::uint64_t t, SeededRng& rng);

/// ceil(36 * lambda * d^3 / delta): the copy count that makes tomography
/// delta-accurate except with negligible probability.
std::uint64_t tomography_samples_required(std::uint64_t lambda, std::uint64_t d, double delta);

/// max_i |a_i - b_i|
double linf_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qsdet
