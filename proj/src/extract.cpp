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

#include "qsdet/extract.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qsdet/errors.hpp"

namespace qsdet {

RoundParams::RoundParams(std::size_t d) : d_(d) {
  if (!is_valid_dimension(d)) {
    throw InvalidArgument("invalid round dimension " + std::to_string(d) + ": " + dimension_rule());
  }
  const auto a = static_cast<std::size_t>(std::countr_zero(d)) / 6;
  k_ = std::size_t{1} << (5 * a);
  r_ = std::size_t{1} << (4 * a);
  ell_ = std::size_t{1} << a;
}

bool RoundParams::is_valid_dimension(std::size_t d) {
  if (d < 2 || !std::has_single_bit(d)) return false;
  const auto bits = std::countr_zero(d);
  return bits % 6 == 0 && bits <= 60;
}

const char* RoundParams::dimension_rule() {
  return "d must equal 2^(6a) for an integer a >= 1 (64, 4096, 262144, ...)";
}

std::vector<double> block_sums(const DiagonalEstimate& diag, const RoundParams& params) {
  if (diag.dim != params.d() || diag.probs.size() != params.d()) {
    throw DimensionMismatch("diagonal dimension does not match round parameters");
  }
  std::vector<double> q(params.ell(), 0.0);
  for (std::size_t i = 0; i < params.ell(); ++i) {
    const std::size_t base = i * params.r();
    double s = 0.0;
    for (std::size_t j = 0; j < params.r(); ++j) s += diag.probs[base + j];
    q[i] = s;
  }
  return q;
}

BitString round_bits(const DiagonalEstimate& diag, const RoundParams& params) {
  const auto q = block_sums(diag, params);
  BitString out(params.ell());
  for (std::size_t i = 0; i < q.size(); ++i) out.set(i, q[i] > params.threshold());
  return out;
}

bool good_set_member(const DiagonalEstimate& diag, const RoundParams& params) {
  const auto q = block_sums(diag, params);
  return std::all_of(q.begin(), q.end(), [&](double qi) {
    return std::abs(qi - params.threshold()) > params.margin();
  });
}

BitString extract(const StateVector& psi, const RoundParams& params, const ExtractMode& mode,
                  SeededRng& rng) {
  if (psi.dim() != params.d()) throw DimensionMismatch("state dimension does not match round parameters");
  if (const auto* sampled = std::get_if<SampledMode>(&mode)) {
    return round_bits(sampled_diagonal(psi, sampled->t, rng), params);
  }
  return round_bits(exact_diagonal(psi), params);
}

double ks_distance_normal(std::vector<double> sample, double mean, double variance) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double sd = std::sqrt(variance);
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-(sample[i] - mean) / (sd * std::sqrt(2.0)));
    worst = std::max({worst, std::abs(cdf - static_cast<double>(i) / n),
                      std::abs(static_cast<double>(i + 1) / n - cdf)});
  }
  return worst;
}

GaussianBlockReport gaussian_block_check(std::size_t d, std::size_t n_states, const SeededRng& rng,
                                         Exec exec) {
  const RoundParams params(d);
  const std::size_t ell = params.ell();
  std::vector<double> q_all(n_states * ell);
  std::vector<std::uint8_t> good(n_states);
  for_each_index(n_states, exec, [&](std::size_t s) {
    SeededRng local = rng.split(s);
    const auto diag = exact_diagonal(haar_sample(d, local));
    const auto q = block_sums(diag, params);
    std::copy(q.begin(), q.end(), q_all.begin() + static_cast<std::ptrdiff_t>(s * ell));
    good[s] = good_set_member(diag, params) ? 1 : 0;
  });

  GaussianBlockReport rep;
  rep.d = d;
  rep.n_states = n_states;
  rep.samples = q_all.size();
  rep.expected_mean = params.threshold();
  rep.expected_variance = static_cast<double>(params.r()) / (static_cast<double>(d) * static_cast<double>(d));
  rep.bit_frequencies.assign(ell, 0.0);
  if (n_states == 0) return rep;

  double sum = 0.0;
  for (double q : q_all) sum += q;
  rep.mean = sum / static_cast<double>(q_all.size());
  double ss = 0.0;
  for (double q : q_all) ss += (q - rep.mean) * (q - rep.mean);
  rep.variance = q_all.size() > 1 ? ss / static_cast<double>(q_all.size() - 1) : 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t i = 0; i < ell; ++i) {
      if (q_all[s * ell + i] > params.threshold()) rep.bit_frequencies[i] += 1.0;
    }
  }
  for (auto& f : rep.bit_frequencies) f /= static_cast<double>(n_states);
  std::size_t good_count = 0;
  for (auto g : good) good_count += g;
  rep.good_fraction = static_cast<double>(good_count) / static_cast<double>(n_states);
  rep.ks_distance = ks_distance_normal(q_all, rep.expected_mean, rep.expected_variance);
  return rep;
}

}  // namespace qsdet
