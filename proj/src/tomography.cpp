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

#include "qsdet/tomography.hpp"

#include <cmath>
#include <limits>

#include "qsdet/errors.hpp"

namespace qsdet {
namespace {

// Vose alias table over a discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& p) : prob_(p.size()), alias_(p.size()) {
    const std::size_t n = p.size();
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    double total = 0.0;
    for (double x : p) total += x;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = p[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::size_t i : large) {
      prob_[i] = 1.0;
      alias_[i] = i;
    }
    for (std::size_t i : small) {
      prob_[i] = 1.0;
      alias_[i] = i;
    }
  }

  std::size_t sample(SeededRng& rng) const {
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    auto column = static_cast<std::size_t>(u);
    if (column >= prob_.size()) column = prob_.size() - 1;
    const double frac = u - static_cast<double>(column);
    return frac < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace

DiagonalEstimate exact_diagonal(const StateVector& psi) {
  DiagonalEstimate est;
  est.dim = psi.dim();
  est.probs = born_distribution(psi);
  est.mode = EstimateMode::kExact;
  return est;
}

DiagonalEstimate sampled_diagonal(const StateVector& psi, std::uint64_t t, SeededRng& rng) {
  if (t == 0) throw InvalidArgument("invalid-sample-count: t must be >= 1");
  const AliasTable table(born_distribution(psi));
  DiagonalEstimate est;
  est.dim = psi.dim();
  est.mode = EstimateMode::kSampled;
  est.samples_used = t;
  est.counts.assign(psi.dim(), 0);
  for (std::uint64_t s = 0; s < t; ++s) ++est.counts[table.sample(rng)];
  est.probs.resize(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    est.probs[i] = static_cast<double>(est.counts[i]) / static_cast<double>(t);
  }
  return est;
}

std::uint64_t tomography_samples_required(std::uint64_t lambda, std::uint64_t d, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  if (d < 2) throw InvalidArgument("dimension must be >= 2");
  if (lambda < 1) throw InvalidArgument("lambda must be >= 1");
  const long double exact = 36.0L * static_cast<long double>(lambda) * static_cast<long double>(d) *
                            static_cast<long double>(d) * static_cast<long double>(d) /
                            static_cast<long double>(delta);
  if (exact > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    throw BudgetExceeded("tomography sample count overflows 64 bits");
  }
  // A quotient that is an integer up to rounding of delta is not bumped up.
  const long double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-12L * exact) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(exact));
}

double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("L-infinity distance of vectors of different sizes");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace qsdet
