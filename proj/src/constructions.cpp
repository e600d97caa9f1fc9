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

#include "qsdet/constructions.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qsdet/errors.hpp"

namespace qsdet {

Con1Params Con1Params::make(std::size_t lambda, GeneratorHandle inner) {
  if (inner.kind() != GeneratorKind::kBotPrg) throw InvalidArgument("con1 needs a bot-prg inner generator");
  if (inner.input_length() != lambda) throw InvalidArgument("inner bot-prg input length must equal lambda");
  const std::size_t m = inner.output_length();
  if (m <= lambda) throw InvalidArgument("expansion requires m > lambda");
  return Con1Params{lambda, m, std::move(inner)};
}

BotValue con1_qsamp(const Con1Params& params, SeededRng& rng) {
  std::vector<BotValue> ys(params.lambda);
  for (std::size_t i = 0; i < params.lambda; ++i) {
    const BitString k = rng.bits(params.lambda);
    for (auto& y : ys) y = params.inner.eval(k, rng);
    if (!vote(ys).is_bot()) return k;
  }
  return BotValue::bot();
}

BotValue con1_eval(const Con1Params& params, const BotValue& key, SeededRng& rng) {
  if (key.is_bot()) return BitString::zeros(params.m);
  std::vector<BotValue> ys(params.lambda);
  for (auto& y : ys) y = params.inner.eval(key.value(), rng);
  return vote_non_bot(ys);
}

GeneratorHandle con1_generator(const Con1Params& params) {
  return GeneratorHandle::prg_qs(
      "con1(" + params.inner.name() + ")", params.lambda, params.m,
      [params](SeededRng& rng) { return con1_qsamp(params, rng); },
      [params](const BitString& key, SeededRng& rng) { return con1_eval(params, key, rng); });
}

Con2Params Con2Params::make(std::size_t lambda, GeneratorHandle inner, ExtractMode mode) {
  if (inner.kind() != GeneratorKind::kSprsQs) throw InvalidArgument("con2 needs an sprs-qs inner generator");
  if (lambda < 2) throw InvalidArgument("con2 needs lambda >= 2");
  RoundParams round(inner.state_dim());
  const double c = std::log(static_cast<double>(round.d())) / std::log(static_cast<double>(lambda));
  Con2Params p{lambda, round, std::move(inner), mode, c, round.ell(), {}};
  if (!(c > 24.0)) p.relaxations.push_back("c = log d / log lambda = " + std::to_string(c) + " is not > 24");
  if (p.m <= lambda) {
    p.relaxations.push_back("output length m = ell = " + std::to_string(p.m) + " is not > lambda = " +
                            std::to_string(lambda));
  }
  return p;
}

BotValue con2_qsamp(const Con2Params& params, SeededRng& rng) {
  for (std::size_t i = 0; i < params.lambda; ++i) {
    const BotValue s = params.inner.sample_key(rng);
    if (s.is_bot()) continue;
    const StateVector rho = params.inner.eval_state(s.value(), rng);
    const bool good = std::holds_alternative<SampledMode>(params.mode)
                          ? good_set_member(sampled_diagonal(rho, std::get<SampledMode>(params.mode).t, rng),
                                            params.round)
                          : good_set_member(exact_diagonal(rho), params.round);
    if (good) return s;
  }
  return BotValue::bot();
}

BotValue con2_eval(const Con2Params& params, const BotValue& key, SeededRng& rng) {
  if (key.is_bot()) return BotValue::bot();
  const StateVector rho = params.inner.eval_state(key.value(), rng);
  return extract(rho, params.round, params.mode, rng);
}

Con3Params Con3Params::make(std::size_t lambda, std::size_t N, GeneratorHandle inner) {
  if (inner.kind() != GeneratorKind::kPrgQs) throw InvalidArgument("con3 needs a prg-qs inner generator");
  if (N < 2 || !std::has_single_bit(N)) throw InvalidArgument("N must be a power of two >= 2");
  const auto slice_bits = static_cast<std::size_t>(std::countr_zero(N));
  if (inner.output_length() < N * slice_bits) {
    throw InvalidArgument("output-too-short: inner output " + std::to_string(inner.output_length()) +
                          " bits < N * ceil(log N) = " + std::to_string(N * slice_bits));
  }
  Con3Params p{lambda, N, slice_bits, std::move(inner), {}};
  const double c = std::log(static_cast<double>(N)) / std::log(static_cast<double>(std::max<std::size_t>(lambda, 2)));
  if (!(c > 12.0)) p.relaxations.push_back("c = log N / log lambda = " + std::to_string(c) + " is not > 12");
  if (static_cast<double>(p.inner.output_length()) <= std::pow(static_cast<double>(lambda), 2.0 * c + 1.0)) {
    p.relaxations.push_back("inner output length is not > lambda^(2c+1)");
  }
  return p;
}

std::uint64_t phase_function(const BitString& z, std::size_t i, std::size_t slice_bits) {
  return z.slice(i * slice_bits, (i + 1) * slice_bits).to_uint();
}

StateVector phase_state(std::size_t N, const BitString& z) {
  if (N < 2 || !std::has_single_bit(N)) throw InvalidArgument("N must be a power of two >= 2");
  const auto slice_bits = static_cast<std::size_t>(std::countr_zero(N));
  if (z.size() < N * slice_bits) throw InvalidArgument("output-too-short: phase string has too few bits");
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<Complex> amps(N);
  for (std::size_t x = 0; x < N; ++x) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(phase_function(z, x, slice_bits)) / static_cast<double>(N);
    amps[x] = std::polar(scale, angle);
  }
  return StateVector(std::move(amps));
}

StateVector con3_stategen(const Con3Params& params, const BotValue& key, SeededRng& rng) {
  const BotValue y = key.is_bot() ? BotValue::bot() : params.inner.eval(key.value(), rng);
  return phase_state(params.N, y.is_bot() ? BitString::zeros(params.N * params.slice_bits) : y.value());
}

GeneratorHandle con3_generator(const Con3Params& params) {
  return GeneratorHandle::sprs_qs(
      "con3(" + params.inner.name() + ")", params.inner.input_length(), params.N,
      [params](SeededRng& rng) { return params.inner.sample_key(rng); },
      [params](const BitString& key, SeededRng& rng) { return con3_stategen(params, key, rng); });
}

GeneratorHandle prfqs_from_prgqs(const GeneratorHandle& inner, std::size_t domain_size, std::size_t word_bits) {
  if (inner.kind() != GeneratorKind::kPrgQs) throw InvalidArgument("prfqs_from_prgqs needs a prg-qs inner generator");
  if (domain_size < 1 || word_bits < 1) throw InvalidArgument("domain size and word length must be positive");
  if (domain_size * word_bits > inner.output_length()) {
    throw InvalidArgument("domain too large: D * word = " + std::to_string(domain_size * word_bits) +
                          " > inner output " + std::to_string(inner.output_length()));
  }
  const auto input_bits = static_cast<std::size_t>(std::bit_width(std::max<std::size_t>(domain_size - 1, 1)));
  return GeneratorHandle::prf_qs(
      "prf-table(" + inner.name() + ")", inner.input_length(), input_bits, word_bits,
      [inner](SeededRng& rng) { return inner.sample_key(rng); },
      [inner, domain_size, word_bits](const BitString& key, const BitString& input, SeededRng& rng) -> BotValue {
        const std::uint64_t x = input.to_uint();
        if (x >= domain_size) throw InvalidArgument("PRF input outside the domain");
        const BotValue table = inner.eval(key, rng);
        if (table.is_bot()) return BotValue::bot();
        return table.value().slice(x * word_bits, (x + 1) * word_bits);
      });
}

GeneratorHandle keyed_haar_sprs(std::uint64_t world_seed, std::size_t key_bits, std::size_t dim) {
  return GeneratorHandle::sprs_qs(
      "keyed-haar/d=" + std::to_string(dim), key_bits, dim,
      [key_bits](SeededRng& rng) -> BotValue { return rng.bits(key_bits); },
      [world_seed, dim](const BitString& key, SeededRng&) {
        SeededRng keyed(mix64(world_seed), hash_combine(0x4861617200000000ull, key.to_uint()));
        return haar_sample(dim, keyed);
      });
}

}  // namespace qsdet
