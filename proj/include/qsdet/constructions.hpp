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
#include <string>
#include <vector>

#include "qsdet/extract.hpp"
#include "qsdet/primitives.hpp"

namespace qsdet {

// -- PRG^qs from a bot-PRG ----------------------------------------------------

struct Con1Params {
  std::size_t lambda;
  std::size_t m;
  GeneratorHandle inner;  // bot-prg, lambda -> m bits

  /// Checks inner kind and lengths and m > lambda.
  static Con1Params make(std::size_t lambda, GeneratorHandle inner);
};

/// Up to lambda attempts: sample k_i, evaluate inner lambda times, return
/// k_i as soon as the vote over those evaluations is not bot. Returns bot
/// when every attempt fails.
BotValue con1_qsamp(const Con1Params& params, SeededRng& rng);
/// 0^m for the bot key; else lambda inner evaluations, bot if all are bot,
/// otherwise the first most common non-bot value.
BotValue con1_eval(const Con1Params& params, const BotValue& key, SeededRng& rng);
/// The construction as a prg-qs handle over lambda-bit keys.
GeneratorHandle con1_generator(const Con1Params& params);

// -- PRG^qs from a short PRS^qs -----------------------------------------------

struct Con2Params {
  std::size_t lambda;
  RoundParams round;
  GeneratorHandle inner;  // sprs-qs with state dimension round.d()
  ExtractMode mode;       // defaults to exact diagonal estimation
  /// log(d)/log(lambda), the exponent with d = lambda^c.
  double c;
  /// Output length of Extract, ell = d^(1/6).
  std::size_t m;
  /// Parameter couplings that hold asymptotically but are relaxed at this
  /// size (c > 24, m > lambda), kept for reports.
  std::vector<std::string> relaxations;

  static Con2Params make(std::size_t lambda, GeneratorHandle inner, ExtractMode mode = ExactMode{});
};

/// Up to lambda attempts: s_i from inner's sampler, regenerate the state,
/// estimate its diagonal and return s_i if it lies in the good set.
BotValue con2_qsamp(const Con2Params& params, SeededRng& rng);
/// bot for the bot key; else regenerate the state and run Extract.
BotValue con2_eval(const Con2Params& params, const BotValue& key, SeededRng& rng);

// -- short PRS^qs from a PRG^qs -----------------------------------------------

struct Con3Params {
  std::size_t lambda;
  std::size_t N;           // power of two
  std::size_t slice_bits;  // ceil(log2 N)
  GeneratorHandle inner;   // prg-qs with output >= N * slice_bits
  std::vector<std::string> relaxations;

  static Con3Params make(std::size_t lambda, std::size_t N, GeneratorHandle inner);
};

/// f_z(i) = z[i*t : (i+1)*t] read most significant bit first, t = ceil(log2 N).
std::uint64_t phase_function(const BitString& z, std::size_t i, std::size_t slice_bits);
/// (1/sqrt N) sum_x omega_N^{f_z(x)} |x>. Throws when z is shorter than N*t.
StateVector phase_state(std::size_t N, const BitString& z);

/// y = inner(key) and the phase state of f_y. A bot inner output is read as
/// the all-zero string (uniform superposition).
StateVector con3_stategen(const Con3Params& params, const BotValue& key, SeededRng& rng);
GeneratorHandle con3_generator(const Con3Params& params);

/// Table of a polynomial-domain PRF^qs read off one PRG^qs output: input x
/// in [0, D) maps to word x of inner(key).
GeneratorHandle prfqs_from_prgqs(const GeneratorHandle& inner, std::size_t domain_size,
                                 std::size_t word_bits);

// -- toy inner generators ---------------------------------------------------

/// Deterministic-by-key "Haar-like" short PRS^qs: key k maps to the Haar
/// sample drawn from a stream derived from (world_seed, k). Uniform keys.
GeneratorHandle keyed_haar_sprs(std::uint64_t world_seed, std::size_t key_bits, std::size_t dim);

}  // namespace qsdet
