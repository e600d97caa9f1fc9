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

#include "qsdet/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "qsdet/constructions.hpp"
#include "qsdet/errors.hpp"
#include "qsdet/kernels.hpp"
#include "qsdet/oracles.hpp"

namespace qsdet {
namespace {

constexpr double kZ95 = 1.959963984540054;

// Substream roles within one trial.
constexpr std::uint64_t kChallengeStream = 0;
constexpr std::uint64_t kGeneratorStream = 1;
constexpr std::uint64_t kAdversaryStream = 2;
constexpr std::uint64_t kVerifierStream = 3;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ExperimentReport finish_report(std::string name, nlohmann::json parameters, const SeededRng& rng,
                               const std::vector<std::uint8_t>& wins, Clock::time_point start) {
  ExperimentReport rep;
  rep.name = std::move(name);
  parameters["stream"] = rng.stream();
  parameters["rng"] = std::string(SeededRng::kAlgorithmId);
  rep.parameters = std::move(parameters);
  rep.seed = rng.seed();
  rep.trials = wins.size();
  for (auto w : wins) rep.successes += w;
  const auto est = advantage_ci(rep.successes, rep.trials);
  rep.advantage = est.estimate;
  rep.ci95 = {est.lo, est.hi};
  rep.wallclock_ms = elapsed_ms(start);
  return rep;
}

CallBudget budget_for(const AdversaryHandle& adv) {
  return CallBudget(adv.can_query_generator() ? adv.work_budget : 0);
}

}  // namespace

AdvantageEstimate advantage_ci(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw InvalidArgument("advantage_ci needs at least one trial");
  if (successes > trials) throw InvalidArgument("successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p - 0.5, std::max(center - half, 0.0) - 0.5, std::min(center + half, 1.0) - 0.5};
}

nlohmann::json ExperimentReport::to_json() const {
  return {{"name", name},   {"parameters", parameters}, {"seed", seed},
          {"trials", trials}, {"successes", successes}, {"advantage", advantage},
          {"ci95", {ci95[0], ci95[1]}}, {"wallclock_ms", wallclock_ms}};
}

ExperimentReport merge_reports(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.name != b.name) throw InvalidArgument("cannot merge reports of different experiments");
  ExperimentReport out = a;
  out.trials = a.trials + b.trials;
  out.successes = a.successes + b.successes;
  const auto est = advantage_ci(out.successes, out.trials);
  out.advantage = est.estimate;
  out.ci95 = {est.lo, est.hi};
  out.wallclock_ms = a.wallclock_ms + b.wallclock_ms;
  return out;
}

bool AdversaryHandle::can_query_generator() const {
  return std::find(oracle_access.begin(), oracle_access.end(), "gen") != oracle_access.end();
}

AdversaryHandle coin_flip_adversary() {
  AdversaryHandle a;
  a.strategy_id = "coin-flip";
  a.distinguish = [](std::span<const BotValue>, const GeneratorHandle&, CallBudget&, SeededRng& rng) {
    return rng.coin() ? 1 : 0;
  };
  a.invert = [](std::span<const StateVector>, const GeneratorHandle& gen, CallBudget&, SeededRng& rng) {
    return rng.bits(gen.input_length());
  };
  return a;
}

AdversaryHandle constant_adversary(int guess) {
  AdversaryHandle a;
  a.strategy_id = "constant-" + std::to_string(guess);
  a.distinguish = [guess](std::span<const BotValue>, const GeneratorHandle&, CallBudget&, SeededRng&) {
    return guess;
  };
  return a;
}

AdversaryHandle padding_check_adversary(std::size_t prefix_bits) {
  AdversaryHandle a;
  a.strategy_id = "padding-check";
  a.distinguish = [prefix_bits](std::span<const BotValue> samples, const GeneratorHandle&, CallBudget&,
                                SeededRng&) {
    if (samples.empty() || samples[0].is_bot()) return 1;
    const BitString& y = samples[0].value();
    return y.slice(prefix_bits, y.size()).all_zero() ? 0 : 1;
  };
  return a;
}

AdversaryHandle bot_count_adversary() {
  AdversaryHandle a;
  a.strategy_id = "bot-count";
  a.distinguish = [](std::span<const BotValue> samples, const GeneratorHandle&, CallBudget&, SeededRng&) {
    const auto bots = std::count_if(samples.begin(), samples.end(), [](const BotValue& v) { return v.is_bot(); });
    return static_cast<int>(bots % 2);
  };
  return a;
}

AdversaryHandle bruteforce_prg_adversary_handle(std::size_t key_bits, std::size_t votes) {
  if (key_bits > kMaxBruteForcePrgKeyBits) throw BudgetExceeded("brute-force PRG key space above 2^20");
  AdversaryHandle a;
  a.strategy_id = "bruteforce-prg";
  a.work_budget = (std::uint64_t{1} << key_bits) * votes;
  a.oracle_access = {"gen"};
  a.distinguish = [votes](std::span<const BotValue> samples, const GeneratorHandle& gen, CallBudget& budget,
                          SeededRng& rng) {
    const auto it = std::find_if(samples.begin(), samples.end(), [](const BotValue& v) { return !v.is_bot(); });
    if (it == samples.end()) return rng.coin() ? 1 : 0;
    return bruteforce_prg_adversary(gen, it->value(), rng.split(0), votes, &budget);
  };
  return a;
}

AdversaryHandle bruteforce_owsg_adversary_handle(std::size_t key_bits) {
  if (key_bits > kMaxBruteForceOwsgKeyBits) throw BudgetExceeded("brute-force OWSG key space above 2^16");
  AdversaryHandle a;
  a.strategy_id = "bruteforce-owsg";
  a.work_budget = std::uint64_t{1} << key_bits;
  a.oracle_access = {"gen"};
  a.invert = [](std::span<const StateVector> copies, const GeneratorHandle& gen, CallBudget& budget,
                SeededRng& rng) { return bruteforce_owsg_adversary(gen, copies, rng.split(0), &budget); };
  return a;
}

ExperimentReport exp_prg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::uint64_t trials,
                         const SeededRng& rng, Exec exec) {
  if (!adversary.distinguish) throw InvalidArgument("exp_prg needs a distinguishing adversary");
  const auto start = Clock::now();
  const std::size_t lambda = gen.input_length();
  const std::size_t s = gen.output_length();
  std::vector<std::uint8_t> wins(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const SeededRng trial = rng.split(i);
    SeededRng challenge = trial.split(kChallengeStream);
    const BitString k = challenge.bits(lambda);
    const int b = challenge.coin() ? 1 : 0;
    const BitString uniform = challenge.bits(s);
    SeededRng gen_rng = trial.split(kGeneratorStream);
    const BotValue sample = b == 0 ? gen.eval(k, gen_rng) : BotValue(uniform);
    CallBudget budget = budget_for(adversary);
    SeededRng adv_rng = trial.split(kAdversaryStream);
    const int guess = adversary.distinguish(std::span<const BotValue>(&sample, 1), gen, budget, adv_rng);
    wins[i] = guess == b ? 1 : 0;
  });
  return finish_report("prg",
                       {{"generator", gen.name()}, {"adversary", adversary.strategy_id},
                        {"lambda", lambda}, {"s", s}},
                       rng, wins, start);
}

ExperimentReport exp_botprg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::size_t q,
                            std::uint64_t trials, const SeededRng& rng, Exec exec) {
  if (q < 1) throw InvalidArgument("exp_botprg needs q >= 1");
  if (!adversary.distinguish) throw InvalidArgument("exp_botprg needs a distinguishing adversary");
  const auto start = Clock::now();
  const std::size_t lambda = gen.input_length();
  const std::size_t s = gen.output_length();
  std::vector<std::uint8_t> wins(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const SeededRng trial = rng.split(i);
    SeededRng challenge = trial.split(kChallengeStream);
    const BitString k = challenge.bits(lambda);
    const int b = challenge.coin() ? 1 : 0;
    const BitString y = challenge.bits(s);
    SeededRng gen_rng = trial.split(kGeneratorStream);
    std::vector<BotValue> samples(q);
    for (auto& sample : samples) {
      const BotValue v = gen.eval(k, gen_rng);
      sample = b == 0 ? v : is_bot(v, y);
    }
    CallBudget budget = budget_for(adversary);
    SeededRng adv_rng = trial.split(kAdversaryStream);
    wins[i] = adversary.distinguish(samples, gen, budget, adv_rng) == b ? 1 : 0;
  });
  return finish_report("bot-prg",
                       {{"generator", gen.name()}, {"adversary", adversary.strategy_id},
                        {"lambda", lambda}, {"s", s}, {"q", q}},
                       rng, wins, start);
}

ExperimentReport exp_owsg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::size_t t,
                          std::uint64_t trials, const SeededRng& rng, Exec exec) {
  if (t < 1) throw InvalidArgument("exp_owsg needs t >= 1");
  if (!gen.is_state_valued()) throw InvalidArgument("exp_owsg needs a state generator");
  if (!adversary.invert) throw InvalidArgument("exp_owsg needs an inverting adversary");
  const auto start = Clock::now();
  const std::size_t lambda = gen.input_length();
  std::vector<std::uint8_t> wins(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const SeededRng trial = rng.split(i);
    SeededRng challenge = trial.split(kChallengeStream);
    const BitString k = challenge.bits(lambda);
    SeededRng gen_rng = trial.split(kGeneratorStream);
    std::vector<StateVector> copies;
    copies.reserve(t);
    for (std::size_t c = 0; c < t; ++c) copies.push_back(gen.eval_state(k, gen_rng));
    CallBudget budget = budget_for(adversary);
    SeededRng adv_rng = trial.split(kAdversaryStream);
    const BitString guess = adversary.invert(copies, gen, budget, adv_rng);
    SeededRng verifier = trial.split(kVerifierStream);
    const StateVector phi = gen.eval_state(guess, verifier);
    const StateVector last = gen.eval_state(k, verifier);
    wins[i] = verifier.uniform() < fidelity(phi, last) ? 1 : 0;
  });
  return finish_report("owsg",
                       {{"generator", gen.name()}, {"adversary", adversary.strategy_id},
                        {"lambda", lambda}, {"t", t}},
                       rng, wins, start);
}

MomentDistance moment_distance(const GeneratorHandle& gen, std::size_t t, std::uint64_t n_keys,
                               MomentMode mode, const SeededRng& rng, Exec exec) {
  if (!gen.is_state_valued()) throw InvalidArgument("moment_distance needs a state generator");
  const std::size_t dim = gen.state_dim();
  const std::size_t total_dim = checked_power(dim, t, kDenseOperatorBudget);
  const Eigen::MatrixXcd haar = symmetric_moment(dim, t).matrix();
  const auto D = static_cast<Eigen::Index>(total_dim);

  MomentDistance result;
  result.mode = mode;
  std::uint64_t count = 0;
  if (mode == MomentMode::kExactEnum) {
    if (gen.input_length() > kMaxExactEnumKeyBits) {
      throw BudgetExceeded("exact enumeration limited to key spaces of 2^16");
    }
    count = std::uint64_t{1} << gen.input_length();
  } else {
    if (n_keys < 10) throw InvalidArgument("Monte-Carlo moment distance needs at least 10 keys");
    count = n_keys;
  }

  // Keys are processed in contiguous groups; Monte-Carlo keeps one partial
  // sum per group for the jackknife.
  const std::size_t groups = mode == MomentMode::kMonteCarlo ? 10 : 1;
  std::vector<Eigen::MatrixXcd> partial(groups, Eigen::MatrixXcd::Zero(D, D));
  std::vector<std::uint64_t> group_keys(groups, 0);
  constexpr std::uint64_t kBatch = 512;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::uint64_t begin = count * g / groups;
    const std::uint64_t end = count * (g + 1) / groups;
    for (std::uint64_t batch_begin = begin; batch_begin < end; batch_begin += kBatch) {
      const std::uint64_t batch_end = std::min(end, batch_begin + kBatch);
      Eigen::MatrixXcd columns(D, static_cast<Eigen::Index>(batch_end - batch_begin));
      std::vector<std::uint8_t> used(batch_end - batch_begin, 1);
      for_each_index(batch_end - batch_begin, exec, [&](std::size_t j) {
        const std::uint64_t index = batch_begin + j;
        SeededRng local = rng.split(index);
        BitString key;
        if (mode == MomentMode::kExactEnum) {
          key = BitString::from_uint(index, gen.input_length());
        } else {
          const BotValue sampled = gen.sample_key(local);
          if (sampled.is_bot()) {
            used[j] = 0;
            columns.col(static_cast<Eigen::Index>(j)).setZero();
            return;
          }
          key = sampled.value();
        }
        const auto v = tensor_power(gen.eval_state(key, local), t);
        columns.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXcd>(v.data(), D);
      });
      kernels::accumulate_outer(partial[g], columns, 1.0, exec);
      for (auto u : used) group_keys[g] += u;
    }
  }

  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(D, D);
  std::uint64_t used_total = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    sum += partial[g];
    used_total += group_keys[g];
  }
  if (used_total == 0) throw InvalidArgument("every sampled key was bot");
  result.keys_used = used_total;
  result.bot_keys = count - used_total;
  const auto distance_of = [&](const Eigen::MatrixXcd& s, std::uint64_t n) {
    return std::clamp(half_trace_norm(s / static_cast<double>(n) - haar), 0.0, 1.0);
  };
  result.distance = distance_of(sum, used_total);

  if (mode == MomentMode::kMonteCarlo) {
    std::vector<double> leave_one_out;
    for (std::size_t g = 0; g < groups; ++g) {
      if (used_total - group_keys[g] == 0) continue;
      leave_one_out.push_back(distance_of(sum - partial[g], used_total - group_keys[g]));
    }
    const double m = static_cast<double>(leave_one_out.size());
    double mean = 0.0;
    for (double x : leave_one_out) mean += x;
    mean /= m;
    double ss = 0.0;
    for (double x : leave_one_out) ss += (x - mean) * (x - mean);
    result.ci_half_width = kZ95 * std::sqrt((m - 1.0) / m * ss);
  }
  return result;
}

double phase_moment_distance_exact(std::size_t N, std::size_t t) {
  if (N < 2) throw InvalidArgument("phase moment needs N >= 2");
  if (t < 1 || t >= N) throw InvalidArgument("phase moment block structure needs 1 <= t < N");
  const double haar_weight = 1.0 / binomial(N + t - 1, t);
  const double phase_scale = std::pow(static_cast<double>(N), -static_cast<double>(t));
  double t_factorial = 1.0;
  for (std::size_t i = 2; i <= t; ++i) t_factorial *= static_cast<double>(i);

  // Enumerate nondecreasing index tuples (multisets); |orbit| = t! / prod m_z!.
  double total = 0.0;
  std::vector<std::size_t> tuple(t, 0);
  while (true) {
    double orbit = t_factorial;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= t; ++i) {
      if (i < t && tuple[i] == tuple[i - 1]) {
        ++run;
      } else {
        for (std::size_t r = 2; r <= run; ++r) orbit /= static_cast<double>(r);
        run = 1;
      }
    }
    total += std::abs(orbit * phase_scale - haar_weight);
    // Next nondecreasing tuple.
    std::size_t pos = t;
    while (pos > 0 && tuple[pos - 1] == N - 1) --pos;
    if (pos == 0) break;
    const std::size_t v = tuple[pos - 1] + 1;
    for (std::size_t i = pos - 1; i < t; ++i) tuple[i] = v;
  }
  return 0.5 * total;
}

// -- toy generators ---------------------------------------------------------

GeneratorHandle toy_expanding_prg(std::uint64_t seed, std::size_t lambda, std::size_t s) {
  if (lambda > 64) throw InvalidArgument("toy PRG keys are limited to 64 bits");
  return GeneratorHandle::prg("toy-prg/" + std::to_string(lambda) + "->" + std::to_string(s), lambda, s,
                              [seed, s](const BitString& key, SeededRng&) -> BotValue {
                                return derive_bits(seed, 0x70, static_cast<std::uint32_t>(key.size()),
                                                   key.to_uint(), s);
                              });
}

GeneratorHandle zero_padding_prg(std::size_t lambda, std::size_t s) {
  if (s < lambda) throw InvalidArgument("padding PRG needs s >= lambda");
  return GeneratorHandle::prg("zero-padding/" + std::to_string(lambda) + "->" + std::to_string(s), lambda, s,
                              [lambda, s](const BitString& key, SeededRng&) -> BotValue {
                                return key.concat(BitString::zeros(s - lambda));
                              });
}

GeneratorHandle keyed_haar_owsg(std::uint64_t seed, std::size_t key_bits, std::size_t dim) {
  return GeneratorHandle::owsg("keyed-haar-owsg/d=" + std::to_string(dim), key_bits, dim,
                               [seed, dim](const BitString& key, SeededRng&) {
                                 SeededRng keyed(mix64(seed ^ 0x6F777367ull), key.to_uint());
                                 return haar_sample(dim, keyed);
                               });
}

GeneratorHandle parity_owsg(std::size_t key_bits) {
  if (key_bits < 1) throw InvalidArgument("parity OWSG needs at least one key bit");
  return GeneratorHandle::owsg("parity-owsg", key_bits, 2, [](const BitString& key, SeededRng&) {
    return StateVector::basis(2, key[key.size() - 1] ? 1 : 0);
  });
}

GeneratorHandle random_function_phase_sprs(std::size_t N) {
  if (N < 2 || !std::has_single_bit(N)) throw InvalidArgument("N must be a power of two >= 2");
  const std::size_t key_bits = N * static_cast<std::size_t>(std::countr_zero(N));
  return GeneratorHandle::sprs_qs(
      "random-phase/N=" + std::to_string(N), key_bits, N,
      [key_bits](SeededRng& rng) -> BotValue { return rng.bits(key_bits); },
      [N](const BitString& key, SeededRng&) { return phase_state(N, key); });
}

}  // namespace qsdet
