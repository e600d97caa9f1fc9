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

#include "qsdet/oracles.hpp"

#include <cmath>
#include <string>

#include "qsdet/errors.hpp"

namespace qsdet {
namespace {

constexpr std::uint32_t kDomainO = 1;
constexpr std::uint32_t kDomainP = 2;
constexpr std::uint32_t kDomainQ = 3;
constexpr std::uint64_t kDomainPermutation = 4;

constexpr std::size_t kMaxLazyFlipN = 6;

std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

const char* to_string(WorldKind kind) {
  switch (kind) {
    case WorldKind::kFlip: return "flip";
    case WorldKind::kBot: return "bot";
    case WorldKind::kSampler: return "sampler";
  }
  return "unknown";
}

WorldKind world_kind_from_string(std::string_view name) {
  if (name == "flip") return WorldKind::kFlip;
  if (name == "bot") return WorldKind::kBot;
  if (name == "sampler") return WorldKind::kSampler;
  throw InvalidArgument("unknown world kind '" + std::string(name) + "' (expected flip, bot or sampler)");
}

BotOracleParams BotOracleParams::make(std::size_t n, double c, std::size_t m) {
  if (n < 1) throw InvalidArgument("bot oracle needs n >= 1");
  if (!(c > 0.0)) throw InvalidArgument("bot oracle needs c > 0");
  if (m <= n) throw InvalidArgument("bot oracle output length m(n) must exceed n");
  BotOracleParams p;
  p.n = n;
  p.c = c;
  p.m = m;
  p.mu = std::pow(static_cast<double>(n), -c);
  std::size_t w = 0;
  while (std::ldexp(1.0, -static_cast<int>(w)) > p.mu / 4.0) ++w;
  const double bad_mass = std::ldexp(1.0, -static_cast<int>(w));
  if (bad_mass < p.mu / 16.0) throw InvalidArgument("no w with 2^-w in [mu/16, mu/4]");
  if (w > n) {
    throw InvalidArgument("bot oracle at n=" + std::to_string(n) + " needs w=" + std::to_string(w) +
                          " > n prefix bits; increase n or decrease c");
  }
  p.w = w;
  return p;
}

OracleWorld::OracleWorld(WorldKind kind, std::uint64_t seed, std::size_t n_max)
    : kind_(kind), seed_(seed), n_max_(n_max), cache_(std::make_shared<PermutationCache>()) {
  if (n_max < 1 || n_max > kMaxN) {
    throw InvalidArgument("n_max must lie in [1, " + std::to_string(kMaxN) + "]");
  }
}

OracleWorld OracleWorld::flip(std::uint64_t seed, std::size_t n_max) {
  return OracleWorld(WorldKind::kFlip, seed, n_max);
}

OracleWorld OracleWorld::sampler(std::uint64_t seed, std::size_t n_max) {
  return OracleWorld(WorldKind::kSampler, seed, n_max);
}

OracleWorld OracleWorld::bot(std::uint64_t seed, std::size_t n_max, double c, std::size_t m_factor) {
  if (m_factor < 2) throw InvalidArgument("bot world needs m_factor >= 2 so that m(n) > n");
  OracleWorld w(WorldKind::kBot, seed, n_max);
  w.c_ = c;
  w.m_factor_ = m_factor;
  return w;
}

void OracleWorld::require_kind(WorldKind kind, const char* what) const {
  if (kind_ != kind) {
    throw InvalidArgument(std::string(what) + " requires a " + to_string(kind) + " world, got " +
                          to_string(kind_));
  }
}

void OracleWorld::require_n(std::size_t n) const {
  if (n < 1 || n > n_max_) {
    throw InvalidArgument("input length " + std::to_string(n) + " outside [1, " + std::to_string(n_max_) + "]");
  }
}

std::size_t OracleWorld::o_length(std::size_t n) const {
  switch (kind_) {
    case WorldKind::kFlip: return 8 * n;
    case WorldKind::kBot: return m_factor_ * n;
    case WorldKind::kSampler: return n;
  }
  return n;
}

BotOracleParams OracleWorld::bot_params(std::size_t n) const {
  require_kind(WorldKind::kBot, "bot_params");
  require_n(n);
  return BotOracleParams::make(n, c_, o_length(n));
}

BitString OracleWorld::O(const BitString& x) const {
  require_n(x.size());
  return derive_bits(seed_, kDomainO, static_cast<std::uint32_t>(x.size()), x.to_uint(), o_length(x.size()));
}

BitString OracleWorld::P(const BitString& input) const {
  if (kind_ == WorldKind::kBot) {
    require_n(input.size());
    return BitString::from_uint(permute(input.size(), input.to_uint()), input.size());
  }
  if (input.size() % 2 != 0) throw InvalidArgument("P_n takes a 2n-bit input (x, a)");
  const std::size_t n = input.size() / 2;
  require_n(n);
  return derive_bits(seed_, kDomainP, static_cast<std::uint32_t>(n), input.to_uint(), n);
}

BitString OracleWorld::Q(const BitString& x) const {
  require_kind(WorldKind::kBot, "Q_n");
  require_n(x.size());
  return derive_bits(seed_, kDomainQ, static_cast<std::uint32_t>(x.size()), x.to_uint(), x.size());
}

const std::vector<std::uint32_t>& OracleWorld::permutation_table(std::size_t n) const {
  require_n(n);
  std::call_once(cache_->once[n], [&] {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::uint32_t> table(size);
    for (std::size_t i = 0; i < size; ++i) table[i] = static_cast<std::uint32_t>(i);
    SeededRng rng(mix64(seed_ ^ 0x5851F42D4C957F2Dull), hash_combine(kDomainPermutation, n));
    for (std::size_t i = size - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_below(i + 1);
      std::swap(table[i], table[j]);
    }
    cache_->tables[n] = std::move(table);
  });
  return cache_->tables[n];
}

std::uint64_t OracleWorld::permute(std::size_t n, std::uint64_t x) const {
  require_kind(WorldKind::kBot, "permute");
  if (x >= (std::uint64_t{1} << n)) throw InvalidArgument("permutation input out of range");
  return permutation_table(n)[x];
}

nlohmann::json OracleWorld::to_json() const {
  nlohmann::json j = {{"world_kind", to_string(kind_)},
                      {"seed", seed_},
                      {"n_max", n_max_},
                      {"derivation_id", std::string(kDerivationId)}};
  if (kind_ == WorldKind::kBot) {
    j["c"] = c_;
    j["m_factor"] = m_factor_;
  }
  return j;
}

OracleWorld OracleWorld::from_json(const nlohmann::json& record) {
  if (record.at("derivation_id").get<std::string>() != kDerivationId) {
    throw InvalidArgument("unsupported derivation id " + record.at("derivation_id").get<std::string>());
  }
  const WorldKind kind = world_kind_from_string(record.at("world_kind").get<std::string>());
  const auto seed = record.at("seed").get<std::uint64_t>();
  const auto n_max = record.at("n_max").get<std::size_t>();
  switch (kind) {
    case WorldKind::kFlip: return flip(seed, n_max);
    case WorldKind::kSampler: return sampler(seed, n_max);
    case WorldKind::kBot:
      return bot(seed, n_max, record.value("c", 1.0), record.value("m_factor", std::size_t{2}));
  }
  throw InvalidArgument("unknown world kind");
}

// -- bot world ---------------------------------------------------------------

bool bot_oracle_is_good(const OracleWorld& world, const BitString& x) {
  const auto params = world.bot_params(x.size());
  return !world.P(x).prefix_is_zero(params.w);
}

double bot_oracle_bot_probability(const OracleWorld& world, const BitString& x) {
  if (bot_oracle_is_good(world, x)) return 0.0;
  return std::ldexp(static_cast<double>(world.Q(x).to_uint()), -static_cast<int>(x.size()));
}

BotValue bot_oracle_eval(const OracleWorld& world, const BitString& x, SeededRng& rng) {
  const auto params = world.bot_params(x.size());
  BitString y = world.O(x);
  if (!world.P(x).prefix_is_zero(params.w)) return y;
  const double p_x = std::ldexp(static_cast<double>(world.Q(x).to_uint()), -static_cast<int>(x.size()));
  if (rng.uniform() < p_x) return BotValue::bot();
  return y;
}

std::vector<std::uint64_t> bot_oracle_good_set(const OracleWorld& world, std::size_t n) {
  if (n > 20) throw BudgetExceeded("good set enumeration limited to n <= 20");
  const auto params = world.bot_params(n);
  std::vector<std::uint64_t> good;
  const std::uint64_t bad_prefix_limit = std::uint64_t{1} << (n - params.w);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    // First w bits of the n-bit image are zero iff the image < 2^(n-w).
    if (world.permute(n, x) >= bad_prefix_limit) good.push_back(x);
  }
  return good;
}

GeneratorHandle bot_world_generator(const OracleWorld& world, std::size_t n) {
  const auto params = world.bot_params(n);
  return GeneratorHandle::bot_prg(
      "bot-world/n=" + std::to_string(n), n, params.m,
      [world](const BitString& key, SeededRng& rng) { return bot_oracle_eval(world, key, rng); });
}

// -- flip world --------------------------------------------------------------

std::uint64_t flip_register_index(std::size_t n, std::uint64_t x, std::uint64_t y) {
  if (9 * n + 1 > 63) throw BudgetExceeded("flip register index overflows 64 bits");
  return (std::uint64_t{1} << (9 * n)) | (x << (8 * n)) | y;
}

RankTwoFlip flip_oracle(const OracleWorld& world, std::size_t n) {
  if (world.kind() != WorldKind::kFlip) throw InvalidArgument("flip_oracle requires a flip world");
  if (9 * n + 1 >= 63 || (std::size_t{1} << (9 * n + 1)) > kDenseStateBudget) {
    throw BudgetExceeded("dense flip oracle at n=" + std::to_string(n) +
                         " exceeds the state budget; use flip_oracle_lazy");
  }
  const std::size_t dim = std::size_t{1} << (9 * n + 1);
  std::vector<Complex> target(dim, 0.0);
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const std::uint64_t y = world.O(BitString::from_uint(x, n)).to_uint();
    target[flip_register_index(n, x, y)] += amp;
  }
  return RankTwoFlip(StateVector::basis(dim, 0), StateVector(std::move(target)));
}

SparseFlip::SparseFlip(SparseState a, SparseState b) : a_(std::move(a)), b_(std::move(b)) {
  Complex overlap = 0.0;
  for (const auto& [index, amp] : a_) {
    if (auto it = b_.find(index); it != b_.end()) overlap += std::conj(amp) * it->second;
  }
  if (std::abs(overlap) > kExactTolerance) throw InvalidArgument("flip vectors must be orthogonal");
}

namespace {

Complex sparse_inner(const SparseState& a, const SparseState& b) {
  Complex s = 0.0;
  for (const auto& [index, amp] : a) {
    if (auto it = b.find(index); it != b.end()) s += std::conj(amp) * it->second;
  }
  return s;
}

}  // namespace

SparseState SparseFlip::apply(const SparseState& psi) const {
  const Complex delta = sparse_inner(b_, psi) - sparse_inner(a_, psi);
  SparseState out = psi;
  for (const auto& [index, amp] : a_) out[index] += delta * amp;
  for (const auto& [index, amp] : b_) out[index] -= delta * amp;
  for (auto it = out.begin(); it != out.end();) {
    it = std::abs(it->second) == 0.0 ? out.erase(it) : std::next(it);
  }
  return out;
}

SparseFlip flip_oracle_lazy(const OracleWorld& world, std::size_t n) {
  if (world.kind() != WorldKind::kFlip) throw InvalidArgument("flip_oracle_lazy requires a flip world");
  if (n > kMaxLazyFlipN) throw BudgetExceeded("lazy flip oracle limited to n <= 6");
  SparseState a{{0, 1.0}};
  SparseState b;
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const std::uint64_t y = world.O(BitString::from_uint(x, n)).to_uint();
    b[flip_register_index(n, x, y)] += amp;
  }
  return SparseFlip(std::move(a), std::move(b));
}

std::uint64_t measure_sparse(const SparseState& psi, SeededRng& rng) {
  if (psi.empty()) throw InvalidArgument("cannot measure an empty sparse state");
  double total = 0.0;
  for (const auto& [index, amp] : psi) total += std::norm(amp);
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  for (const auto& [index, amp] : psi) {
    cumulative += std::norm(amp);
    if (u < cumulative) return index;
  }
  return psi.rbegin()->first;
}

BotValue verify_eval_oracle(const OracleWorld& world, const BitString& x, const BitString& y,
                            const BitString& a) {
  if (world.kind() == WorldKind::kBot) throw InvalidArgument("verify_eval_oracle needs a flip or sampler world");
  const std::size_t n = x.size();
  if (a.size() != n || y.size() != world.o_length(n)) {
    throw InvalidArgument("verify_eval_oracle: expected |x| = |a| = n and |y| = " +
                          std::to_string(world.o_length(n)));
  }
  if (world.O(x) != y) return BotValue::bot();
  return world.P(x.concat(a));
}

// -- sampler world -----------------------------------------------------------

std::pair<BitString, BitString> sampler_oracle(const OracleWorld& world, std::size_t n, SeededRng& rng) {
  if (world.kind() != WorldKind::kSampler) throw InvalidArgument("sampler_oracle requires a sampler world");
  BitString x = rng.bits(n);
  BitString y = world.O(x);
  return {std::move(x), std::move(y)};
}

GeneratorHandle prfqs_from_world(const OracleWorld& world, std::size_t n) {
  const std::size_t y_len = world.o_length(n);
  GeneratorHandle::KeySampler qsamp;
  if (world.kind() == WorldKind::kFlip) {
    if (n <= 2) {
      auto flip = std::make_shared<const RankTwoFlip>(flip_oracle(world, n));
      qsamp = [flip, n, y_len](SeededRng& rng) -> BotValue {
        const StateVector out = apply_flip(*flip, StateVector::basis(flip->dim(), 0));
        const std::uint64_t index = measure_computational(out, rng);
        return BitString::from_uint(index & low_mask(9 * n), 9 * n).slice(0, n + y_len);
      };
    } else {
      auto flip = std::make_shared<const SparseFlip>(flip_oracle_lazy(world, n));
      qsamp = [flip, n, y_len](SeededRng& rng) -> BotValue {
        const std::uint64_t index = measure_sparse(flip->apply(SparseState{{0, 1.0}}), rng);
        return BitString::from_uint(index & low_mask(9 * n), 9 * n).slice(0, n + y_len);
      };
    }
  } else if (world.kind() == WorldKind::kSampler) {
    qsamp = [world, n](SeededRng& rng) -> BotValue {
      auto [x, y] = sampler_oracle(world, n, rng);
      return x.concat(y);
    };
  } else {
    throw InvalidArgument("prfqs_from_world needs a flip or sampler world");
  }
  return GeneratorHandle::prf_qs(
      std::string(to_string(world.kind())) + "-world-prf/n=" + std::to_string(n), n + y_len, n, n,
      std::move(qsamp), [world, n, y_len](const BitString& key, const BitString& a, SeededRng&) {
        if (key.size() != n + y_len) throw InvalidArgument("prf key has the wrong length");
        return verify_eval_oracle(world, key.slice(0, n), key.slice(n, n + y_len), a);
      });
}

// -- exhaustive-search adversaries ------------------------------------------

int bruteforce_prg_adversary(const GeneratorHandle& candidate, const BitString& challenge,
                             const SeededRng& rng, std::size_t votes, CallBudget* budget) {
  const std::size_t key_bits = candidate.input_length();
  if (key_bits > kMaxBruteForcePrgKeyBits) throw BudgetExceeded("brute-force PRG key space above 2^20");
  if (votes < 1) throw InvalidArgument("votes must be >= 1");
  std::vector<BotValue> outputs(votes);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << key_bits); ++k) {
    const BitString key = BitString::from_uint(k, key_bits);
    SeededRng local = rng.split(k);
    for (std::size_t v = 0; v < votes; ++v) {
      if (budget != nullptr) budget->charge();
      outputs[v] = candidate.eval(key, local);
    }
    const BotValue modal = vote(outputs);
    if (!modal.is_bot() && modal.value() == challenge) return 0;
  }
  return 1;
}

BitString bruteforce_owsg_adversary(const GeneratorHandle& gen, std::span<const StateVector> copies,
                                    const SeededRng& rng, CallBudget* budget) {
  const std::size_t key_bits = gen.input_length();
  if (key_bits > kMaxBruteForceOwsgKeyBits) throw BudgetExceeded("brute-force OWSG key space above 2^16");
  std::uint64_t best_key = 0;
  double best_score = -1.0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << key_bits); ++k) {
    if (budget != nullptr) budget->charge();
    SeededRng local = rng.split(k);
    const StateVector candidate = gen.eval_state(BitString::from_uint(k, key_bits), local);
    double score = 1.0;
    for (const auto& copy : copies) score *= fidelity(candidate, copy);
    if (score > best_score) {
      best_score = score;
      best_key = k;
    }
  }
  return BitString::from_uint(best_key, key_bits);
}

}  // namespace qsdet
