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

#include "qsdet/primitives.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "qsdet/errors.hpp"

namespace qsdet {

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kPrg: return "prg";
    case GeneratorKind::kPrgQs: return "prg-qs";
    case GeneratorKind::kBotPrg: return "bot-prg";
    case GeneratorKind::kSprsQs: return "sprs-qs";
    case GeneratorKind::kPrfQs: return "prf-qs";
    case GeneratorKind::kOwsg: return "owsg";
  }
  return "unknown";
}

GeneratorHandle GeneratorHandle::prg(std::string name, std::size_t input_length,
                                     std::size_t output_length, BitsEval eval) {
  GeneratorHandle g;
  g.kind_ = GeneratorKind::kPrg;
  g.name_ = std::move(name);
  g.input_length_ = input_length;
  g.output_length_ = output_length;
  g.bits_eval_ = std::move(eval);
  return g;
}

GeneratorHandle GeneratorHandle::prg_qs(std::string name, std::size_t input_length,
                                        std::size_t output_length, KeySampler qsamp, BitsEval eval) {
  if (output_length <= input_length) {
    throw InvalidArgument("prg-qs must expand: output length " + std::to_string(output_length) +
                          " <= key length " + std::to_string(input_length));
  }
  GeneratorHandle g = prg(std::move(name), input_length, output_length, std::move(eval));
  g.kind_ = GeneratorKind::kPrgQs;
  g.qsamp_ = std::move(qsamp);
  return g;
}

GeneratorHandle GeneratorHandle::bot_prg(std::string name, std::size_t input_length,
                                         std::size_t output_length, BitsEval eval) {
  if (output_length <= input_length) {
    throw InvalidArgument("bot-prg must expand: output length " + std::to_string(output_length) +
                          " <= input length " + std::to_string(input_length));
  }
  GeneratorHandle g = prg(std::move(name), input_length, output_length, std::move(eval));
  g.kind_ = GeneratorKind::kBotPrg;
  return g;
}

GeneratorHandle GeneratorHandle::sprs_qs(std::string name, std::size_t key_length, std::size_t dim,
                                         KeySampler qsamp, StateEval eval) {
  GeneratorHandle g;
  g.kind_ = GeneratorKind::kSprsQs;
  g.name_ = std::move(name);
  g.input_length_ = key_length;
  g.state_dim_ = dim;
  g.qsamp_ = std::move(qsamp);
  g.state_eval_ = std::move(eval);
  return g;
}

GeneratorHandle GeneratorHandle::owsg(std::string name, std::size_t key_length, std::size_t dim,
                                      StateEval eval) {
  GeneratorHandle g = sprs_qs(std::move(name), key_length, dim, nullptr, std::move(eval));
  g.kind_ = GeneratorKind::kOwsg;
  return g;
}

GeneratorHandle GeneratorHandle::prf_qs(std::string name, std::size_t key_length,
                                        std::size_t input_length, std::size_t output_length,
                                        KeySampler qsamp, PrfEval eval) {
  GeneratorHandle g;
  g.kind_ = GeneratorKind::kPrfQs;
  g.name_ = std::move(name);
  g.input_length_ = key_length;
  g.prf_input_length_ = input_length;
  g.output_length_ = output_length;
  g.qsamp_ = std::move(qsamp);
  g.prf_eval_ = std::move(eval);
  return g;
}

void GeneratorHandle::check_key(const BitString& key) const {
  if (key.size() != input_length_) {
    throw DimensionMismatch(name_ + ": key has " + std::to_string(key.size()) + " bits, expected " +
                            std::to_string(input_length_));
  }
}

BotValue GeneratorHandle::eval(const BitString& key, SeededRng& rng) const {
  if (!bits_eval_) throw InvalidArgument(name_ + " (" + to_string(kind_) + ") is not bit-valued");
  check_key(key);
  return bits_eval_(key, rng);
}

StateVector GeneratorHandle::eval_state(const BitString& key, SeededRng& rng) const {
  if (!state_eval_) throw InvalidArgument(name_ + " (" + to_string(kind_) + ") is not state-valued");
  check_key(key);
  return state_eval_(key, rng);
}

BotValue GeneratorHandle::eval_prf(const BitString& key, const BitString& input, SeededRng& rng) const {
  if (!prf_eval_) throw InvalidArgument(name_ + " (" + to_string(kind_) + ") is not a PRF");
  check_key(key);
  if (input.size() != prf_input_length_) {
    throw DimensionMismatch(name_ + ": PRF input has " + std::to_string(input.size()) + " bits, expected " +
                            std::to_string(prf_input_length_));
  }
  return prf_eval_(key, input, rng);
}

BotValue GeneratorHandle::sample_key(SeededRng& rng) const {
  if (qsamp_) return qsamp_(rng);
  return rng.bits(input_length_);
}

void CallBudget::charge(std::uint64_t calls) {
  if (calls > limit_ - used_ || used_ > limit_) {
    throw BudgetViolation("oracle-call budget of " + std::to_string(limit_) + " exceeded");
  }
  used_ += calls;
}

BotValue is_bot(const BotValue& a, const BitString& b) {
  if (a.is_bot()) return BotValue::bot();
  return b;
}

namespace {

// Index of the first most common element among entries accepted by `keep`,
// or npos if none is accepted.
template <class Keep>
std::size_t first_most_common(std::span<const BotValue> values, Keep keep) {
  std::vector<std::size_t> first_index;  // distinct elements in order of first occurrence
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!keep(values[i])) continue;
    std::size_t slot = 0;
    while (slot < first_index.size() && !(values[first_index[slot]] == values[i])) ++slot;
    if (slot == first_index.size()) {
      first_index.push_back(i);
      counts.push_back(0);
    }
    ++counts[slot];
  }
  std::size_t best = static_cast<std::size_t>(-1);
  std::size_t best_count = 0;
  for (std::size_t slot = 0; slot < counts.size(); ++slot) {
    if (counts[slot] > best_count) {
      best_count = counts[slot];
      best = first_index[slot];
    }
  }
  return best;
}

}  // namespace

BotValue vote(std::span<const BotValue> values) {
  if (values.empty()) throw InvalidArgument("vote of an empty list");
  return values[first_most_common(values, [](const BotValue&) { return true; })];
}

BotValue vote_non_bot(std::span<const BotValue> values) {
  if (values.empty()) throw InvalidArgument("vote of an empty list");
  const std::size_t best = first_most_common(values, [](const BotValue& v) { return !v.is_bot(); });
  if (best == static_cast<std::size_t>(-1)) return BotValue::bot();
  return values[best];
}

DeterminismAudit determinism_audit(const GeneratorHandle& gen, const BitString& key,
                                   std::size_t trials, const SeededRng& rng,
                                   const std::optional<BitString>& prf_input) {
  if (trials < 2) throw InvalidArgument("determinism audit needs at least 2 trials");
  DeterminismAudit audit;
  audit.key = key;
  audit.trials = trials;

  if (gen.is_state_valued()) {
    std::vector<StateVector> representatives;
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < trials; ++i) {
      SeededRng local = rng.split(i);
      StateVector out = gen.eval_state(key, local);
      std::size_t c = 0;
      while (c < representatives.size() && fidelity(representatives[c], out) < kStateClusterFidelity) ++c;
      if (c == representatives.size()) {
        representatives.push_back(std::move(out));
        sizes.push_back(0);
      }
      ++sizes[c];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < sizes.size(); ++c) {
      if (sizes[c] > sizes[best]) best = c;
    }
    audit.modal_value = representatives[best];
    audit.modal_frequency = static_cast<double>(sizes[best]) / static_cast<double>(trials);
    audit.distinct_outputs = sizes.size();
    return audit;
  }

  std::vector<BotValue> outputs;
  outputs.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    SeededRng local = rng.split(i);
    if (gen.kind() == GeneratorKind::kPrfQs) {
      if (!prf_input) throw InvalidArgument("auditing a prf-qs requires an input");
      outputs.push_back(gen.eval_prf(key, *prf_input, local));
    } else {
      outputs.push_back(gen.eval(key, local));
    }
  }
  const BotValue modal = vote(outputs);
  std::size_t count = 0;
  std::vector<BotValue> distinct;
  for (const auto& v : outputs) {
    if (v == modal) ++count;
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) distinct.push_back(v);
  }
  audit.modal_value = modal;
  audit.modal_frequency = static_cast<double>(count) / static_cast<double>(trials);
  audit.distinct_outputs = distinct.size();
  return audit;
}

}  // namespace qsdet
