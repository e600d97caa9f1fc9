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

#include "qsdet/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qsdet/constructions.hpp"
#include "qsdet/errors.hpp"
#include "qsdet/experiments.hpp"
#include "qsdet/extract.hpp"
#include "qsdet/oracles.hpp"
#include "qsdet/tomography.hpp"

namespace qsdet::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::vector<std::string> kExperimentNames = {"prg", "bot-prg", "owsg", "moment"};

// Seeds a command-level stream away from the ones experiments use.
constexpr std::uint64_t kWorldSalt = 0x776F726C64ull;
constexpr std::uint64_t kToySalt = 0x746F79ull;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void round_in_place(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_in_place(child);
  }
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

BitString parse_bits(const std::string& text, std::size_t expected, const char* what) {
  BitString b = BitString::from_string(text);
  if (b.size() != expected) {
    throw InvalidArgument(std::string(what) + " must have " + std::to_string(expected) + " bits: " + text);
  }
  return b;
}

json bot_json(const BotValue& v) { return v.is_bot() ? json(nullptr) : json(v.value().to_string()); }

// Everything a subcommand needs after parsing.
struct Run {
  std::string subcommand;
  json params = json::object();
  std::uint64_t seed = 0;
  std::vector<json> results;
};

// -- extract / haar-stats -----------------------------------------------------

struct ExtractOpts {
  std::size_t d = 4096;
  std::size_t states = 1000;
  std::string mode = "exact";
  std::uint64_t t = 1000000;
};

json cmd_extract(const ExtractOpts& o, std::uint64_t seed) {
  if (!RoundParams::is_valid_dimension(o.d)) {
    throw UsageError("invalid --d " + std::to_string(o.d) + ": " + RoundParams::dimension_rule());
  }
  const RoundParams params(o.d);
  const bool sampled = o.mode == "sampled";
  const ExtractMode mode = sampled ? ExtractMode(SampledMode{o.t}) : ExtractMode(ExactMode{});
  const SeededRng rng(seed);

  std::vector<std::uint8_t> good(o.states), repeat_agree(o.states), exact_agree(o.states);
  std::vector<BitString> outputs(o.states);
  for_each_index(o.states, Exec::kParallel, [&](std::size_t i) {
    SeededRng local = rng.split(i);
    const StateVector psi = haar_sample(o.d, local);
    SeededRng eval_rng = local.split(1);
    const BitString exact_y = round_bits(exact_diagonal(psi), params);
    good[i] = good_set_member(exact_diagonal(psi), params) ? 1 : 0;
    const BitString y1 = extract(psi, params, mode, eval_rng);
    const BitString y2 = extract(psi, params, mode, eval_rng);
    outputs[i] = y1;
    repeat_agree[i] = y1 == y2 ? 1 : 0;
    exact_agree[i] = y1 == exact_y ? 1 : 0;
  });

  std::size_t n_good = 0, n_repeat = 0, n_exact = 0;
  std::vector<double> freq(params.ell(), 0.0);
  for (std::size_t i = 0; i < o.states; ++i) {
    for (std::size_t b = 0; b < params.ell(); ++b) freq[b] += outputs[i][b] ? 1.0 : 0.0;
    if (!good[i]) continue;
    ++n_good;
    n_repeat += repeat_agree[i];
    n_exact += exact_agree[i];
  }
  for (auto& f : freq) f /= static_cast<double>(o.states);
  const auto rate = [&](std::size_t k) {
    return n_good == 0 ? json(nullptr) : json(static_cast<double>(k) / static_cast<double>(n_good));
  };
  return {{"d", o.d},
          {"k", params.k()},
          {"r", params.r()},
          {"ell", params.ell()},
          {"states", o.states},
          {"mode", o.mode},
          {"good_states", n_good},
          {"good_fraction", static_cast<double>(n_good) / static_cast<double>(o.states)},
          {"bit_frequencies", freq},
          {"repeat_agreement_on_good", rate(n_repeat)},
          {"exact_agreement_on_good", rate(n_exact)}};
}

json cmd_haar_stats(const ExtractOpts& o, std::uint64_t seed) {
  if (!RoundParams::is_valid_dimension(o.d)) {
    throw UsageError("invalid --d " + std::to_string(o.d) + ": " + RoundParams::dimension_rule());
  }
  const auto rep = gaussian_block_check(o.d, o.states, SeededRng(seed));
  return {{"d", rep.d},
          {"states", rep.n_states},
          {"samples", rep.samples},
          {"mean", rep.mean},
          {"variance", rep.variance},
          {"expected_mean", rep.expected_mean},
          {"expected_variance", rep.expected_variance},
          {"ks_distance", rep.ks_distance},
          {"good_fraction", rep.good_fraction},
          {"bit_frequencies", rep.bit_frequencies}};
}

// -- constructions ------------------------------------------------------------

struct BotWorldOpts {
  std::size_t n = 16;
  double c = 1.0;
  std::size_t m_factor = 2;
};

OracleWorld make_bot_world(const BotWorldOpts& o, std::uint64_t seed) {
  return OracleWorld::bot(mix64(seed ^ kWorldSalt), o.n, o.c, o.m_factor);
}

struct PrgQsOpts {
  std::string from = "bot-oracle";
  BotWorldOpts world;
  std::uint64_t qsamp_runs = 10000;
  std::size_t keys = 100;
  std::size_t evals = 100;
};

json cmd_prg_qs(const PrgQsOpts& o, std::uint64_t seed) {
  const OracleWorld world = make_bot_world(o.world, seed);
  const Con1Params params = Con1Params::make(o.world.n, bot_world_generator(world, o.world.n));
  const GeneratorHandle gen = con1_generator(params);
  const SeededRng rng(seed);

  std::vector<std::uint8_t> bots(o.qsamp_runs);
  const SeededRng qsamp_rng = rng.split(0);
  for_each_index(o.qsamp_runs, Exec::kParallel, [&](std::size_t i) {
    SeededRng local = qsamp_rng.split(i);
    bots[i] = con1_qsamp(params, local).is_bot() ? 1 : 0;
  });
  std::uint64_t n_bot = 0;
  for (auto b : bots) n_bot += b;

  std::vector<double> modal(o.keys, -1.0);
  const SeededRng key_rng = rng.split(1);
  const SeededRng audit_rng = rng.split(2);
  for_each_index(o.keys, Exec::kParallel, [&](std::size_t i) {
    SeededRng local = key_rng.split(i);
    const BotValue key = con1_qsamp(params, local);
    if (key.is_bot()) return;
    modal[i] = determinism_audit(gen, key.value(), o.evals, audit_rng.split(i)).modal_frequency;
  });
  double sum = 0.0, lowest = 1.0;
  std::size_t audited = 0;
  for (double f : modal) {
    if (f < 0.0) continue;
    ++audited;
    sum += f;
    lowest = std::min(lowest, f);
  }
  const auto bp = world.bot_params(o.world.n);
  return {{"world", world.to_json()},
          {"lambda", params.lambda},
          {"m", params.m},
          {"mu", bp.mu},
          {"w", bp.w},
          {"qsamp_runs", o.qsamp_runs},
          {"qsamp_bots", n_bot},
          {"qsamp_bot_rate", o.qsamp_runs == 0 ? 0.0 : static_cast<double>(n_bot) / static_cast<double>(o.qsamp_runs)},
          {"keys_audited", audited},
          {"evals_per_key", o.evals},
          {"modal_frequency_mean", audited == 0 ? json(nullptr) : json(sum / static_cast<double>(audited))},
          {"modal_frequency_min", audited == 0 ? json(nullptr) : json(lowest)}};
}

struct SprsQsOpts {
  std::string from = "prg-qs";
  BotWorldOpts world{12, 1.0, 2};
  std::size_t N = 8;
  std::size_t t = 2;
  std::uint64_t keys = 2000;
};

json cmd_sprs_qs(const SprsQsOpts& o, std::uint64_t seed) {
  const OracleWorld world = make_bot_world(o.world, seed);
  const GeneratorHandle prg = con1_generator(Con1Params::make(o.world.n, bot_world_generator(world, o.world.n)));
  const Con3Params params = Con3Params::make(o.world.n, o.N, prg);
  const GeneratorHandle gen = con3_generator(params);
  const SeededRng rng(seed);

  // Flatness over a handful of sampled keys.
  constexpr std::size_t kFlatnessKeys = 64;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < kFlatnessKeys; ++i) {
    SeededRng local = rng.split(0).split(i);
    const BotValue key = gen.sample_key(local);
    const StateVector psi = con3_stategen(params, key, local);
    for (const auto& a : psi.amplitudes()) {
      max_dev = std::max(max_dev, std::abs(std::abs(a) - 1.0 / std::sqrt(static_cast<double>(o.N))));
    }
  }
  const auto md = moment_distance(gen, o.t, o.keys, MomentMode::kMonteCarlo, rng.split(1));
  return {{"world", world.to_json()},
          {"lambda", params.lambda},
          {"N", params.N},
          {"slice_bits", params.slice_bits},
          {"inner_output_length", prg.output_length()},
          {"relaxations", params.relaxations},
          {"max_modulus_deviation", max_dev},
          {"t", o.t},
          {"moment_distance", md.distance},
          {"moment_ci_half_width", md.ci_half_width},
          {"keys_used", md.keys_used},
          {"bot_keys", md.bot_keys}};
}

// -- oracle-sim ---------------------------------------------------------------

struct OracleSimOpts {
  std::string world = "bot";
  std::size_t n = 4;
  double c = 1.0;
  std::size_t m_factor = 2;
  std::string queries;
  std::size_t count = 16;
};

std::vector<std::vector<std::string>> read_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read queries file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> row;
    for (std::string f; fields >> f;) row.push_back(f);
    if (!row.empty() && row[0][0] != '#') rows.push_back(std::move(row));
  }
  return rows;
}

json cmd_oracle_sim(const OracleSimOpts& o, std::uint64_t seed) {
  const WorldKind kind = world_kind_from_string(o.world);
  const OracleWorld world = kind == WorldKind::kFlip      ? OracleWorld::flip(seed, o.n)
                            : kind == WorldKind::kSampler ? OracleWorld::sampler(seed, o.n)
                                                          : OracleWorld::bot(seed, o.n, o.c, o.m_factor);
  const SeededRng rng = SeededRng(seed).split(kWorldSalt);
  const std::size_t n = o.n;
  json responses = json::array();
  json extra = json::object();

  if (!o.queries.empty()) {
    const auto rows = read_queries(o.queries);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (kind == WorldKind::kBot) {
        const BitString x = parse_bits(row[0], n, "query x");
        SeededRng local = rng.split(i);
        responses.push_back({{"x", x.to_string()},
                             {"response", bot_json(bot_oracle_eval(world, x, local))},
                             {"good", bot_oracle_is_good(world, x)},
                             {"bot_probability", bot_oracle_bot_probability(world, x)}});
      } else {
        if (row.size() != 3) throw UsageError("flip/sampler queries are lines 'x y a'");
        const BitString x = parse_bits(row[0], n, "query x");
        const BitString y = parse_bits(row[1], world.o_length(n), "query y");
        const BitString a = parse_bits(row[2], n, "query a");
        responses.push_back({{"x", x.to_string()},
                             {"y", y.to_string()},
                             {"a", a.to_string()},
                             {"response", bot_json(verify_eval_oracle(world, x, y, a))}});
      }
    }
  } else if (kind == WorldKind::kBot) {
    for (std::size_t i = 0; i < o.count; ++i) {
      SeededRng local = rng.split(i);
      const BitString x = local.bits(n);
      responses.push_back({{"x", x.to_string()},
                           {"response", bot_json(bot_oracle_eval(world, x, local))},
                           {"good", bot_oracle_is_good(world, x)},
                           {"bot_probability", bot_oracle_bot_probability(world, x)}});
    }
  } else if (kind == WorldKind::kSampler) {
    for (std::size_t i = 0; i < o.count; ++i) {
      SeededRng local = rng.split(i);
      const auto [x, y] = sampler_oracle(world, n, local);
      responses.push_back({{"x", x.to_string()}, {"y", y.to_string()}, {"consistent", world.O(x) == y}});
    }
  } else {
    const RankTwoFlip flip = flip_oracle(world, n);
    const std::size_t dim = flip.dim();
    const StateVector zero = StateVector::basis(dim, 0);
    const StateVector psi = apply_flip(flip, zero);
    const StateVector back = apply_flip(flip, psi);
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) err = std::max(err, std::abs(back[i] - zero[i]));
    extra["sigma_squared_error"] = err;
    const std::uint64_t y_mask = (std::uint64_t{1} << (8 * n)) - 1;
    const std::uint64_t x_mask = (std::uint64_t{1} << n) - 1;
    for (std::size_t i = 0; i < o.count; ++i) {
      SeededRng local = rng.split(i);
      const std::uint64_t idx = measure_computational(psi, local);
      const BitString x = BitString::from_uint((idx >> (8 * n)) & x_mask, n);
      const BitString y = BitString::from_uint(idx & y_mask, 8 * n);
      responses.push_back({{"index", idx},
                           {"x", x.to_string()},
                           {"y", y.to_string()},
                           {"consistent", (idx >> (9 * n)) == 1 && world.O(x) == y}});
    }
  }
  json result = {{"world", world.to_json()}, {"n", n}, {"responses", responses}};
  result.update(extra);
  return result;
}

// -- experiment ---------------------------------------------------------------

struct ExperimentOpts {
  std::string name;
  std::size_t runs = 1;
  std::uint64_t trials = 1000;
  std::string adversary;
  std::string generator;
  std::size_t lambda = 8;
  std::size_t s = 24;
  std::size_t votes = 1;
  std::size_t t = 2;
  std::size_t dim = 8;
  std::size_t q = 4;
  std::size_t n = 8;
  double c = 1.0;
  std::size_t m_factor = 2;
  std::size_t N = 8;
  std::uint64_t keys = 100000;
  std::string mode = "monte-carlo";
};

void require_member(const std::string& value, const std::vector<std::string>& valid, const char* what) {
  if (std::find(valid.begin(), valid.end(), value) == valid.end()) {
    throw UsageError("unknown " + std::string(what) + " '" + value + "'; valid: " + join(valid));
  }
}

// Fills defaults and returns the parameters that define one experiment.
json experiment_params(ExperimentOpts& o) {
  require_member(o.name, kExperimentNames, "experiment name");
  json p = {{"name", o.name}, {"runs", o.runs}};
  if (o.name == "prg") {
    if (o.generator.empty()) o.generator = "toy";
    if (o.adversary.empty()) o.adversary = "bruteforce";
    require_member(o.generator, {"toy", "zero-padding"}, "prg generator");
    require_member(o.adversary, {"coin-flip", "bruteforce", "padding-check", "constant-0", "constant-1"},
                   "prg adversary");
    p.update({{"generator", o.generator}, {"adversary", o.adversary}, {"lambda", o.lambda}, {"s", o.s},
              {"votes", o.votes}, {"trials", o.trials}});
  } else if (o.name == "bot-prg") {
    if (o.adversary.empty()) o.adversary = "coin-flip";
    require_member(o.adversary, {"coin-flip", "bot-count", "bruteforce", "constant-0"}, "bot-prg adversary");
    p.update({{"adversary", o.adversary}, {"n", o.n}, {"c", o.c}, {"m-factor", o.m_factor}, {"q", o.q},
              {"votes", o.votes}, {"trials", o.trials}});
  } else if (o.name == "owsg") {
    if (o.generator.empty()) o.generator = "keyed-haar";
    if (o.adversary.empty()) o.adversary = "bruteforce";
    require_member(o.generator, {"keyed-haar", "parity"}, "owsg generator");
    require_member(o.adversary, {"coin-flip", "bruteforce"}, "owsg adversary");
    p.update({{"generator", o.generator}, {"adversary", o.adversary}, {"lambda", o.lambda}, {"t", o.t},
              {"dim", o.dim}, {"trials", o.trials}});
  } else {
    require_member(o.mode, {"monte-carlo", "exact-enum", "phase-exact"}, "moment mode");
    p.update({{"N", o.N}, {"t", o.t}, {"keys", o.keys}, {"mode", o.mode}});
  }
  return p;
}

AdversaryHandle make_distinguisher(const std::string& id, std::size_t key_bits, std::size_t prefix,
                                   std::size_t votes) {
  if (id == "coin-flip") return coin_flip_adversary();
  if (id == "bruteforce") return bruteforce_prg_adversary_handle(key_bits, votes);
  if (id == "padding-check") return padding_check_adversary(prefix);
  if (id == "bot-count") return bot_count_adversary();
  if (id == "constant-1") return constant_adversary(1);
  return constant_adversary(0);
}

std::vector<json> cmd_experiment(const ExperimentOpts& o, std::uint64_t seed) {
  std::vector<json> out;
  for (std::size_t run = 0; run < o.runs; ++run) {
    const SeededRng rng = SeededRng(seed).split(run);
    const auto start = Clock::now();
    json report;
    if (o.name == "prg") {
      const GeneratorHandle gen = o.generator == "toy" ? toy_expanding_prg(mix64(seed ^ kToySalt), o.lambda, o.s)
                                                       : zero_padding_prg(o.lambda, o.s);
      report = exp_prg(gen, make_distinguisher(o.adversary, o.lambda, o.lambda, o.votes), o.trials, rng).to_json();
    } else if (o.name == "bot-prg") {
      const OracleWorld world = make_bot_world({o.n, o.c, o.m_factor}, seed);
      const GeneratorHandle gen = bot_world_generator(world, o.n);
      report = exp_botprg(gen, make_distinguisher(o.adversary, o.n, o.n, o.votes), o.q, o.trials, rng).to_json();
      report["parameters"]["world"] = world.to_json();
    } else if (o.name == "owsg") {
      const GeneratorHandle gen = o.generator == "parity" ? parity_owsg(o.lambda)
                                                          : keyed_haar_owsg(mix64(seed ^ kToySalt), o.lambda, o.dim);
      const AdversaryHandle adv =
          o.adversary == "coin-flip" ? coin_flip_adversary() : bruteforce_owsg_adversary_handle(o.lambda);
      report = exp_owsg(gen, adv, o.t, o.trials, rng).to_json();
    } else {
      report = {{"name", "moment"}, {"parameters", {{"generator", "random-phase"}, {"N", o.N}, {"t", o.t}}},
                {"seed", seed}};
      if (o.mode == "phase-exact") {
        report["distance"] = phase_moment_distance_exact(o.N, o.t);
        report["ci_half_width"] = 0.0;
      } else {
        const auto mode = o.mode == "exact-enum" ? MomentMode::kExactEnum : MomentMode::kMonteCarlo;
        const auto md = moment_distance(random_function_phase_sprs(o.N), o.t, o.keys, mode, rng);
        report["distance"] = md.distance;
        report["ci_half_width"] = md.ci_half_width;
        report["keys_used"] = md.keys_used;
        report["bot_keys"] = md.bot_keys;
      }
      report["wallclock_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    report["run"] = run;
    out.push_back(std::move(report));
  }
  return out;
}

// -- driver -------------------------------------------------------------------

std::string read_first_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) return line;
  }
  throw UsageError("no records in " + path);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
  CLI::App app{"qsdet: pseudodeterministic quantum primitives at desk scale", "qsdet"};
  app.require_subcommand(1);
  std::string output_path;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (drawn from entropy when omitted)");
    sub->add_option("--output", output_path, "Write JSON lines here instead of stdout");
  };

  ExtractOpts ex;
  auto* extract_cmd = app.add_subcommand("extract", "Haar states through Extract");
  extract_cmd->add_option("--d", ex.d, "Dimension, 2^(6a)");
  extract_cmd->add_option("--states", ex.states);
  extract_cmd->add_option("--mode", ex.mode)->check(CLI::IsMember({"exact", "sampled"}));
  extract_cmd->add_option("--t", ex.t, "Measurements per state in sampled mode");
  add_common(extract_cmd);

  ExtractOpts hs;
  auto* haar_cmd = app.add_subcommand("haar-stats", "Block-sum statistics of Haar states");
  haar_cmd->add_option("--d", hs.d);
  haar_cmd->add_option("--states", hs.states);
  add_common(haar_cmd);

  PrgQsOpts pq;
  auto* prg_cmd = app.add_subcommand("prg-qs", "PRG with quantum key sampling from a bot-PRG");
  prg_cmd->add_option("--from", pq.from)->check(CLI::IsMember({"bot-oracle"}));
  prg_cmd->add_option("--n", pq.world.n);
  prg_cmd->add_option("--c", pq.world.c);
  prg_cmd->add_option("--m-factor", pq.world.m_factor);
  prg_cmd->add_option("--qsamp-runs", pq.qsamp_runs);
  prg_cmd->add_option("--keys", pq.keys);
  prg_cmd->add_option("--evals", pq.evals);
  add_common(prg_cmd);

  SprsQsOpts sq;
  auto* sprs_cmd = app.add_subcommand("sprs-qs", "Phase-state PRS from a PRG with quantum key sampling");
  sprs_cmd->add_option("--from", sq.from)->check(CLI::IsMember({"prg-qs"}));
  sprs_cmd->add_option("--n", sq.world.n);
  sprs_cmd->add_option("--c", sq.world.c);
  sprs_cmd->add_option("--m-factor", sq.world.m_factor);
  sprs_cmd->add_option("--N", sq.N);
  sprs_cmd->add_option("--t", sq.t);
  sprs_cmd->add_option("--keys", sq.keys);
  add_common(sprs_cmd);

  OracleSimOpts os;
  auto* oracle_cmd = app.add_subcommand("oracle-sim", "Query a seeded oracle world");
  oracle_cmd->add_option("--world", os.world)->check(CLI::IsMember({"flip", "bot", "sampler"}));
  oracle_cmd->add_option("--n", os.n);
  oracle_cmd->add_option("--c", os.c);
  oracle_cmd->add_option("--m-factor", os.m_factor);
  oracle_cmd->add_option("--queries", os.queries, "File of queries, one per line");
  oracle_cmd->add_option("--count", os.count, "Random queries when no file is given");
  add_common(oracle_cmd);

  ExperimentOpts eo;
  auto* exp_cmd = app.add_subcommand("experiment", "Security experiments");
  exp_cmd->add_option("--name", eo.name, "prg, bot-prg, owsg or moment")->required();
  exp_cmd->add_option("--runs", eo.runs);
  exp_cmd->add_option("--trials", eo.trials);
  exp_cmd->add_option("--adversary", eo.adversary);
  exp_cmd->add_option("--generator", eo.generator);
  exp_cmd->add_option("--lambda", eo.lambda);
  exp_cmd->add_option("--s", eo.s);
  exp_cmd->add_option("--votes", eo.votes);
  exp_cmd->add_option("--t", eo.t);
  exp_cmd->add_option("--dim", eo.dim);
  exp_cmd->add_option("--q", eo.q);
  exp_cmd->add_option("--n", eo.n);
  exp_cmd->add_option("--c", eo.c);
  exp_cmd->add_option("--m-factor", eo.m_factor);
  exp_cmd->add_option("--N", eo.N);
  exp_cmd->add_option("--keys", eo.keys);
  exp_cmd->add_option("--mode", eo.mode);
  add_common(exp_cmd);

  std::string replay_from;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the configuration recorded in a JSON-lines file");
  replay_cmd->add_option("--from", replay_from)->required();
  replay_cmd->add_option("--output", output_path);

  std::vector<const char*> argv{"qsdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub == replay_cmd) {
    if (depth > 0) throw UsageError("replay records cannot be replayed recursively");
    const json record = json::parse(read_first_record(replay_from));
    if (!record.contains("config")) throw UsageError("record has no config");
    auto replay_args = args_from_config(record["config"]);
    if (!output_path.empty()) {
      replay_args.push_back("--output");
      replay_args.push_back(output_path);
    }
    return dispatch(replay_args, out, err, depth + 1);
  }

  Run run;
  run.subcommand = sub->get_name();
  run.seed = sub->get_option("--seed")->count() > 0 ? seed : entropy_seed();
  const auto start = Clock::now();

  if (sub == extract_cmd) {
    run.params = {{"d", ex.d}, {"states", ex.states}, {"mode", ex.mode}, {"t", ex.t}};
    run.results.push_back(cmd_extract(ex, run.seed));
  } else if (sub == haar_cmd) {
    run.params = {{"d", hs.d}, {"states", hs.states}};
    run.results.push_back(cmd_haar_stats(hs, run.seed));
  } else if (sub == prg_cmd) {
    pq.world.c = round12(pq.world.c);
    run.params = {{"from", pq.from}, {"n", pq.world.n}, {"c", pq.world.c}, {"m-factor", pq.world.m_factor},
                  {"qsamp-runs", pq.qsamp_runs}, {"keys", pq.keys}, {"evals", pq.evals}};
    run.results.push_back(cmd_prg_qs(pq, run.seed));
  } else if (sub == sprs_cmd) {
    sq.world.c = round12(sq.world.c);
    run.params = {{"from", sq.from}, {"n", sq.world.n},  {"c", sq.world.c}, {"m-factor", sq.world.m_factor},
                  {"N", sq.N},       {"t", sq.t}, {"keys", sq.keys}};
    run.results.push_back(cmd_sprs_qs(sq, run.seed));
  } else if (sub == oracle_cmd) {
    os.c = round12(os.c);
    run.params = {{"world", os.world}, {"n", os.n}, {"count", os.count}};
    if (os.world == "bot") run.params.update({{"c", os.c}, {"m-factor", os.m_factor}});
    if (!os.queries.empty()) run.params["queries"] = os.queries;
    run.results.push_back(cmd_oracle_sim(os, run.seed));
  } else {
    eo.c = round12(eo.c);
    run.params = experiment_params(eo);
    run.results = cmd_experiment(eo, run.seed);
  }
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) throw UsageError("cannot write " + output_path);
  }
  std::ostream& sink = output_path.empty() ? out : file;
  const json config = {{"subcommand", run.subcommand}, {"params", run.params}, {"seed", run.seed}};
  for (auto& result : run.results) {
    json record = {{"subcommand", run.subcommand}, {"config", config}, {"result", result}, {"wallclock_ms", wall}};
    round_in_place(record);
    sink << record.dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

double round12(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

nlohmann::json strip_timing(const nlohmann::json& record) {
  if (record.is_object()) {
    json out = json::object();
    for (const auto& [key, value] : record.items()) {
      if (key != "wallclock_ms") out[key] = strip_timing(value);
    }
    return out;
  }
  if (record.is_array()) {
    json out = json::array();
    for (const auto& value : record) out.push_back(strip_timing(value));
    return out;
  }
  return record;
}

std::vector<std::string> args_from_config(const nlohmann::json& config) {
  std::vector<std::string> args{config.at("subcommand").get<std::string>()};
  for (const auto& [key, value] : config.at("params").items()) {
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  args.push_back("--seed");
  args.push_back(std::to_string(config.at("seed").get<std::uint64_t>()));
  return args;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();
  try {
    return dispatch(args, out, err, 0);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const BudgetViolation& e) {
    err << "budget violation: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qsdet::cli
