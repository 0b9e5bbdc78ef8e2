#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "elastic/game.hpp"

namespace elastic {

// An agent is characterised by its attenuation gamma; it always identifies
// with its current opponent at the configured distance and plays the action
// with the highest expected utility, breaking ties with a seeded coin.
struct AgentSpec {
  double gamma = 0.0;

  bool operator==(const AgentSpec&) const = default;
};

struct PointMass {
  double gamma = 0.0;
};

// Residents first, then invaders; counts by largest-remainder rounding.
struct TwoPoint {
  double resident_gamma = 1.0;
  double invader_gamma = 0.0;
  double invader_fraction = 0.1;
};

struct UniformGammas {
  double low = 0.0;
  double high = 1.0;
};

using InitialDistribution = std::variant<PointMass, TwoPoint, UniformGammas>;

enum class Pairing { kWellMixed, kAssortative };
enum class UpdateRule { kRoulette, kMoran };

struct EvolveConfig {
  Game game = reference_prisoners_dilemma();
  std::size_t population_size = 100;
  std::size_t generations = 200;
  InitialDistribution initial = PointMass{0.0};
  Pairing pairing = Pairing::kWellMixed;
  // Probability that an agent is matched with the unpaired agent closest in
  // gamma instead of a random one. Only used with Pairing::kAssortative.
  double assortment = 0.0;
  UpdateRule update = UpdateRule::kRoulette;
  double mutation_rate = 0.0;
  double mutation_step = 0.05;
  std::uint64_t seed = 1;
  double identification_distance = 1.0;
  // Action counted as cooperation in the statistics.
  std::size_t cooperative_action = 0;
  // Stratum centres for per-stratum statistics; agents go to the nearest
  // centre. Empty means: derive from the initial distribution.
  std::vector<double> strata;
};

// Throws ValidationError when the config breaks an invariant.
void validate(const EvolveConfig& config);

struct Population {
  std::vector<AgentSpec> agents;
  std::size_t generation = 0;
  std::uint64_t seed = 0;

  bool operator==(const Population&) const = default;
};

struct StratumStats {
  double centre = 0.0;
  double share = 0.0;
  std::optional<double> mean_fitness;  // empty when the stratum has no members

  bool operator==(const StratumStats&) const = default;
};

struct GenerationStats {
  std::size_t generation = 0;
  double coop_freq = 0.0;
  double mean_gamma = 0.0;
  double min_gamma = 0.0;
  double max_gamma = 0.0;
  double mean_fitness = 0.0;
  double total_payoff = 0.0;
  std::size_t games_played = 0;
  std::vector<StratumStats> strata;

  bool operator==(const GenerationStats&) const = default;
};

struct PlayedGame {
  std::size_t first = 0;   // agent index in role 0
  std::size_t second = 0;  // agent index in role 1
  std::size_t first_action = 0;
  std::size_t second_action = 0;
  double first_payoff = 0.0;
  double second_payoff = 0.0;
};

struct GenerationOutcome {
  Population next;
  GenerationStats stats;
  std::vector<PlayedGame> games;
  // Per agent of the input population: summed raw payoff and games played.
  std::vector<double> payoff_sums;
  std::vector<std::size_t> games_per_agent;
};

struct Trajectory {
  std::vector<double> strata;
  std::vector<GenerationStats> generations;
  Population final_population;

  bool operator==(const Trajectory&) const = default;
};

struct InvasionResult {
  double resident_gamma = 0.0;
  double invader_gamma = 0.0;
  double initial_invader_share = 0.0;
  double final_resident_share = 0.0;
  double final_invader_share = 0.0;
  bool invaders_grew = false;
  Trajectory trajectory;  // strata = {resident, invader}
};

// Actions maximizing expected utility for an agent with `gamma` in `role`,
// identifying with the opponent at `distance`. More than one entry means a
// tie within the tolerance.
std::vector<std::size_t> best_actions(const Game& game, std::size_t role, double gamma, double distance);

// Applies the action rule: argmax, ties broken uniformly with `rng`.
std::size_t choose_action(const Game& game, std::size_t role, const AgentSpec& agent, double distance,
                          std::mt19937_64& rng);

Population init_population(const EvolveConfig& config);

// Stratum centres the run reports on (config.strata or derived from the
// initial distribution).
std::vector<double> strata_for(const EvolveConfig& config);

// One generation: pair, play once, score raw payoffs, select, mutate.
GenerationOutcome step(const Population& population, const EvolveConfig& config);

Trajectory run(const EvolveConfig& config);

// Two-point run with strata {resident, invader}. The invader fraction must lie
// in (0, 1) and produce at least one agent of each kind.
InvasionResult invasion_experiment(double resident_gamma, double invader_gamma, double invader_fraction,
                                   EvolveConfig config);

}  // namespace elastic
