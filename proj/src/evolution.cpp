#include "elastic/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "elastic/analysis.hpp"
#include "elastic/errors.hpp"
#include "elastic/identity.hpp"

namespace elastic {
namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kCoinStream = 1;

// Independent deterministic stream for a tuple of keys.
std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

bool in_unit(double g) { return g >= 0.0 && g <= 1.0; }

std::size_t nearest_stratum(const std::vector<double>& centres, double gamma) {
  std::size_t best = 0;
  for (std::size_t s = 1; s < centres.size(); ++s) {
    if (std::abs(centres[s] - gamma) < std::abs(centres[best] - gamma)) best = s;
  }
  return best;
}

double mutate(double gamma, const EvolveConfig& config, std::mt19937_64& rng) {
  if (config.mutation_rate <= 0.0) return gamma;
  std::bernoulli_distribution hit(config.mutation_rate);
  if (!hit(rng)) return gamma;
  std::uniform_real_distribution<double> delta(-config.mutation_step, config.mutation_step);
  return std::clamp(gamma + delta(rng), 0.0, 1.0);
}

// Pairs agents; returns (role 0, role 1) index pairs. With an odd population
// the agent left over is appended as an extra pair against a random partner.
std::vector<std::pair<std::size_t, std::size_t>> make_pairs(const Population& pop, const EvolveConfig& config,
                                                            std::mt19937_64& rng) {
  const std::size_t n = pop.agents.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (config.pairing == Pairing::kWellMixed || config.assortment <= 0.0) {
    for (std::size_t k = 0; k + 1 < n; k += 2) pairs.emplace_back(order[k], order[k + 1]);
  } else {
    std::bernoulli_distribution assort(config.assortment);
    std::vector<std::size_t> open = order;
    while (open.size() >= 2) {
      const std::size_t i = open.front();
      open.erase(open.begin());
      std::size_t pick = 0;
      if (assort(rng)) {
        for (std::size_t c = 1; c < open.size(); ++c) {
          if (std::abs(pop.agents[open[c]].gamma - pop.agents[i].gamma) <
              std::abs(pop.agents[open[pick]].gamma - pop.agents[i].gamma)) {
            pick = c;
          }
        }
      } else {
        pick = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
      }
      pairs.emplace_back(i, open[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  if (n % 2 == 1) {
    std::vector<bool> paired(n, false);
    for (auto [a, b] : pairs) paired[a] = paired[b] = true;
    const auto left = static_cast<std::size_t>(std::find(paired.begin(), paired.end(), false) - paired.begin());
    std::size_t partner = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    if (partner >= left) ++partner;
    pairs.emplace_back(left, partner);
  }
  return pairs;
}

}  // namespace

void validate(const EvolveConfig& config) {
  if (config.game.num_players() != 2) throw ValidationError("evolution needs a two-player game");
  if (config.game.actions(0) != config.game.actions(1)) {
    throw ValidationError("evolution needs both players to share the same action set");
  }
  if (config.population_size < 2) throw ValidationError("population size must be at least 2");
  if (config.generations < 1) throw ValidationError("generations must be at least 1");
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate <= 1.0)) {
    throw ValidationError("mutation rate must lie in [0, 1]");
  }
  if (!(config.mutation_step >= 0.0) || !std::isfinite(config.mutation_step)) {
    throw ValidationError("mutation step must be a non-negative real");
  }
  if (!(config.assortment >= 0.0 && config.assortment <= 1.0)) throw ValidationError("assortment must lie in [0, 1]");
  if (!(config.identification_distance >= 0.0) || !std::isfinite(config.identification_distance)) {
    throw ValidationError("identification distance must be a non-negative real");
  }
  if (config.cooperative_action >= config.game.num_actions(0)) {
    throw ValidationError("cooperative action index out of range");
  }
  for (double c : config.strata) {
    if (!in_unit(c)) throw ValidationError("stratum centre outside [0, 1]");
  }
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          if (!in_unit(d.gamma)) throw ValidationError("initial gamma outside [0, 1]");
        } else if constexpr (std::is_same_v<T, TwoPoint>) {
          if (!in_unit(d.resident_gamma) || !in_unit(d.invader_gamma)) {
            throw ValidationError("resident and invader gammas must lie in [0, 1]");
          }
          if (!(d.invader_fraction > 0.0 && d.invader_fraction < 1.0)) {
            throw ValidationError("invader fraction must lie in (0, 1)");
          }
        } else {
          if (!(in_unit(d.low) && in_unit(d.high) && d.low <= d.high)) {
            throw ValidationError("uniform gamma range must satisfy 0 <= low <= high <= 1");
          }
        }
      },
      config.initial);
}

std::vector<std::size_t> best_actions(const Game& game, std::size_t role, double gamma, double distance) {
  const SenseOfSelf self = mutual_identification(game, role, gamma, distance);
  const std::vector<double> eu = expected_utilities(game, self, role);
  const double best = *std::max_element(eu.begin(), eu.end());
  const double tol = tie_tolerance(game);
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < eu.size(); ++a) {
    if (eu[a] >= best - tol) ties.push_back(a);
  }
  return ties;
}

std::size_t choose_action(const Game& game, std::size_t role, const AgentSpec& agent, double distance,
                          std::mt19937_64& rng) {
  const auto ties = best_actions(game, role, agent.gamma, distance);
  if (ties.size() == 1) return ties.front();
  return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
}

Population init_population(const EvolveConfig& config) {
  validate(config);
  Population pop;
  pop.seed = config.seed;
  const std::size_t n = config.population_size;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          pop.agents.assign(n, AgentSpec{d.gamma});
        } else if constexpr (std::is_same_v<T, TwoPoint>) {
          const double quota[2] = {static_cast<double>(n) * (1.0 - d.invader_fraction),
                                   static_cast<double>(n) * d.invader_fraction};
          std::size_t count[2];
          double rem[2];
          for (int i = 0; i < 2; ++i) {
            count[i] = static_cast<std::size_t>(std::floor(quota[i] + 1e-9));
            rem[i] = quota[i] - static_cast<double>(count[i]);
          }
          for (std::size_t left = n - count[0] - count[1]; left > 0; --left) {
            const int i = rem[1] > rem[0] ? 1 : 0;
            ++count[i];
            rem[i] = -1.0;
          }
          if (count[0] == 0 || count[1] == 0) {
            throw ValidationError("invader fraction leaves no residents or no invaders at this population size");
          }
          pop.agents.assign(count[0], AgentSpec{d.resident_gamma});
          pop.agents.insert(pop.agents.end(), count[1], AgentSpec{d.invader_gamma});
        } else {
          auto rng = make_stream(config.seed, {kInitStream});
          std::uniform_real_distribution<double> draw(d.low, d.high);
          for (std::size_t i = 0; i < n; ++i) pop.agents.push_back(AgentSpec{std::clamp(draw(rng), d.low, d.high)});
        }
      },
      config.initial);
  return pop;
}

std::vector<double> strata_for(const EvolveConfig& config) {
  if (!config.strata.empty()) return config.strata;
  if (const auto* p = std::get_if<PointMass>(&config.initial)) return {p->gamma};
  if (const auto* t = std::get_if<TwoPoint>(&config.initial)) {
    if (t->resident_gamma == t->invader_gamma) return {t->resident_gamma};
    return {t->resident_gamma, t->invader_gamma};
  }
  return {};
}

GenerationOutcome step(const Population& population, const EvolveConfig& config) {
  const std::size_t n = population.agents.size();
  if (n < 2) throw ValidationError("population must hold at least two agents");
  for (const auto& a : population.agents) {
    if (!in_unit(a.gamma)) throw ValidationError("agent gamma outside [0, 1]");
  }
  const Game& game = config.game;
  auto rng = make_stream(population.seed, {population.generation});

  GenerationOutcome out;
  out.payoff_sums.assign(n, 0.0);
  out.games_per_agent.assign(n, 0);

  std::map<std::pair<std::size_t, double>, std::vector<std::size_t>> rule_cache;
  auto decide = [&](std::size_t role, double gamma, std::mt19937_64& coin) {
    auto key = std::make_pair(role, gamma);
    auto it = rule_cache.find(key);
    if (it == rule_cache.end()) {
      it = rule_cache.emplace(key, best_actions(game, role, gamma, config.identification_distance)).first;
    }
    const auto& ties = it->second;
    if (ties.size() == 1) return ties.front();
    return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(coin)];
  };

  const auto pairs = make_pairs(population, config, rng);
  std::size_t cooperative_moves = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    auto coin = make_stream(population.seed, {population.generation, k, kCoinStream});
    PlayedGame g;
    g.first = i;
    g.second = j;
    g.first_action = decide(0, population.agents[i].gamma, coin);
    g.second_action = decide(1, population.agents[j].gamma, coin);
    const Outcome o{{g.first_action, g.second_action}};
    g.first_payoff = game.payoff(o, 0);
    g.second_payoff = game.payoff(o, 1);
    out.payoff_sums[i] += g.first_payoff;
    out.payoff_sums[j] += g.second_payoff;
    ++out.games_per_agent[i];
    ++out.games_per_agent[j];
    cooperative_moves += (g.first_action == config.cooperative_action) + (g.second_action == config.cooperative_action);
    out.games.push_back(g);
  }

  std::vector<double> fitness(n);
  for (std::size_t i = 0; i < n; ++i) fitness[i] = out.payoff_sums[i] / static_cast<double>(out.games_per_agent[i]);

  // Statistics describe the generation as played.
  GenerationStats& st = out.stats;
  st.generation = population.generation;
  st.games_played = out.games.size();
  st.coop_freq = static_cast<double>(cooperative_moves) / static_cast<double>(2 * out.games.size());
  st.total_payoff = std::accumulate(out.payoff_sums.begin(), out.payoff_sums.end(), 0.0);
  st.min_gamma = std::numeric_limits<double>::infinity();
  st.max_gamma = -std::numeric_limits<double>::infinity();
  double gamma_sum = 0.0;
  for (const auto& a : population.agents) {
    gamma_sum += a.gamma;
    st.min_gamma = std::min(st.min_gamma, a.gamma);
    st.max_gamma = std::max(st.max_gamma, a.gamma);
  }
  st.mean_gamma = gamma_sum / static_cast<double>(n);
  st.mean_fitness = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(n);

  const std::vector<double> centres = strata_for(config);
  if (!centres.empty()) {
    std::vector<std::size_t> count(centres.size(), 0);
    std::vector<double> fit(centres.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = nearest_stratum(centres, population.agents[i].gamma);
      ++count[s];
      fit[s] += fitness[i];
    }
    for (std::size_t s = 0; s < centres.size(); ++s) {
      StratumStats ss;
      ss.centre = centres[s];
      ss.share = static_cast<double>(count[s]) / static_cast<double>(n);
      if (count[s]) ss.mean_fitness = fit[s] / static_cast<double>(count[s]);
      st.strata.push_back(ss);
    }
  }

  // Selection on raw payoff, shifted so every weight is positive.
  const double lowest = *std::min_element(fitness.begin(), fitness.end());
  const double eps = 1e-9 * std::max(1.0, game.scale());
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = fitness[i] - lowest + eps;

  Population next;
  next.seed = population.seed;
  next.generation = population.generation + 1;
  if (config.update == UpdateRule::kRoulette) {
    std::discrete_distribution<std::size_t> parent(weights.begin(), weights.end());
    next.agents.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = parent(rng);
      next.agents.push_back(AgentSpec{mutate(population.agents[p].gamma, config, rng)});
    }
  } else {
    next.agents = population.agents;
    std::uniform_int_distribution<std::size_t> victim(0, n - 1);
    for (std::size_t event = 0; event < n; ++event) {
      std::discrete_distribution<std::size_t> parent(weights.begin(), weights.end());
      const std::size_t p = parent(rng);
      const std::size_t v = victim(rng);
      next.agents[v] = AgentSpec{mutate(next.agents[p].gamma, config, rng)};
      weights[v] = weights[p];
    }
  }
  out.next = std::move(next);
  return out;
}

Trajectory run(const EvolveConfig& config) {
  Trajectory traj;
  traj.strata = strata_for(config);
  Population pop = init_population(config);
  traj.generations.reserve(config.generations);
  for (std::size_t g = 0; g < config.generations; ++g) {
    GenerationOutcome out = step(pop, config);
    traj.generations.push_back(std::move(out.stats));
    pop = std::move(out.next);
  }
  traj.final_population = std::move(pop);
  return traj;
}

InvasionResult invasion_experiment(double resident_gamma, double invader_gamma, double invader_fraction,
                                   EvolveConfig config) {
  if (!(invader_fraction > 0.0 && invader_fraction < 1.0)) {
    throw ValidationError("invader fraction must lie in (0, 1)");
  }
  if (!in_unit(resident_gamma) || !in_unit(invader_gamma)) {
    throw ValidationError("resident and invader gammas must lie in [0, 1]");
  }
  if (resident_gamma == invader_gamma) throw ValidationError("resident and invader gammas must differ");
  config.initial = TwoPoint{resident_gamma, invader_gamma, invader_fraction};
  config.strata = {resident_gamma, invader_gamma};

  InvasionResult result;
  result.resident_gamma = resident_gamma;
  result.invader_gamma = invader_gamma;
  result.trajectory = run(config);

  const Population initial = init_population(config);
  const auto share_of_invaders = [&](const Population& pop) {
    std::size_t invaders = 0;
    for (const auto& a : pop.agents) invaders += nearest_stratum(config.strata, a.gamma) == 1;
    return static_cast<double>(invaders) / static_cast<double>(pop.agents.size());
  };
  result.initial_invader_share = share_of_invaders(initial);
  result.final_invader_share = share_of_invaders(result.trajectory.final_population);
  result.final_resident_share = 1.0 - result.final_invader_share;
  result.invaders_grew = result.final_invader_share > result.initial_invader_share;
  return result;
}

}  // namespace elastic
