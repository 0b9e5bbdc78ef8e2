#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elastic/game.hpp"
#include "elastic/identity.hpp"

namespace elastic {

// Relative tolerance for payoff ties: values closer than kTieTolerance * scale
// compare equal, where scale is the largest absolute payoff of the game.
inline constexpr double kTieTolerance = 1e-12;

double tie_tolerance(const Game& game);

// --- expected utility under uniform beliefs --------------------------------

// Mean derived utility of `player` choosing `action`, with the opponents'
// joint actions equally likely. `self.owner()` must be `player`.
double expected_utility(const Game& game, const SenseOfSelf& self, std::size_t player, std::size_t action,
                        const PayoffResolver& resolver = {});

// One value per action of `player`.
std::vector<double> expected_utilities(const Game& game, const SenseOfSelf& self, std::size_t player,
                                       const PayoffResolver& resolver = {});

// --- gamma grids and sweeps -------------------------------------------------

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;
};

// Parses "start:stop:step". Throws ParseError on malformed text.
GridSpec parse_grid(std::string_view text);

// start, start+step, ... up to stop (stop included when within step/1e6).
// Throws ValidationError unless 0 <= start <= stop <= 1 and step > 0.
std::vector<double> make_grid(const GridSpec& spec);

struct Crossover {
  std::size_t first_action = 0;
  std::size_t second_action = 0;
  double gamma = 0.0;
  // +1 when E(first) - E(second) goes from negative to positive as gamma
  // grows (first overtakes second), -1 for the opposite.
  int direction = 0;

  bool operator==(const Crossover&) const = default;
};

struct SweepResult {
  std::size_t player = 0;
  // Distance of the other players for mutual sweeps; empty for a custom identity set.
  std::optional<double> other_distance;
  std::vector<double> gamma_grid;
  // expected_utilities[k][a]: E(action a) at gamma_grid[k].
  std::vector<std::vector<double>> expected_utilities;
  // Every bracketed root for every action pair, ordered by pair then gamma.
  std::vector<Crossover> crossovers;
};

// Evaluates the expected utility of every action of `player` on `grid`, with
// the player identifying with all other players at `other_distance`, and
// refines each sign change of each pairwise difference by bisection.
// Throws ValidationError on an empty, unsorted, or out-of-range grid.
SweepResult gamma_sweep(const Game& game, std::size_t player, double other_distance, std::span<const double> grid,
                        double tolerance = 1e-9);

// Same, for an arbitrary identity set: `self` fixes the members and distances,
// its gamma is replaced by each grid value.
SweepResult gamma_sweep(const Game& game, const SenseOfSelf& self, std::size_t player, std::span<const double> grid,
                        double tolerance = 1e-9, const PayoffResolver& resolver = {});

struct CrossoverResult {
  double gamma = 0.0;
  int direction = 0;
  // More than one sign change was found on the scan grid; `gamma` is the smallest root.
  bool multiple = false;
  std::vector<double> roots;
};

// Smallest gamma in [0, 1] where E(first) - E(second) changes sign, or nullopt.
// Coarse scan on `scan_points` evenly spaced points, then bisection to `tolerance`.
std::optional<CrossoverResult> crossover_gamma(const Game& game, std::size_t player,
                                               std::pair<std::size_t, std::size_t> actions, double tolerance,
                                               double other_distance = 1.0, std::size_t scan_points = 101);

// Identity sets with members at different distances can cross more than once.
std::optional<CrossoverResult> crossover_gamma(const Game& game, const SenseOfSelf& self, std::size_t player,
                                               std::pair<std::size_t, std::size_t> actions, double tolerance,
                                               std::size_t scan_points = 101, const PayoffResolver& resolver = {});

// Bisection on a boolean indicator with pred(lo) != pred(hi). Returns the
// midpoint of a final bracket no wider than `tolerance`.
double find_threshold(const std::function<bool(double)>& pred, double lo, double hi, double tolerance);

// --- equilibrium and efficiency --------------------------------------------

// Outcomes where no player can strictly (beyond the tie tolerance) improve its
// own payoff by deviating alone. Returned in row-major order.
std::vector<Outcome> pure_nash(const Game& game);

// The action strictly better than every other action against every joint
// action of the opponents. A player with a single action has it trivially.
std::optional<std::size_t> strictly_dominant(const Game& game, std::size_t player);

// Outcomes not Pareto-dominated: no other outcome is at least as good for all
// players and strictly better for one.
std::vector<Outcome> pareto_frontier(const Game& game);

// Two-player games only: the outcomes maximizing the other player's payoff,
// i.e. what a pure altruist in the role of `player` is drawn to.
std::vector<Outcome> altruist_attractors(const Game& game, std::size_t player);

struct GameReport {
  std::vector<Outcome> pure_nash;
  std::vector<std::optional<std::size_t>> strictly_dominant;  // per player
  std::vector<Outcome> pareto_frontier;
  std::vector<std::vector<Outcome>> altruist_attractors;  // per player; empty unless 2 players
};

GameReport analyze_game(const Game& game);

}  // namespace elastic
