#include "elastic/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "elastic/errors.hpp"

namespace elastic {
namespace {

int sign_with_tolerance(double value, double tol) {
  if (value > tol) return 1;
  if (value < -tol) return -1;
  return 0;
}

struct Root {
  double gamma;
  int direction;
};

// Brackets sign changes of `f` over `grid` (values within `tie` count as zero)
// and refines each by bisection.
std::vector<Root> bracket_roots(const std::function<double(double)>& f, std::span<const double> grid,
                                std::span<const double> values, double tie, double tolerance) {
  std::vector<Root> roots;
  std::optional<std::size_t> last;
  int last_sign = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const int s = sign_with_tolerance(values[k], tie);
    if (s == 0) continue;
    if (last && s != last_sign) {
      double lo = grid[*last];
      double hi = grid[k];
      while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double d = f(mid);
        if ((d > 0 ? 1 : (d < 0 ? -1 : 0)) == last_sign) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back({0.5 * (lo + hi), s});
    }
    last = k;
    last_sign = s;
  }
  return roots;
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("gamma grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) throw ValidationError("gamma grid point outside [0, 1]");
    if (k && !(grid[k] > grid[k - 1])) throw ValidationError("gamma grid must be strictly increasing");
  }
}

double action_difference(const Game& game, const SenseOfSelf& self, std::size_t player, std::size_t a,
                         std::size_t b, const PayoffResolver& resolver, double gamma) {
  const SenseOfSelf at = self.with_gamma(gamma);
  return expected_utility(game, at, player, a, resolver) - expected_utility(game, at, player, b, resolver);
}

}  // namespace

double tie_tolerance(const Game& game) { return kTieTolerance * game.scale(); }

double expected_utility(const Game& game, const SenseOfSelf& self, std::size_t player, std::size_t action,
                        const PayoffResolver& resolver) {
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  if (action >= game.num_actions(player)) {
    throw ValidationError("action index out of range for player '" + game.player(player) + "'");
  }
  if (self.owner() != game.player(player)) {
    throw ValidationError("sense of self belongs to '" + self.owner() + "', not '" + game.player(player) + "'");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    const Outcome o = game.outcome_at(i);
    if (o[player] != action) continue;
    sum += derived_utility(self, game, o, resolver);
    ++count;
  }
  return sum / static_cast<double>(count);
}

std::vector<double> expected_utilities(const Game& game, const SenseOfSelf& self, std::size_t player,
                                       const PayoffResolver& resolver) {
  std::vector<double> eu;
  for (std::size_t a = 0; a < game.num_actions(player); ++a) {
    eu.push_back(expected_utility(game, self, player, a, resolver));
  }
  return eu;
}

GridSpec parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  for (std::size_t pos = 0;;) {
    const std::size_t end = text.find(':', pos);
    parts.push_back(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (parts.size() != 3) throw ParseError("grid must be start:stop:step, got '" + std::string(text) + "'");
  double values[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string_view field = parts[i];
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), values[i]);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError("grid: bad number '" + std::string(field) + "'");
    }
  }
  return {values[0], values[1], values[2]};
}

std::vector<double> make_grid(const GridSpec& spec) {
  if (!(spec.step > 0.0) || !std::isfinite(spec.step)) throw ValidationError("grid step must be positive");
  if (!(spec.start >= 0.0 && spec.stop <= 1.0 && spec.start <= spec.stop)) {
    throw ValidationError("grid must satisfy 0 <= start <= stop <= 1");
  }
  const double span = spec.stop - spec.start;
  const auto n = static_cast<std::size_t>(std::floor(span / spec.step * (1.0 + 1e-12) + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(std::min(spec.start + static_cast<double>(k) * spec.step, spec.stop));
  if (spec.stop - grid.back() > spec.step * 1e-6) {
    grid.push_back(spec.stop);
  } else {
    grid.back() = spec.stop;
  }
  if (grid.size() > 1 && !(grid.back() > grid[grid.size() - 2])) grid.erase(grid.end() - 2);
  return grid;
}

SweepResult gamma_sweep(const Game& game, std::size_t player, double other_distance, std::span<const double> grid,
                        double tolerance) {
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  SweepResult result =
      gamma_sweep(game, mutual_identification(game, player, 0.0, other_distance), player, grid, tolerance);
  result.other_distance = other_distance;
  return result;
}

SweepResult gamma_sweep(const Game& game, const SenseOfSelf& self, std::size_t player, std::span<const double> grid,
                        double tolerance, const PayoffResolver& resolver) {
  check_grid(grid);
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");

  SweepResult result;
  result.player = player;
  result.gamma_grid.assign(grid.begin(), grid.end());
  for (double g : grid) result.expected_utilities.push_back(expected_utilities(game, self.with_gamma(g), player, resolver));

  const std::size_t n = game.num_actions(player);
  const double tie = tie_tolerance(game);
  std::vector<double> diffs(grid.size());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        diffs[k] = result.expected_utilities[k][a] - result.expected_utilities[k][b];
      }
      auto f = [&](double g) { return action_difference(game, self, player, a, b, resolver, g); };
      for (const Root& r : bracket_roots(f, grid, diffs, tie, tolerance)) {
        result.crossovers.push_back({a, b, r.gamma, r.direction});
      }
    }
  }
  return result;
}

std::optional<CrossoverResult> crossover_gamma(const Game& game, std::size_t player,
                                               std::pair<std::size_t, std::size_t> actions, double tolerance,
                                               double other_distance, std::size_t scan_points) {
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  return crossover_gamma(game, mutual_identification(game, player, 0.0, other_distance), player, actions, tolerance,
                         scan_points);
}

std::optional<CrossoverResult> crossover_gamma(const Game& game, const SenseOfSelf& self, std::size_t player,
                                               std::pair<std::size_t, std::size_t> actions, double tolerance,
                                               std::size_t scan_points, const PayoffResolver& resolver) {
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (scan_points < 2) throw ValidationError("crossover scan needs at least 2 points");
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  const auto [a, b] = actions;
  if (a >= game.num_actions(player) || b >= game.num_actions(player)) {
    throw ValidationError("action index out of range for player '" + game.player(player) + "'");
  }

  std::vector<double> grid(scan_points);
  for (std::size_t k = 0; k < scan_points; ++k) {
    grid[k] = static_cast<double>(k) / static_cast<double>(scan_points - 1);
  }
  auto f = [&](double g) { return action_difference(game, self, player, a, b, resolver, g); };
  std::vector<double> diffs(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) diffs[k] = f(grid[k]);

  const auto roots = bracket_roots(f, grid, diffs, tie_tolerance(game), tolerance);
  if (roots.empty()) return std::nullopt;
  CrossoverResult result;
  result.gamma = roots.front().gamma;
  result.direction = roots.front().direction;
  result.multiple = roots.size() > 1;
  for (const Root& r : roots) result.roots.push_back(r.gamma);
  return result;
}

double find_threshold(const std::function<bool(double)>& pred, double lo, double hi, double tolerance) {
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  const bool at_lo = pred(lo);
  if (at_lo == pred(hi)) throw NumericError("indicator does not change between the bracket ends");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Outcome> pure_nash(const Game& game) {
  const double tol = tie_tolerance(game);
  std::vector<Outcome> equilibria;
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    const Outcome o = game.outcome_at(i);
    bool stable = true;
    for (std::size_t p = 0; p < game.num_players() && stable; ++p) {
      const double current = game.payoff(o, p);
      Outcome dev = o;
      for (std::size_t b = 0; b < game.num_actions(p) && stable; ++b) {
        if (b == o[p]) continue;
        dev.actions[p] = b;
        if (game.payoff(dev, p) > current + tol) stable = false;
      }
    }
    if (stable) equilibria.push_back(o);
  }
  return equilibria;
}

std::optional<std::size_t> strictly_dominant(const Game& game, std::size_t player) {
  if (player >= game.num_players()) throw ValidationError("player index out of range");
  const double tol = tie_tolerance(game);
  const std::size_t n = game.num_actions(player);
  for (std::size_t a = 0; a < n; ++a) {
    bool dominates = true;
    for (std::size_t i = 0; i < game.num_outcomes() && dominates; ++i) {
      Outcome o = game.outcome_at(i);
      if (o[player] != a) continue;
      const double mine = game.payoff(o, player);
      for (std::size_t b = 0; b < n && dominates; ++b) {
        if (b == a) continue;
        o.actions[player] = b;
        if (!(mine > game.payoff(o, player) + tol)) dominates = false;
      }
    }
    if (dominates) return a;
  }
  return std::nullopt;
}

std::vector<Outcome> pareto_frontier(const Game& game) {
  const double tol = tie_tolerance(game);
  const std::size_t n = game.num_players();
  auto dominated_by = [&](std::span<const double> x, std::span<const double> y) {
    bool strictly = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (y[p] < x[p] - tol) return false;
      if (y[p] > x[p] + tol) strictly = true;
    }
    return strictly;
  };
  std::vector<Outcome> frontier;
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    const auto x = game.payoffs_at(i);
    bool dominated = false;
    for (std::size_t j = 0; j < game.num_outcomes() && !dominated; ++j) {
      if (j != i && dominated_by(x, game.payoffs_at(j))) dominated = true;
    }
    if (!dominated) frontier.push_back(game.outcome_at(i));
  }
  return frontier;
}

std::vector<Outcome> altruist_attractors(const Game& game, std::size_t player) {
  if (game.num_players() != 2) throw ValidationError("altruist attractors are defined for two-player games");
  if (player >= 2) throw ValidationError("player index out of range");
  const std::size_t other = 1 - player;
  const double tol = tie_tolerance(game);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) best = std::max(best, game.payoffs_at(i)[other]);
  std::vector<Outcome> result;
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    if (game.payoffs_at(i)[other] >= best - tol) result.push_back(game.outcome_at(i));
  }
  return result;
}

GameReport analyze_game(const Game& game) {
  GameReport report;
  report.pure_nash = pure_nash(game);
  for (std::size_t p = 0; p < game.num_players(); ++p) report.strictly_dominant.push_back(strictly_dominant(game, p));
  report.pareto_frontier = pareto_frontier(game);
  if (game.num_players() == 2) {
    for (std::size_t p = 0; p < 2; ++p) report.altruist_attractors.push_back(altruist_attractors(game, p));
  }
  return report;
}

}  // namespace elastic
