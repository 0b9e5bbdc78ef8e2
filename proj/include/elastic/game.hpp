#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elastic {

// One action index per player, in player order.
struct Outcome {
  std::vector<std::size_t> actions;

  std::size_t operator[](std::size_t player) const { return actions[player]; }
  std::size_t size() const { return actions.size(); }

  auto operator<=>(const Outcome&) const = default;
};

// A payoff record as it appears in input: the outcome and one value per player.
struct PayoffEntry {
  Outcome outcome;
  std::vector<double> values;
};

// Finite N-player normal-form game with real payoffs. Immutable once built;
// construct through make_game() or the named factories below.
//
// Outcomes are enumerated row-major over players in declared order: the first
// player's action is the most significant digit, so a 2x2 game enumerates
// (0,0), (0,1), (1,0), (1,1).
class Game {
 public:
  std::size_t num_players() const { return players_.size(); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player(std::size_t index) const { return players_.at(index); }

  std::size_t num_actions(std::size_t player) const { return actions_.at(player).size(); }
  const std::vector<std::vector<std::string>>& actions() const { return actions_; }
  const std::vector<std::string>& actions(std::size_t player) const { return actions_.at(player); }

  std::size_t num_outcomes() const { return num_outcomes_; }

  // Throws ValidationError when the name is unknown.
  std::size_t player_index(std::string_view name) const;
  std::size_t action_index(std::size_t player, std::string_view label) const;
  bool has_player(std::string_view name) const;

  // Row-major position of an outcome; throws ValidationError if out of range.
  std::size_t outcome_index(const Outcome& outcome) const;
  Outcome outcome_at(std::size_t index) const;
  std::vector<Outcome> outcomes() const;

  // Raw payoff o_i of `player` in `outcome`.
  double payoff(const Outcome& outcome, std::size_t player) const;
  std::span<const double> payoffs(const Outcome& outcome) const;
  std::span<const double> payoffs_at(std::size_t outcome_index) const;

  // Largest absolute payoff; the reference scale for tie tolerances.
  double scale() const;

  // "CD" when every label is a single character, "Cooperate/Defect" otherwise.
  std::string outcome_label(const Outcome& outcome) const;

  bool operator==(const Game&) const = default;

 private:
  friend Game make_game(std::vector<std::string>, std::vector<std::vector<std::string>>,
                        std::span<const PayoffEntry>);
  friend Game make_dense_game(std::vector<std::string>, std::vector<std::vector<std::string>>,
                              std::vector<double>);

  Game() = default;
  void check_outcome(const Outcome& outcome) const;

  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> actions_;
  std::size_t num_outcomes_ = 0;
  // num_outcomes_ x num_players, row-major by outcome index.
  std::vector<double> values_;
};

// Builds and validates a game from sparse payoff records. Every outcome of the
// Cartesian product must appear exactly once. Errors name the offending
// record or coordinate.
Game make_game(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
               std::span<const PayoffEntry> payoffs);

// `values` holds num_outcomes * num_players doubles in row-major outcome order.
Game make_dense_game(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
                     std::vector<double> values);

// Symmetric two-player game, players "A" and "B", actions [C, D]:
// CC -> (R,R), CD -> (S,T), DC -> (T,S), DD -> (P,P).
// The usual ordering T > R > P > S is not enforced.
Game prisoners_dilemma(double reward, double sucker, double temptation, double punishment);

// prisoners_dilemma(6, 0, 10, 1).
Game reference_prisoners_dilemma();

// Free-function accessor: raw payoff of the named player.
double payoff(const Game& game, const Outcome& outcome, std::string_view player);

}  // namespace elastic
