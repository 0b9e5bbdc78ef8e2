#include "elastic/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "elastic/errors.hpp"

namespace elastic {
namespace {

std::string describe(const Outcome& outcome) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (i) out << ", ";
    out << outcome[i];
  }
  out << ')';
  return out.str();
}

void check_labels(const std::vector<std::string>& players,
                  const std::vector<std::vector<std::string>>& actions) {
  if (players.empty()) throw ValidationError("game needs at least one player");
  if (actions.size() != players.size()) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << players.size() << " players but " << actions.size()
        << " action lists";
    throw ValidationError(msg.str());
  }
  std::set<std::string> seen;
  for (const auto& p : players) {
    if (!seen.insert(p).second) throw ValidationError("duplicate player '" + p + "'");
  }
  for (std::size_t p = 0; p < players.size(); ++p) {
    if (actions[p].empty()) throw ValidationError("player '" + players[p] + "' has no actions");
    std::set<std::string> labels;
    for (const auto& a : actions[p]) {
      if (!labels.insert(a).second) {
        throw ValidationError("duplicate action '" + a + "' for player '" + players[p] + "'");
      }
    }
  }
}

std::size_t product_of_sizes(const std::vector<std::vector<std::string>>& actions) {
  std::size_t n = 1;
  for (const auto& a : actions) n *= a.size();
  return n;
}

}  // namespace

std::size_t Game::player_index(std::string_view name) const {
  auto it = std::find(players_.begin(), players_.end(), name);
  if (it == players_.end()) throw ValidationError("unknown player '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - players_.begin());
}

bool Game::has_player(std::string_view name) const {
  return std::find(players_.begin(), players_.end(), name) != players_.end();
}

std::size_t Game::action_index(std::size_t player, std::string_view label) const {
  const auto& acts = actions_.at(player);
  auto it = std::find(acts.begin(), acts.end(), label);
  if (it == acts.end()) {
    throw ValidationError("unknown action '" + std::string(label) + "' for player '" +
                          players_[player] + "'");
  }
  return static_cast<std::size_t>(it - acts.begin());
}

void Game::check_outcome(const Outcome& outcome) const {
  if (outcome.size() != players_.size()) {
    throw ValidationError("outcome " + describe(outcome) + " has wrong arity");
  }
  for (std::size_t p = 0; p < outcome.size(); ++p) {
    if (outcome[p] >= actions_[p].size()) {
      throw ValidationError("outcome " + describe(outcome) + ": action index out of range for player '" +
                            players_[p] + "'");
    }
  }
}

std::size_t Game::outcome_index(const Outcome& outcome) const {
  check_outcome(outcome);
  std::size_t index = 0;
  for (std::size_t p = 0; p < outcome.size(); ++p) index = index * actions_[p].size() + outcome[p];
  return index;
}

Outcome Game::outcome_at(std::size_t index) const {
  if (index >= num_outcomes_) throw ValidationError("outcome index out of range");
  Outcome out;
  out.actions.resize(players_.size());
  for (std::size_t p = players_.size(); p-- > 0;) {
    out.actions[p] = index % actions_[p].size();
    index /= actions_[p].size();
  }
  return out;
}

std::vector<Outcome> Game::outcomes() const {
  std::vector<Outcome> all;
  all.reserve(num_outcomes_);
  for (std::size_t i = 0; i < num_outcomes_; ++i) all.push_back(outcome_at(i));
  return all;
}

double Game::payoff(const Outcome& outcome, std::size_t player) const {
  if (player >= players_.size()) throw ValidationError("player index out of range");
  return values_[outcome_index(outcome) * players_.size() + player];
}

std::span<const double> Game::payoffs(const Outcome& outcome) const {
  return payoffs_at(outcome_index(outcome));
}

std::span<const double> Game::payoffs_at(std::size_t index) const {
  if (index >= num_outcomes_) throw ValidationError("outcome index out of range");
  return std::span<const double>(values_).subspan(index * players_.size(), players_.size());
}

double Game::scale() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

std::string Game::outcome_label(const Outcome& outcome) const {
  check_outcome(outcome);
  bool compact = true;
  for (std::size_t p = 0; p < outcome.size(); ++p) compact = compact && actions_[p][outcome[p]].size() == 1;
  std::string label;
  for (std::size_t p = 0; p < outcome.size(); ++p) {
    if (p && !compact) label += '/';
    label += actions_[p][outcome[p]];
  }
  return label;
}

Game make_game(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
               std::span<const PayoffEntry> payoffs) {
  check_labels(players, actions);
  const std::size_t n = players.size();
  const std::size_t total = product_of_sizes(actions);

  Game g;
  g.players_ = std::move(players);
  g.actions_ = std::move(actions);
  g.num_outcomes_ = total;
  g.values_.assign(total * n, 0.0);

  std::vector<bool> filled(total, false);
  for (std::size_t r = 0; r < payoffs.size(); ++r) {
    const auto& entry = payoffs[r];
    const std::string where = "payoff record " + std::to_string(r) + " " + describe(entry.outcome);
    if (entry.outcome.size() != n) throw ValidationError(where + ": outcome arity differs from player count");
    for (std::size_t p = 0; p < n; ++p) {
      if (entry.outcome[p] >= g.actions_[p].size()) {
        throw ValidationError(where + ": action index out of range for player '" + g.players_[p] + "'");
      }
    }
    if (entry.values.size() != n) {
      throw ValidationError(where + ": expected " + std::to_string(n) + " values, got " +
                            std::to_string(entry.values.size()));
    }
    const std::size_t idx = g.outcome_index(entry.outcome);
    if (filled[idx]) throw ValidationError(where + ": duplicate outcome");
    for (std::size_t p = 0; p < n; ++p) {
      if (!std::isfinite(entry.values[p])) {
        throw ValidationError(where + ": non-finite payoff for player '" + g.players_[p] + "'");
      }
      g.values_[idx * n + p] = entry.values[p];
    }
    filled[idx] = true;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (!filled[i]) throw ValidationError("missing outcome " + describe(g.outcome_at(i)));
  }
  return g;
}

Game make_dense_game(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
                     std::vector<double> values) {
  check_labels(players, actions);
  const std::size_t total = product_of_sizes(actions);
  if (values.size() != total * players.size()) {
    throw ValidationError("dimension mismatch: expected " + std::to_string(total * players.size()) +
                          " payoff values, got " + std::to_string(values.size()));
  }
  Game g;
  g.players_ = std::move(players);
  g.actions_ = std::move(actions);
  g.num_outcomes_ = total;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("non-finite payoff at outcome " + describe(g.outcome_at(i / g.players_.size())) +
                            ", player '" + g.players_[i % g.players_.size()] + "'");
    }
  }
  g.values_ = std::move(values);
  return g;
}

Game prisoners_dilemma(double reward, double sucker, double temptation, double punishment) {
  return make_dense_game({"A", "B"}, {{"C", "D"}, {"C", "D"}},
                         {reward, reward, sucker, temptation, temptation, sucker, punishment, punishment});
}

Game reference_prisoners_dilemma() { return prisoners_dilemma(6, 0, 10, 1); }

double payoff(const Game& game, const Outcome& outcome, std::string_view player) {
  return game.payoff(outcome, game.player_index(player));
}

}  // namespace elastic
