#include "elastic/game_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "elastic/errors.hpp"
#include "json_util.hpp"

namespace elastic {

using nlohmann::json;
using detail::as_number;
using detail::as_string;
using detail::require;

Game parse_game(std::string_view text) {
  const json doc = detail::parse_json(text, "game");
  if (!doc.is_object()) throw ValidationError("game: top level must be an object");

  const json& jplayers = require(doc, "players", "game");
  if (!jplayers.is_array()) throw ValidationError("players: expected a list");
  std::vector<std::string> players;
  for (std::size_t i = 0; i < jplayers.size(); ++i) {
    players.push_back(as_string(jplayers[i], "players[" + std::to_string(i) + "]"));
  }

  const json& jactions = require(doc, "actions", "game");
  if (!jactions.is_object()) throw ValidationError("actions: expected a mapping player -> list");
  std::vector<std::vector<std::string>> actions;
  for (const auto& name : players) {
    const std::string path = "actions." + name;
    auto it = jactions.find(name);
    if (it == jactions.end()) throw ValidationError(path + ": missing action list");
    if (!it->is_array()) throw ValidationError(path + ": expected a list");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < it->size(); ++i) {
      labels.push_back(as_string((*it)[i], path + "[" + std::to_string(i) + "]"));
    }
    actions.push_back(std::move(labels));
  }
  for (const auto& [key, _] : jactions.items()) {
    if (std::find(players.begin(), players.end(), key) == players.end()) {
      throw ValidationError("actions." + key + ": not a declared player");
    }
  }

  const json& jpayoffs = require(doc, "payoffs", "game");
  if (!jpayoffs.is_array()) throw ValidationError("payoffs: expected a list");
  std::vector<PayoffEntry> entries;
  entries.reserve(jpayoffs.size());
  for (std::size_t r = 0; r < jpayoffs.size(); ++r) {
    const std::string path = "payoffs[" + std::to_string(r) + "]";
    const json& joutcome = require(jpayoffs[r], "outcome", path);
    const json& jvalues = require(jpayoffs[r], "values", path);
    if (!joutcome.is_array() || joutcome.size() != players.size()) {
      throw ValidationError(path + ".outcome: expected " + std::to_string(players.size()) + " action labels");
    }
    PayoffEntry entry;
    for (std::size_t p = 0; p < players.size(); ++p) {
      const std::string label = as_string(joutcome[p], path + ".outcome[" + std::to_string(p) + "]");
      auto it = std::find(actions[p].begin(), actions[p].end(), label);
      if (it == actions[p].end()) {
        throw ValidationError(path + ".outcome[" + std::to_string(p) + "]: unknown action '" + label +
                              "' for player '" + players[p] + "'");
      }
      entry.outcome.actions.push_back(static_cast<std::size_t>(it - actions[p].begin()));
    }
    if (!jvalues.is_array()) throw ValidationError(path + ".values: expected a list");
    for (std::size_t p = 0; p < jvalues.size(); ++p) {
      entry.values.push_back(as_number(jvalues[p], path + ".values[" + std::to_string(p) + "]"));
    }
    entries.push_back(std::move(entry));
  }
  return make_game(std::move(players), std::move(actions), entries);
}

std::string serialize_game(const Game& game) {
  nlohmann::ordered_json doc;
  doc["players"] = game.players();
  nlohmann::ordered_json jactions = nlohmann::ordered_json::object();
  for (std::size_t p = 0; p < game.num_players(); ++p) jactions[game.player(p)] = game.actions(p);
  doc["actions"] = std::move(jactions);
  nlohmann::ordered_json jpayoffs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    const Outcome o = game.outcome_at(i);
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < game.num_players(); ++p) labels.push_back(game.actions(p)[o[p]]);
    auto values = game.payoffs_at(i);
    jpayoffs.push_back({{"outcome", std::move(labels)}, {"values", std::vector<double>(values.begin(), values.end())}});
  }
  doc["payoffs"] = std::move(jpayoffs);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Game load_game(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_game(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace elastic
