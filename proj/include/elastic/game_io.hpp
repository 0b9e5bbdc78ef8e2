#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "elastic/game.hpp"

namespace elastic {

// Game files are JSON documents (// and /* */ comments allowed):
//
//   {
//     "players": ["A", "B"],
//     "actions": {"A": ["C", "D"], "B": ["C", "D"]},
//     "payoffs": [
//       {"outcome": ["C", "C"], "values": [6, 6]},
//       ...
//     ]
//   }
//
// Syntax errors raise ParseError with line/column; invariant violations raise
// ValidationError naming the offending JSON path.
Game parse_game(std::string_view text);

// Canonical form: players and actions in declared order, payoff records in
// row-major outcome order, values printed with round-trip precision.
std::string serialize_game(const Game& game);

// Reads and parses a file. Unreadable files raise ParseError with the path.
Game load_game(const std::filesystem::path& path);

// Reads a whole file into memory; ParseError mentioning the path on failure.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace elastic
