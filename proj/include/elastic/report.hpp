#pragma once

#include <ostream>
#include <string>

#include "elastic/analysis.hpp"
#include "elastic/evolution.hpp"
#include "elastic/game.hpp"

namespace elastic {

// Fixed numeric format for every text output: 9 significant digits.
std::string format_number(double value);

// "{CC, CD, DC}"
std::string format_outcomes(const Game& game, const std::vector<Outcome>& outcomes);

// Long-format CSV `gamma,action,expected_utility`, followed by `#` comment
// lines summarising the crossovers.
void write_sweep_csv(std::ostream& out, const Game& game, const SweepResult& sweep);

// One line per crossover, e.g. "crossover C,D gamma*=0.333333333 direction=+1 (C overtakes D)".
std::string describe_crossover(const Game& game, std::size_t player, const Crossover& c);

std::string render_report_text(const Game& game, const GameReport& report);
std::string render_report_json(const Game& game, const GameReport& report);

// `generation,coop_freq,mean_gamma,min_gamma,max_gamma` then, per stratum,
// `share_<centre>,fitness_<centre>`.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

std::string render_invasion_summary(const InvasionResult& result);

}  // namespace elastic
