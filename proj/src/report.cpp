#include "elastic/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace elastic {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_outcomes(const Game& game, const std::vector<Outcome>& outcomes) {
  std::string s = "{";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (i) s += ", ";
    s += game.outcome_label(outcomes[i]);
  }
  return s + "}";
}

std::string describe_crossover(const Game& game, std::size_t player, const Crossover& c) {
  const auto& labels = game.actions(player);
  const std::string& first = labels[c.first_action];
  const std::string& second = labels[c.second_action];
  std::string line = "crossover " + first + "," + second + " gamma*=" + format_number(c.gamma) +
                     " direction=" + (c.direction > 0 ? "+1" : "-1");
  line += c.direction > 0 ? " (" + first + " overtakes " + second + ")" : " (" + second + " overtakes " + first + ")";
  return line;
}

void write_sweep_csv(std::ostream& out, const Game& game, const SweepResult& sweep) {
  const auto& labels = game.actions(sweep.player);
  out << "gamma,action,expected_utility\n";
  for (std::size_t k = 0; k < sweep.gamma_grid.size(); ++k) {
    for (std::size_t a = 0; a < labels.size(); ++a) {
      out << format_number(sweep.gamma_grid[k]) << ',' << labels[a] << ','
          << format_number(sweep.expected_utilities[k][a]) << '\n';
    }
  }
  out << "# player=" << game.player(sweep.player);
  if (sweep.other_distance) out << " other_distance=" << format_number(*sweep.other_distance);
  out << " grid_points=" << sweep.gamma_grid.size() << '\n';
  if (sweep.crossovers.empty()) out << "# no crossovers\n";
  for (const auto& c : sweep.crossovers) out << "# " << describe_crossover(game, sweep.player, c) << '\n';
}

std::string render_report_text(const Game& game, const GameReport& report) {
  std::ostringstream out;
  out << "players: ";
  for (std::size_t p = 0; p < game.num_players(); ++p) out << (p ? ", " : "") << game.player(p);
  out << '\n';
  out << "pure Nash equilibria: " << format_outcomes(game, report.pure_nash) << '\n';
  out << "strictly dominant actions:";
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    const auto& d = report.strictly_dominant[p];
    out << (p ? "; " : " ") << game.player(p) << ": " << (d ? game.actions(p)[*d] : std::string("none"));
  }
  out << '\n';
  out << "Pareto frontier: " << format_outcomes(game, report.pareto_frontier) << '\n';
  if (!report.altruist_attractors.empty()) {
    out << "altruist attractors:";
    for (std::size_t p = 0; p < report.altruist_attractors.size(); ++p) {
      out << (p ? "; " : " ") << game.player(p) << ": " << format_outcomes(game, report.altruist_attractors[p]);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_report_json(const Game& game, const GameReport& report) {
  using nlohmann::ordered_json;
  auto outcomes = [&](const std::vector<Outcome>& list) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : list) {
      ordered_json labels = ordered_json::array();
      for (std::size_t p = 0; p < game.num_players(); ++p) labels.push_back(game.actions(p)[o[p]]);
      arr.push_back(std::move(labels));
    }
    return arr;
  };
  ordered_json doc;
  doc["players"] = game.players();
  doc["pure_nash"] = outcomes(report.pure_nash);
  ordered_json dominant = ordered_json::object();
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    const auto& d = report.strictly_dominant[p];
    dominant[game.player(p)] = d ? ordered_json(game.actions(p)[*d]) : ordered_json(nullptr);
  }
  doc["strictly_dominant"] = std::move(dominant);
  doc["pareto_frontier"] = outcomes(report.pareto_frontier);
  ordered_json altruist = ordered_json::object();
  for (std::size_t p = 0; p < report.altruist_attractors.size(); ++p) {
    altruist[game.player(p)] = outcomes(report.altruist_attractors[p]);
  }
  doc["altruist_attractors"] = std::move(altruist);
  return doc.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "generation,coop_freq,mean_gamma,min_gamma,max_gamma";
  for (double c : trajectory.strata) {
    const std::string tag = format_number(c);
    out << ",share_" << tag << ",fitness_" << tag;
  }
  out << '\n';
  for (const auto& g : trajectory.generations) {
    out << g.generation << ',' << format_number(g.coop_freq) << ',' << format_number(g.mean_gamma) << ','
        << format_number(g.min_gamma) << ',' << format_number(g.max_gamma);
    for (const auto& s : g.strata) {
      out << ',' << format_number(s.share) << ',';
      if (s.mean_fitness) out << format_number(*s.mean_fitness);
    }
    out << '\n';
  }
}

std::string render_invasion_summary(const InvasionResult& r) {
  std::ostringstream out;
  out << "resident_gamma=" << format_number(r.resident_gamma) << " invader_gamma=" << format_number(r.invader_gamma)
      << " initial_invader_share=" << format_number(r.initial_invader_share) << '\n';
  out << "final_resident_share=" << format_number(r.final_resident_share)
      << " final_invader_share=" << format_number(r.final_invader_share)
      << " share_sum=" << format_number(r.final_resident_share + r.final_invader_share) << '\n';
  out << "invaders_grew=" << (r.invaders_grew ? "yes" : "no") << '\n';
  return out.str();
}

}  // namespace elastic
