#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "elastic/analysis.hpp"
#include "elastic/errors.hpp"
#include "elastic/evolution.hpp"
#include "elastic/game_io.hpp"
#include "elastic/identity.hpp"
#include "elastic/identity_io.hpp"
#include "elastic/report.hpp"

namespace elastic::cli {
namespace {

struct GameSource {
  bool pd = false;
  std::string path;

  void add_to(CLI::App& app) {
    auto* flag = app.add_flag("--pd", pd, "use the built-in prisoner's dilemma (R=6, S=0, T=10, P=1)");
    auto* opt = app.add_option("--game", path, "game file (JSON)");
    flag->excludes(opt);
  }

  Game load() const {
    if (pd) return reference_prisoners_dilemma();
    if (path.empty()) throw ParseError("one of --pd or --game is required");
    return load_game(path);
  }
};

struct EvolveOptions {
  GameSource source;
  std::size_t population = 100;
  std::size_t generations = 200;
  std::optional<double> gamma;
  std::string uniform;
  std::uint64_t seed = 1;
  double mutation_rate = 0.0;
  double mutation_step = 0.05;
  std::string pairing = "well-mixed";
  double assortment = 0.0;
  std::string update = "roulette";
  double distance = 1.0;
  std::size_t cooperative_action = 0;
  std::string out_path;

  void add_to(CLI::App& app, bool with_initial) {
    source.add_to(app);
    app.add_option("--pop", population, "population size")->capture_default_str();
    app.add_option("--gens", generations, "number of generations")->capture_default_str();
    if (with_initial) {
      auto* g = app.add_option("--gamma", gamma, "initial gamma of every agent (point mass)");
      auto* u = app.add_option("--uniform", uniform, "initial gammas drawn uniformly from LOW:HIGH");
      g->excludes(u);
    }
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--mutation-rate", mutation_rate, "probability of mutating an offspring's gamma")
        ->capture_default_str();
    app.add_option("--mutation-step", mutation_step, "mutation adds U[-step, step], clamped to [0,1]")
        ->capture_default_str();
    app.add_option("--pairing", pairing, "well-mixed | assortative")
        ->check(CLI::IsMember({"well-mixed", "assortative"}))
        ->capture_default_str();
    app.add_option("--assortment", assortment, "assortative matching probability")->capture_default_str();
    app.add_option("--update", update, "roulette | moran")
        ->check(CLI::IsMember({"roulette", "moran"}))
        ->capture_default_str();
    app.add_option("--distance", distance, "distance at which agents place their opponent")->capture_default_str();
    app.add_option("--coop-action", cooperative_action, "action index counted as cooperation")
        ->capture_default_str();
    app.add_option("--out", out_path, "output CSV path");
  }

  EvolveConfig config() const {
    EvolveConfig c;
    c.game = source.load();
    c.population_size = population;
    c.generations = generations;
    if (gamma) {
      c.initial = PointMass{*gamma};
    } else if (!uniform.empty()) {
      const auto colon = uniform.find(':');
      if (colon == std::string::npos) throw ParseError("--uniform expects LOW:HIGH");
      try {
        c.initial = UniformGammas{std::stod(uniform.substr(0, colon)), std::stod(uniform.substr(colon + 1))};
      } catch (const std::logic_error&) {
        throw ParseError("--uniform expects LOW:HIGH, got '" + uniform + "'");
      }
    }
    c.seed = seed;
    c.mutation_rate = mutation_rate;
    c.mutation_step = mutation_step;
    c.pairing = pairing == "assortative" ? Pairing::kAssortative : Pairing::kWellMixed;
    c.assortment = assortment;
    c.update = update == "moran" ? UpdateRule::kMoran : UpdateRule::kRoulette;
    c.identification_distance = distance;
    c.cooperative_action = cooperative_action;
    return c;
  }
};

// Resolves where a CSV goes: --out, else $ELASTIC_OUT_DIR/<default_name>, else stdout.
std::optional<std::filesystem::path> output_path(const std::string& out_path, const char* default_name) {
  if (!out_path.empty()) return std::filesystem::path(out_path);
  if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) return std::filesystem::path(dir) / default_name;
  return std::nullopt;
}

void emit(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (!path) {
    write(fallback);
    return;
  }
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ParseError("cannot open output file '" + path->string() + "'");
  write(file);
  if (!file) throw ParseError("failed writing '" + path->string() + "'");
}

std::string payoff_table(const Game& game) {
  std::ostringstream out;
  out << "payoffs:\n";
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    out << "  " << game.outcome_label(game.outcome_at(i)) << ":";
    const auto v = game.payoffs_at(i);
    for (std::size_t p = 0; p < v.size(); ++p) out << (p ? ", " : " ") << format_number(v[p]);
    out << '\n';
  }
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elastic sense-of-self analysis of normal-form games"};
  app.require_subcommand(1);

  // analyze
  GameSource analyze_source;
  std::string identity_path;
  std::optional<double> analyze_gamma;
  bool mutual = false;
  double analyze_distance = 1.0;
  std::string format = "text";
  auto* analyze = app.add_subcommand("analyze", "Nash, dominance, Pareto and altruist report");
  analyze_source.add_to(*analyze);
  analyze->add_option("--identity", identity_path, "identity profile (JSON)");
  analyze->add_option("--gamma", analyze_gamma, "gamma for every player (with --mutual, or overriding --identity)");
  analyze->add_flag("--mutual", mutual, "every player identifies with every other at --distance");
  analyze->add_option("--distance", analyze_distance, "identification distance for --mutual")->capture_default_str();
  analyze->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  // sweep
  GameSource sweep_source;
  std::string sweep_player;
  std::string grid_text = "0:1:0.01";
  double sweep_distance = 1.0;
  double tolerance = 1e-9;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "expected utility per action over a gamma grid");
  sweep_source.add_to(*sweep);
  sweep->add_option("--player", sweep_player, "player whose expected utilities are swept (default: first)");
  sweep->add_option("--grid", grid_text, "START:STOP:STEP within [0,1]")->capture_default_str();
  sweep->add_option("--distance", sweep_distance, "distance to every other player")->capture_default_str();
  sweep->add_option("--tolerance", tolerance, "bisection tolerance for crossovers")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output CSV path");

  // evolve
  EvolveOptions evolve_opts;
  auto* evolve = app.add_subcommand("evolve", "evolutionary run of a gamma population");
  evolve_opts.add_to(*evolve, true);

  // invade
  EvolveOptions invade_opts;
  double resident_gamma = 1.0;
  double invader_gamma = 0.0;
  double fraction = 0.1;
  auto* invade = app.add_subcommand("invade", "resident population vs a minority of invaders");
  invade_opts.add_to(*invade, false);
  invade->add_option("--resident-gamma", resident_gamma, "gamma of the residents")->capture_default_str();
  invade->add_option("--invader-gamma", invader_gamma, "gamma of the invaders")->capture_default_str();
  invade->add_option("--fraction", fraction, "initial invader fraction, in (0,1)")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseFailure;
  }

  try {
    if (analyze->parsed()) {
      const Game game = analyze_source.load();
      std::optional<IdentityProfile> profile;
      if (!identity_path.empty()) {
        profile = load_identity_profile(identity_path);
        if (analyze_gamma) {
          IdentityProfile adjusted = *profile;
          for (const auto& [name, self] : profile->entries()) adjusted.set(self.with_gamma(*analyze_gamma));
          profile = std::move(adjusted);
        }
      } else if (mutual || analyze_gamma) {
        if (!analyze_gamma) throw ParseError("--mutual needs --gamma");
        profile = IdentityProfile::mutual(game, *analyze_gamma, analyze_distance);
      }

      const GameReport raw = analyze_game(game);
      std::optional<Game> transformed;
      if (profile) transformed = transform_game(game, *profile);
      if (format == "json") {
        nlohmann::ordered_json doc;
        doc["raw"] = nlohmann::ordered_json::parse(render_report_json(game, raw));
        if (transformed) {
          doc["transformed"] = nlohmann::ordered_json::parse(render_report_json(*transformed, analyze_game(*transformed)));
        }
        out << doc.dump(2) << '\n';
      } else {
        out << "== raw game ==\n" << payoff_table(game) << render_report_text(game, raw);
        if (transformed) {
          out << "\n== transformed game (derived utilities) ==\n"
              << payoff_table(*transformed) << render_report_text(*transformed, analyze_game(*transformed));
        }
      }
    } else if (sweep->parsed()) {
      const Game game = sweep_source.load();
      const std::size_t player = sweep_player.empty() ? 0 : game.player_index(sweep_player);
      const std::vector<double> grid = make_grid(parse_grid(grid_text));
      const SweepResult result = gamma_sweep(game, player, sweep_distance, grid, tolerance);
      const auto path = output_path(sweep_out, "sweep.csv");
      emit(path, out, [&](std::ostream& os) { write_sweep_csv(os, game, result); });
      if (path) {
        if (result.crossovers.empty()) out << "no crossovers\n";
        for (const auto& c : result.crossovers) out << describe_crossover(game, player, c) << '\n';
      }
    } else if (evolve->parsed()) {
      const EvolveConfig config = evolve_opts.config();
      const Trajectory traj = run(config);
      const auto path = output_path(evolve_opts.out_path, "trajectory.csv");
      emit(path, out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
      const auto& last = traj.generations.back();
      (path ? out : err) << "generations=" << traj.generations.size()
                         << " final_coop_freq=" << format_number(last.coop_freq)
                         << " final_mean_gamma=" << format_number(last.mean_gamma) << '\n';
    } else if (invade->parsed()) {
      const InvasionResult result =
          invasion_experiment(resident_gamma, invader_gamma, fraction, invade_opts.config());
      const auto path = output_path(invade_opts.out_path, "invasion.csv");
      emit(path, out, [&](std::ostream& os) { write_trajectory_csv(os, result.trajectory); });
      (path ? out : err) << render_invasion_summary(result);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kOk;
}

}  // namespace elastic::cli
