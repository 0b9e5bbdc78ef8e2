// Acceptance runner: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "elastic/analysis.hpp"
#include "elastic/evolution.hpp"
#include "elastic/game.hpp"
#include "elastic/identity.hpp"
#include "elastic/report.hpp"
#include "oracle.hpp"

namespace {

using namespace elastic;
using Clock = std::chrono::steady_clock;

constexpr std::size_t C = 0, D = 1;
constexpr double kCrossoverTol = 1e-9;
constexpr double kThresholdTol = 1e-9;
constexpr double kWeightSumTol = 1e-12;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Outcome O(std::size_t a, std::size_t b) { return Outcome{{a, b}}; }

Game mutual_transform(const Game& g, double gamma) { return transform_game(g, IdentityProfile::mutual(g, gamma)); }

// Rebuilds `g` with every payoff passed through `f(outcome, player, value)`.
Game map_payoffs(const Game& g, const std::function<double(std::size_t, std::size_t, double)>& f) {
  std::vector<double> values;
  for (std::size_t i = 0; i < g.num_outcomes(); ++i) {
    for (std::size_t p = 0; p < g.num_players(); ++p) values.push_back(f(i, p, g.payoffs_at(i)[p]));
  }
  std::vector<std::vector<std::string>> actions;
  for (std::size_t p = 0; p < g.num_players(); ++p) actions.push_back(g.actions(p));
  return make_dense_game(g.players(), actions, values);
}

double ac1_gamma = std::nan("");

Verdict crossover_regression() {
  Verdict v;
  const auto start = Clock::now();
  const auto r = crossover_gamma(reference_prisoners_dilemma(), 0, {C, D}, 1e-12, 1.0);
  const double elapsed = seconds_since(start);
  v.require(r.has_value(), "no crossover found");
  if (!r) return v;
  ac1_gamma = r->gamma;
  v.require(std::fabs(r->gamma - 1.0 / 3.0) <= kCrossoverTol, "gamma*=" + num(r->gamma));
  v.require(r->direction == 1, "C should overtake D");
  v.require(!r->multiple, "multiple roots");
  v.require(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  v.detail = v.pass ? "gamma*=" + num(r->gamma) + " runtime=" + num(elapsed) + "s" : v.detail;
  return v;
}

Verdict weight_split() {
  Verdict v;
  const Game pd = reference_prisoners_dilemma();
  const SenseOfSelf self = mutual_identification(pd, 0, 1.0 / 3.0);
  const double z = normalizer(self);
  const double w_self = identity_weight(self, "A") / z;
  const double w_other = identity_weight(self, "B") / z;
  v.require(w_self == 0.75, "self weight " + num(w_self));
  v.require(w_other == 0.25, "other weight " + num(w_other));
  if (v.pass) v.detail = "self=0.75 other=0.25 (exact)";
  return v;
}

Verdict flip_over() {
  Verdict v;
  const Game pd = reference_prisoners_dilemma();
  const auto at0 = expected_utilities(pd, mutual_identification(pd, 0, 0.0), 0);
  const auto at1 = expected_utilities(pd, mutual_identification(pd, 0, 1.0), 0);
  v.require(at1[C] == 5.5, "E(C;1)=" + num(at1[C]));
  v.require(at0[D] == 5.5, "E(D;0)=" + num(at0[D]));
  v.require(at1[D] == 3.0, "E(D;1)=" + num(at1[D]));
  v.require(at0[C] == 3.0, "E(C;0)=" + num(at0[C]));
  if (v.pass) v.detail = "E(C;1)=E(D;0)=5.5 E(D;1)=E(C;0)=3 (exact)";
  return v;
}

Verdict classical_limit() {
  Verdict v;
  const Game pd = reference_prisoners_dilemma();
  const Game t = mutual_transform(pd, 0.0);
  v.require(t == pd, "transformed game differs from the raw table");
  v.require(pure_nash(t) == std::vector<Outcome>{O(D, D)}, "pure Nash " + format_outcomes(t, pure_nash(t)));
  v.require(strictly_dominant(t, 0) == D, "D not dominant for A");
  v.require(strictly_dominant(t, 1) == D, "D not dominant for B");
  if (v.pass) v.detail = "table identical, Nash {DD}, D dominant for A and B";
  return v;
}

Verdict pareto() {
  Verdict v;
  const Game pd = reference_prisoners_dilemma();
  const auto raw = pareto_frontier(pd);
  v.require(std::find(raw.begin(), raw.end(), O(C, C)) != raw.end(), "CC not on the frontier");
  v.require(oracle::as_set(raw) == oracle::pareto_frontier(pd), "PD frontier disagrees with oracle");

  // (5, -1) is beaten by nothing for the first player, so it stays on the frontier.
  const Game g = make_dense_game({"A", "B"}, {{"a", "b"}, {"c", "d"}}, {5, -1, 4, 4, 2, 2, 0, 0});
  const auto front = pareto_frontier(g);
  v.require(oracle::as_set(front) == oracle::pareto_frontier(g), "constructed frontier disagrees with oracle");
  bool negative = false;
  for (const auto& o : front) negative = negative || g.payoff(o, 0) < 0 || g.payoff(o, 1) < 0;
  v.require(negative, "no frontier outcome with a negative payoff");
  if (v.pass) v.detail = "PD frontier " + format_outcomes(pd, raw) + ", constructed frontier " + format_outcomes(g, front);
  return v;
}

Verdict derived_threshold() {
  Verdict v;
  const Game pd = reference_prisoners_dilemma();
  const auto cc_is_nash = [&](double gamma) {
    const auto eq = pure_nash(mutual_transform(pd, gamma));
    return std::find(eq.begin(), eq.end(), O(C, C)) != eq.end();
  };
  const double t = find_threshold(cc_is_nash, 0.0, 1.0, 1e-12);
  v.require(std::fabs(t - 2.0 / 3.0) <= kThresholdTol, "threshold " + num(t));

  // Exhaustive deviation check on a 1/1000 grid, which never hits 2/3 exactly.
  std::size_t mismatches = 0;
  for (int k = 0; k <= 1000; ++k) {
    const double gamma = k / 1000.0;
    const bool in_oracle = oracle::pure_nash(mutual_transform(pd, gamma)).count({C, C}) > 0;
    mismatches += in_oracle != (gamma >= 2.0 / 3.0);
    mismatches += in_oracle != cc_is_nash(gamma);
  }
  v.require(mismatches == 0, std::to_string(mismatches) + " grid mismatches");
  v.require(cc_is_nash(2.0 / 3.0), "CC not Nash at gamma=2/3");
  if (v.pass) v.detail = "threshold=" + num(t) + ", 1001 grid points agree with the deviation oracle";
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240607);
  std::size_t agree = 0;
  constexpr std::size_t kGames = 200;
  for (std::size_t t = 0; t < kGames; ++t) {
    const Game g = oracle::random_game(rng, 3, 4);
    bool ok = oracle::as_set(pure_nash(g)) == oracle::pure_nash(g) &&
              oracle::as_set(pareto_frontier(g)) == oracle::pareto_frontier(g);
    for (std::size_t p = 0; p < g.num_players(); ++p) ok = ok && strictly_dominant(g, p) == oracle::strictly_dominant(g, p);
    agree += ok;
  }
  const double elapsed = seconds_since(start);
  v.require(agree == kGames, std::to_string(agree) + "/200 agree");
  v.require(elapsed < 10.0, "runtime " + num(elapsed) + " s");
  if (v.pass) v.detail = "200/200 agree, runtime=" + num(elapsed) + "s";
  return v;
}

Verdict property_suite() {
  Verdict v;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  std::size_t bounds = 0, weights = 0, affine = 0, identity = 0, monotone = 0;
  constexpr std::size_t kTrials = 100;

  for (std::size_t trial = 0; trial < kTrials; ++trial) {
    Game g = oracle::random_game(rng, 3, 4);
    const std::size_t n = g.num_players();
    const double gamma = unit(rng);
    std::vector<IdentityEntry> others;
    for (std::size_t q = 1; q < n; ++q) others.push_back({g.player(q), dist(rng)});
    const SenseOfSelf self(g.player(0), gamma, others);
    const double tol = 1e-12 * std::max(1.0, g.scale());

    // Convex-combination bounds.
    bool in_bounds = true;
    for (const auto& o : g.outcomes()) {
      const double u = derived_utility(self, g, o);
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t q = 0; q < n; ++q) {
        lo = std::min(lo, g.payoff(o, q));
        hi = std::max(hi, g.payoff(o, q));
      }
      in_bounds = in_bounds && u >= lo - tol && u <= hi + tol;
    }
    bounds += in_bounds;

    // Normalized weights sum to one.
    double sum = 0.0;
    for (const auto& e : self.entries()) sum += identity_weight(self, e.object) / normalizer(self);
    weights += std::fabs(sum - 1.0) <= kWeightSumTol;

    // Positive affine rescaling keeps the argmax of expected utility.
    const double a = 0.1 + 10.0 * unit(rng);
    const double b = 20.0 * unit(rng) - 10.0;
    const Game scaled = map_payoffs(g, [&](std::size_t, std::size_t, double x) { return a * x + b; });
    const auto eu = expected_utilities(g, self, 0);
    const auto eu_scaled = expected_utilities(scaled, self, 0);
    const auto argmax = [](const std::vector<double>& xs, double eps) {
      const double best = *std::max_element(xs.begin(), xs.end());
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] >= best - eps) idx.push_back(i);
      return idx;
    };
    affine += argmax(eu, 1e-9 * std::max(1.0, g.scale())) == argmax(eu_scaled, 1e-9 * std::max(1.0, scaled.scale()));

    // gamma = 0 leaves the game unchanged.
    identity += mutual_transform(g, 0.0) == g;

    // Raising a member's payoff never lowers the derived utility.
    const std::size_t target = g.num_outcomes() > 0 ? trial % g.num_outcomes() : 0;
    const std::size_t member = 1 + trial % (n - 1);
    const Game raised =
        map_payoffs(g, [&](std::size_t i, std::size_t p, double x) { return i == target && p == member ? x + 1.0 : x; });
    const Outcome o = g.outcome_at(target);
    monotone += derived_utility(self, raised, o) >= derived_utility(self, g, o) - tol;
  }

  v.require(bounds == kTrials, "bounds " + std::to_string(bounds));
  v.require(weights == kTrials, "weights " + std::to_string(weights));
  v.require(affine == kTrials, "affine " + std::to_string(affine));
  v.require(identity == kTrials, "gamma=0 " + std::to_string(identity));
  v.require(monotone == kTrials, "monotonicity " + std::to_string(monotone));
  if (v.pass) v.detail = "5 properties x 100 trials";
  return v;
}

std::string trajectory_csv(const EvolveConfig& config) {
  std::ostringstream os;
  write_trajectory_csv(os, run(config));
  return os.str();
}

Verdict evolution_endpoints() {
  Verdict v;
  const auto start = Clock::now();
  EvolveConfig c;
  c.game = reference_prisoners_dilemma();
  c.population_size = 100;
  c.generations = 200;
  c.mutation_rate = 0.0;
  c.seed = 12345;

  for (double gamma : {0.0, 1.0}) {
    c.initial = PointMass{gamma};
    const Trajectory t = run(c);
    bool all = t.generations.size() == 200;
    for (const auto& g : t.generations) all = all && g.coop_freq == gamma;
    v.require(all, "gamma=" + num(gamma) + " monoculture cooperation is not " + num(gamma));
  }

  // Repeatability on runs that consume randomness in every step.
  for (const InitialDistribution init : {InitialDistribution{PointMass{1.0 / 3.0}},
                                         InitialDistribution{UniformGammas{0.0, 1.0}}}) {
    c.initial = init;
    v.require(trajectory_csv(c) == trajectory_csv(c), "repeated runs differ");
  }
  const double elapsed = seconds_since(start);
  v.require(elapsed < 5.0, "runtime " + num(elapsed) + " s");
  if (v.pass) v.detail = "coop 0.0 / 1.0, repeat runs byte-identical, runtime=" + num(elapsed) + "s";
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

Verdict sweep_csv_crossing() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path csv = fs::temp_directory_path() / "elastic_acceptance_sweep.csv";
  std::ostringstream out, err;
  const int code = cli::run({"elastic", "sweep", "--pd", "--player", "A", "--grid", "0:1:0.01", "--out", csv.string()},
                            out, err);
  v.require(code == 0, "sweep exited with " + std::to_string(code) + ": " + err.str());
  if (code != 0) return v;

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  v.require(line == "gamma,action,expected_utility", "bad header '" + line + "'");
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  std::vector<double> reported;
  while (std::getline(in, line)) {
    if (line.rfind("# crossover", 0) == 0) {
      const auto pos = line.find("gamma*=");
      reported.push_back(std::stod(line.substr(pos + 7)));
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ',');
    curves[f[1]].emplace_back(std::stod(f[0]), std::stod(f[2]));
  }
  fs::remove(csv);

  v.require(curves.size() == 2 && curves["C"].size() == 101 && curves["D"].size() == 101, "expected two 101-point curves");
  if (!v.pass) return v;
  std::size_t crossings = 0;
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 1; k < 101; ++k) {
    const double prev = curves["C"][k - 1].second - curves["D"][k - 1].second;
    const double cur = curves["C"][k].second - curves["D"][k].second;
    if ((prev < 0) != (cur < 0)) {
      ++crossings;
      lo = curves["C"][k - 1].first;
      hi = curves["C"][k].first;
    }
  }
  v.require(crossings == 1, std::to_string(crossings) + " crossings");
  v.require(crossings != 1 || (lo <= ac1_gamma && ac1_gamma <= hi), "crossing not bracketing gamma*");
  v.require(reported.size() == 1 && std::fabs(reported[0] - ac1_gamma) <= kCrossoverTol, "reported crossover mismatch");
  if (v.pass) v.detail = "one crossing in [" + num(lo) + ", " + num(hi) + "], reported gamma*=" + num(reported[0]);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"AC1 crossover gamma* = 1/3 within 1e-9, < 1 s", crossover_regression},
      {"AC2 self:other weights 3/4 : 1/4 at gamma = 1/3", weight_split},
      {"AC3 expected utilities flip between gamma = 0 and 1", flip_over},
      {"AC4 gamma = 0 reproduces the raw game, Nash {DD}, D dominant", classical_limit},
      {"AC5 Pareto frontier regressions against the oracle", pareto},
      {"AC6 CC becomes Nash at gamma = 2/3 within 1e-9", derived_threshold},
      {"AC7 200 random games match the exhaustive oracle, < 10 s", oracle_equivalence},
      {"AC8 derived-utility property suite", property_suite},
      {"AC9 evolution monoculture endpoints and repeatability, < 5 s", evolution_endpoints},
      {"AC10 sweep CSV curves cross once at gamma*", sweep_csv_crossing},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.pass;
    std::printf("[%s] %s -- %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
