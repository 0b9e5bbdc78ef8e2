#include "elastic/identity.hpp"

#include <algorithm>
#include <cmath>

#include "elastic/errors.hpp"

namespace elastic {
namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ValidationError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
}

double weight_of(double gamma, double distance) {
  if (distance == 0.0) return 1.0;
  return std::pow(gamma, distance);
}

}  // namespace

SenseOfSelf::SenseOfSelf(std::string owner, double gamma) : SenseOfSelf(std::move(owner), gamma, {}) {}

SenseOfSelf::SenseOfSelf(std::string owner, double gamma, std::vector<IdentityEntry> others)
    : owner_(std::move(owner)), gamma_(gamma) {
  check_gamma(gamma_);
  entries_.push_back({owner_, 0.0});
  for (auto& e : others) {
    if (!std::isfinite(e.distance) || e.distance < 0.0) {
      throw ValidationError("identity object '" + e.object + "': distance must be a finite non-negative real");
    }
    if (e.object == owner_) {
      if (e.distance != 0.0) throw ValidationError("owner '" + owner_ + "' must be at distance 0");
      continue;
    }
    if (contains(e.object)) throw ValidationError("duplicate identity object '" + e.object + "'");
    entries_.push_back(std::move(e));
  }
}

bool SenseOfSelf::contains(std::string_view object) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const IdentityEntry& e) { return e.object == object; });
}

SenseOfSelf SenseOfSelf::with_gamma(double gamma) const {
  check_gamma(gamma);
  SenseOfSelf copy = *this;
  copy.gamma_ = gamma;
  return copy;
}

SenseOfSelf mutual_identification(const Game& game, std::size_t player, double gamma, double distance) {
  std::vector<IdentityEntry> others;
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    if (p != player) others.push_back({game.player(p), distance});
  }
  return SenseOfSelf(game.player(player), gamma, std::move(others));
}

double identity_weight(const SenseOfSelf& self, std::string_view object) {
  for (const auto& e : self.entries()) {
    if (e.object == object) return weight_of(self.gamma(), e.distance);
  }
  throw ValidationError("'" + std::string(object) + "' is not in the identity set of '" + self.owner() + "'");
}

double normalizer(const SenseOfSelf& self) {
  double z = 0.0;
  for (const auto& e : self.entries()) z += weight_of(self.gamma(), e.distance);
  return z;
}

PayoffResolver& PayoffResolver::add_group(std::string name, std::vector<std::string> members) {
  if (members.empty()) throw ValidationError("group '" + name + "' has no members");
  objects_.erase(name);
  groups_[std::move(name)] = std::move(members);
  return *this;
}

PayoffResolver& PayoffResolver::add_object(std::string name, ObjectPayoff payoff) {
  groups_.erase(name);
  objects_[std::move(name)] = std::move(payoff);
  return *this;
}

double PayoffResolver::resolve(const Game& game, std::string_view object, const Outcome& outcome) const {
  if (game.has_player(object)) return game.payoff(outcome, game.player_index(object));
  if (auto g = groups_.find(object); g != groups_.end()) {
    double sum = 0.0;
    for (const auto& member : g->second) {
      if (!game.has_player(member)) {
        throw ValidationError("group '" + g->first + "': member '" + member + "' is not a player");
      }
      sum += game.payoff(outcome, game.player_index(member));
    }
    return sum / static_cast<double>(g->second.size());
  }
  if (auto o = objects_.find(object); o != objects_.end()) {
    if (auto v = o->second(game, outcome)) return *v;
    throw ValidationError("identity object '" + std::string(object) + "' has no payoff in outcome " +
                          game.outcome_label(outcome));
  }
  throw ValidationError("cannot resolve payoff of identity object '" + std::string(object) + "'");
}

double derived_utility(const SenseOfSelf& self, const Game& game, const Outcome& outcome,
                       const PayoffResolver& resolver) {
  // Evaluated as p_self + sum_o (w_o / Z) (p_o - p_self), which equals the
  // normalized weighted sum; this keeps gamma = 0 and all-equal payoffs exact.
  const double z = normalizer(self);
  const auto& entries = self.entries();
  const double own = resolver.resolve(game, entries.front().object, outcome);
  double shift = 0.0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const double w = weight_of(self.gamma(), entries[i].distance);
    const double p = resolver.resolve(game, entries[i].object, outcome);
    if (w != 0.0) shift += (w / z) * (p - own);
  }
  const double u = own + shift;
  if (!std::isfinite(u)) throw NumericError("non-finite derived utility for '" + self.owner() + "'");
  return u;
}

IdentityProfile& IdentityProfile::set(SenseOfSelf self) {
  std::string key = self.owner();
  selves_.insert_or_assign(std::move(key), std::move(self));
  return *this;
}

SenseOfSelf IdentityProfile::for_player(const std::string& player) const {
  if (auto it = selves_.find(player); it != selves_.end()) return it->second;
  return SenseOfSelf(player);
}

IdentityProfile IdentityProfile::mutual(const Game& game, double gamma, double distance) {
  IdentityProfile profile;
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    profile.set(mutual_identification(game, p, gamma, distance));
  }
  return profile;
}

Game transform_game(const Game& game, const IdentityProfile& profile) {
  for (const auto& [owner, _] : profile.entries()) {
    if (!game.has_player(owner)) throw ValidationError("identity profile names unknown player '" + owner + "'");
  }
  std::vector<SenseOfSelf> selves;
  for (const auto& p : game.players()) selves.push_back(profile.for_player(p));

  std::vector<double> values;
  values.reserve(game.num_outcomes() * game.num_players());
  for (std::size_t i = 0; i < game.num_outcomes(); ++i) {
    const Outcome o = game.outcome_at(i);
    for (const auto& self : selves) values.push_back(derived_utility(self, game, o, profile.resolver()));
  }
  return make_dense_game(game.players(), game.actions(), std::move(values));
}

}  // namespace elastic
