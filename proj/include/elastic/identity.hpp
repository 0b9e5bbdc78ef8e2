#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elastic/game.hpp"

namespace elastic {

// One member of an identity set: an object name and its semantic distance
// from the owner.
struct IdentityEntry {
  std::string object;
  double distance = 0.0;

  bool operator==(const IdentityEntry&) const = default;
};

// An agent's elastic sense of self: the identity set with semantic distances
// and the attenuation gamma. The owner is always a member at distance 0;
// members are weighted gamma^d and normalized to sum to one.
class SenseOfSelf {
 public:
  // Classical self-interest: the identity set is {owner}.
  explicit SenseOfSelf(std::string owner, double gamma = 0.0);

  // `others` must not contain the owner at a non-zero distance; an explicit
  // (owner, 0) entry is accepted and merged. Throws ValidationError on negative
  // or non-finite distances, duplicate objects, or gamma outside [0, 1].
  SenseOfSelf(std::string owner, double gamma, std::vector<IdentityEntry> others);

  const std::string& owner() const { return owner_; }
  double gamma() const { return gamma_; }
  // Owner first, then the other members in insertion order.
  const std::vector<IdentityEntry>& entries() const { return entries_; }
  bool contains(std::string_view object) const;

  SenseOfSelf with_gamma(double gamma) const;

  bool operator==(const SenseOfSelf&) const = default;

 private:
  std::string owner_;
  double gamma_;
  std::vector<IdentityEntry> entries_;
};

// The owner identifying with every other player of `game` at `distance`.
SenseOfSelf mutual_identification(const Game& game, std::size_t player, double gamma, double distance = 1.0);

// gamma^d for a member, with gamma^0 = 1 even at gamma = 0.
double identity_weight(const SenseOfSelf& self, std::string_view object);

// Z = sum of member weights; always >= 1.
double normalizer(const SenseOfSelf& self);

// Custom payoff semantics for an abstract identity object. Returns nullopt if
// the object has no payoff in the given outcome.
using ObjectPayoff = std::function<std::optional<double>(const Game&, const Outcome&)>;

// Maps identity objects to payoffs. Players of the game always resolve to
// their raw payoff; groups resolve to the mean of their members' payoffs;
// anything else must be registered with add_object().
class PayoffResolver {
 public:
  PayoffResolver() = default;

  PayoffResolver& add_group(std::string name, std::vector<std::string> members);
  PayoffResolver& add_object(std::string name, ObjectPayoff payoff);

  // Throws ValidationError when the object cannot be resolved.
  double resolve(const Game& game, std::string_view object, const Outcome& outcome) const;

  const std::map<std::string, std::vector<std::string>, std::less<>>& groups() const { return groups_; }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> groups_;
  std::map<std::string, ObjectPayoff, std::less<>> objects_;
};

// Normalized, attenuation-weighted combination of member payoffs:
// u = (1/Z) * sum_o gamma^d(o) * payoff(o).
double derived_utility(const SenseOfSelf& self, const Game& game, const Outcome& outcome,
                       const PayoffResolver& resolver = {});

// Per-player senses of self. Players without an entry use classical self-interest.
class IdentityProfile {
 public:
  IdentityProfile() = default;

  // Replaces any existing entry for self.owner().
  IdentityProfile& set(SenseOfSelf self);
  // Entry for `player`, or the classical {player} identity.
  SenseOfSelf for_player(const std::string& player) const;
  const std::map<std::string, SenseOfSelf, std::less<>>& entries() const { return selves_; }

  PayoffResolver& resolver() { return resolver_; }
  const PayoffResolver& resolver() const { return resolver_; }

  // Every player identifies with every other at `distance` with a shared gamma.
  static IdentityProfile mutual(const Game& game, double gamma, double distance = 1.0);

 private:
  std::map<std::string, SenseOfSelf, std::less<>> selves_;
  PayoffResolver resolver_;
};

// Same players and actions; each player's payoff replaced by its derived utility.
Game transform_game(const Game& game, const IdentityProfile& profile);

}  // namespace elastic
