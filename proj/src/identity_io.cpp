#include "elastic/identity_io.hpp"

#include "elastic/errors.hpp"
#include "elastic/game_io.hpp"
#include "json_util.hpp"

namespace elastic {

using nlohmann::json;
using detail::as_number;
using detail::as_string;
using detail::require;

IdentityProfile parse_identity_profile(std::string_view text) {
  const json doc = detail::parse_json(text, "identity profile");
  if (!doc.is_object()) throw ValidationError("identity profile: top level must be an object");

  IdentityProfile profile;
  if (auto it = doc.find("players"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("players: expected a mapping player -> identity");
    for (const auto& [name, jself] : it->items()) {
      const std::string path = "players." + name;
      const double gamma = as_number(require(jself, "gamma", path), path + ".gamma");
      std::vector<IdentityEntry> others;
      if (auto jw = jself.find("identifies_with"); jw != jself.end()) {
        if (!jw->is_array()) throw ValidationError(path + ".identifies_with: expected a list");
        for (std::size_t i = 0; i < jw->size(); ++i) {
          const std::string epath = path + ".identifies_with[" + std::to_string(i) + "]";
          const json& rec = (*jw)[i];
          others.push_back({as_string(require(rec, "object", epath), epath + ".object"),
                            as_number(require(rec, "distance", epath), epath + ".distance")});
        }
      }
      try {
        profile.set(SenseOfSelf(name, gamma, std::move(others)));
      } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
      }
    }
  }
  if (auto it = doc.find("groups"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("groups: expected a mapping name -> list of players");
    for (const auto& [name, jmembers] : it->items()) {
      const std::string path = "groups." + name;
      if (!jmembers.is_array()) throw ValidationError(path + ": expected a list");
      std::vector<std::string> members;
      for (std::size_t i = 0; i < jmembers.size(); ++i) {
        members.push_back(as_string(jmembers[i], path + "[" + std::to_string(i) + "]"));
      }
      try {
        profile.resolver().add_group(name, std::move(members));
      } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
      }
    }
  }
  return profile;
}

std::string serialize_identity_profile(const IdentityProfile& profile) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json players = nlohmann::ordered_json::object();
  for (const auto& [name, self] : profile.entries()) {
    nlohmann::ordered_json with = nlohmann::ordered_json::array();
    for (std::size_t i = 1; i < self.entries().size(); ++i) {
      with.push_back({{"object", self.entries()[i].object}, {"distance", self.entries()[i].distance}});
    }
    players[name] = {{"gamma", self.gamma()}, {"identifies_with", std::move(with)}};
  }
  doc["players"] = std::move(players);
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto& [name, members] : profile.resolver().groups()) groups[name] = members;
  doc["groups"] = std::move(groups);
  return doc.dump(2) + "\n";
}

IdentityProfile load_identity_profile(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_identity_profile(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace elastic
